//! Scene-centric knowledge graphs: RDF terms, an indexed triple store,
//! a Turtle subset, the 5W scene view and schema validation.

mod graph;
pub(crate) mod lexer;
mod scene;
mod term;
mod turtle;
mod validate;
pub mod vocab;

pub use graph::{Graph, Triple};
pub use lexer::{Cursor, Name, ParseError, ParseErrorKind};
pub use scene::{
    expand_or, is_scene, scene_ids, scene_kind, scene_view, LinkRelation, Scene, SceneError, SceneKind, Timestamp,
};
pub use term::{Iri, Literal, Term, TermError};
pub use turtle::{parse_turtle, serialize_turtle};
pub(crate) use validate::is_negative_verb;
pub use validate::{validate_scene, validate_schema, Violation, ViolationCode};
