//! Conjunctive triple-pattern matching and the temporal order over scenes.

mod matcher;
mod pattern;
mod temporal;

pub(crate) use matcher::join;
pub use matcher::match_pattern;
pub use pattern::{
    parse_pattern, read_pattern_term, read_triple_pattern, Binding, Pattern, PatternTerm, TriplePattern, Var,
};
pub use temporal::{scenes_at_time, temporal_order, QueryError, TemporalOrder};
