//! Stratified datalog over triples, with proof trees, and the motive /
//! opportunity / means pipeline built on it.

mod derivation;
mod dsl;
mod engine;
pub mod mom;
mod rule;

pub use derivation::{Derivation, Step};
pub use dsl::parse_rules;
pub use engine::{forward_chain, stratify, Inference};
pub use mom::{
    candidate_methods, combine_mom, find_incident, infer_means, infer_motives, infer_opportunity, run_mom, Incident,
    Means, MomError, MomReport, Motive, Opportunity, VerdictEntry,
};
pub use rule::{skolem, Head, HeadTerm, Rule, RuleError};
