//! Reasoning over scene-centric mystery knowledge graphs.
//!
//! Three independent culprit pipelines share one graph model:
//!
//! * [`rules`]: stratified forward chaining and the motive / opportunity /
//!   means analysis, with derivation trees as explanations;
//! * [`solver`]: finite-domain scenario grounding, DPLL, model enumeration,
//!   backbones and weighted MaxSAT, plus [`tensor`] Tucker completion over
//!   subject-verb-object triples;
//! * [`ibis`]: an issue-based discussion among per-hypothesis agents.
//!
//! [`eval`] scores the resulting explanations.

pub mod eval;
pub mod ibis;
pub mod kg;
pub mod query;
pub mod rules;
pub mod solver;
pub mod tensor;
