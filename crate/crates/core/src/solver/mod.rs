//! Finite-domain scenarios, grounded to propositional logic and solved with
//! a deterministic DPLL: satisfiability, model enumeration, backbones and
//! weighted MaxSAT.

mod cnf;
mod dpll;
mod formula;
mod ground;
mod report;
mod scenario;
mod tseitin;

use thiserror::Error;

use crate::kg::ParseError;

pub use cnf::{normalize_clause, var_of, Cnf, Lit, Model};
pub use dpll::{backbone, enumerate_models, solve, solve_weighted, Enumeration, Weighted};
pub use formula::Formula;
pub use ground::{ground, Encoded, GroundAtom, Grounding};
pub use report::{scenario_report, AtomVerdict, ScenarioReport, SuspectVerdict, Verdict};
pub use scenario::{
    parse_scenario, Arg, AtomExpr, Binder, Cardinality, CardinalityKind, Expr, PredDecl, ScenarioSpec, SLOT_DOMAIN,
};
pub use tseitin::{to_cnf, Encoder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("the hard clauses are unsatisfiable")]
    UnsatInput,
}

impl SolverError {
    pub fn code(&self) -> &'static str {
        match self {
            SolverError::UnsatInput => "UNSAT_INPUT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("undeclared {context} {symbol:?}")]
    UndeclaredSymbol { symbol: String, context: String },
    #[error("empty domain {domain:?} under a quantifier")]
    EmptyDomain { domain: String },
    #[error("{pred} takes {expected} arguments, found {found}")]
    ArityMismatch {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("{symbol:?} is not in domain {domain:?}")]
    TypeMismatch { symbol: String, domain: String },
    #[error("cannot infer a domain for variable {var:?}")]
    UninferableDomain { var: String },
}

impl ScenarioError {
    pub fn code(&self) -> &'static str {
        match self {
            ScenarioError::Parse(_) => "PARSE_ERROR",
            ScenarioError::UndeclaredSymbol { .. } => "UNDECLARED_SYMBOL",
            ScenarioError::EmptyDomain { .. } => "EMPTY_DOMAIN",
            ScenarioError::ArityMismatch { .. } => "ARITY_MISMATCH",
            ScenarioError::TypeMismatch { .. } => "TYPE_MISMATCH",
            ScenarioError::UninferableDomain { .. } => "UNINFERABLE_DOMAIN",
        }
    }
}

/// Parses and grounds a scenario spec.
pub fn load_scenario(text: &str) -> Result<(ScenarioSpec, Grounding), ScenarioError> {
    let spec = parse_scenario(text)?;
    let g = ground(&spec)?;
    Ok((spec, g))
}
