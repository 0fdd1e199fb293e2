//! Issue-based discussion: one agent per `isKilledBy(v, x)` hypothesis
//! elaborates how and why, attacks the others once, and the most
//! consistent hypothesis wins.

mod discussion;
mod graph;

use thiserror::Error;

use crate::kg::Term;
use crate::rules::MomError;

pub use discussion::{
    attack, consistency, discuss, elaborate, generate_hypotheses, seed_issues, select, ConReason, ConsistencyScore,
    Counterargument, Discussion, DiscussionAgent, Explanation, Hypothesis, Rulebooks,
};
pub use graph::{IbisGraph, IbisNode, NodeKind, Payload};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IbisError {
    #[error("no victims given")]
    NoVictims,
    #[error("{0} is not a person")]
    UnknownPerson(Term),
    #[error("no issue asks who murdered {0}")]
    NoIssue(Term),
    #[error("agent for {0} cannot attack its own hypothesis")]
    SelfAttack(Term),
    #[error("hypotheses concern different victims")]
    VictimMismatch,
    #[error("no consistency scores to select from")]
    EmptyScores,
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("{kind:?} cannot attach to {parent:?}")]
    BadAttachment { kind: NodeKind, parent: Option<NodeKind> },
    #[error("malformed IBIS document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Mom(#[from] MomError),
}

impl IbisError {
    pub fn code(&self) -> &'static str {
        match self {
            IbisError::NoVictims | IbisError::UnknownPerson(_) => "UNKNOWN_PERSON",
            IbisError::NoIssue(_) => "NO_ISSUE",
            IbisError::SelfAttack(_) => "SELF_ATTACK",
            IbisError::VictimMismatch => "VICTIM_MISMATCH",
            IbisError::EmptyScores => "EMPTY_SCORES",
            IbisError::UnknownNode(_) => "UNKNOWN_NODE",
            IbisError::BadAttachment { .. } => "BAD_ATTACHMENT",
            IbisError::Malformed(_) => "MALFORMED_IBIS",
            IbisError::Mom(e) => e.code(),
        }
    }
}
