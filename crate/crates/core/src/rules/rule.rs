use std::collections::BTreeSet;
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::kg::{Graph, Term, Triple};
use crate::query::{Binding, PatternTerm, TriplePattern, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("rule {rule}: variable {var} does not occur in a positive body pattern")]
    Unsafe { rule: String, var: Var },
    #[error("rules are not stratifiable; negation inside the cycle {}", .cycle.join(" -> "))]
    Unstratifiable { cycle: Vec<String> },
}

impl RuleError {
    pub fn code(&self) -> &'static str {
        match self {
            RuleError::Unsafe { .. } => "UNSAFE_RULE",
            RuleError::Unstratifiable { .. } => "UNSTRATIFIABLE",
        }
    }
}

/// A head position: a pattern term, or a Skolem term `[t1 t2 ...]` that
/// names one fresh node per distinct argument tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HeadTerm {
    Pattern(PatternTerm),
    Skolem(Vec<PatternTerm>),
}

impl HeadTerm {
    fn vars(&self) -> Vec<&Var> {
        match self {
            HeadTerm::Pattern(p) => p.as_var().into_iter().collect(),
            HeadTerm::Skolem(args) => args.iter().filter_map(PatternTerm::as_var).collect(),
        }
    }

    fn instantiate(&self, b: &Binding) -> Option<Term> {
        match self {
            HeadTerm::Pattern(p) => p.resolve(b).cloned(),
            HeadTerm::Skolem(args) => {
                let terms: Vec<&Term> = args.iter().map(|a| a.resolve(b)).collect::<Option<_>>()?;
                Some(skolem(&terms))
            }
        }
    }

    /// The constant predicate this position always produces, if any.
    pub fn constant(&self) -> Option<&Term> {
        match self {
            HeadTerm::Pattern(PatternTerm::Term(t)) => Some(t),
            _ => None,
        }
    }
}

impl From<PatternTerm> for HeadTerm {
    fn from(p: PatternTerm) -> Self {
        HeadTerm::Pattern(p)
    }
}

impl From<Term> for HeadTerm {
    fn from(t: Term) -> Self {
        HeadTerm::Pattern(PatternTerm::Term(t))
    }
}

impl fmt::Display for HeadTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeadTerm::Pattern(p) => write!(f, "{p}"),
            HeadTerm::Skolem(args) => {
                let parts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
                write!(f, "[{}]", parts.join(" "))
            }
        }
    }
}

/// Deterministic blank node for a Skolem tuple: readable local names plus
/// a hash of the full terms.
pub fn skolem(args: &[&Term]) -> Term {
    let mut hasher = Sha256::new();
    for a in args {
        hasher.update(a.to_string().as_bytes());
        hasher.update([0u8]);
    }
    let digest = hasher.finalize();
    let hash: String = digest.iter().take(4).map(|b| format!("{b:02x}")).collect();
    let readable: Vec<String> = args
        .iter()
        .map(|a| {
            a.short_name()
                .chars()
                .map(|c| if c.is_alphanumeric() { c } else { '_' })
                .collect()
        })
        .collect();
    Term::Blank(format!("sk_{}_{hash}", readable.join("_")))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Head {
    pub subject: HeadTerm,
    pub predicate: HeadTerm,
    pub object: HeadTerm,
}

impl Head {
    pub fn new(subject: impl Into<HeadTerm>, predicate: impl Into<HeadTerm>, object: impl Into<HeadTerm>) -> Self {
        Head {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    pub fn instantiate(&self, b: &Binding) -> Option<Triple> {
        Triple::new(
            self.subject.instantiate(b)?,
            self.predicate.instantiate(b)?,
            self.object.instantiate(b)?,
        )
        .ok()
    }

    fn vars(&self) -> Vec<&Var> {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .flat_map(HeadTerm::vars)
            .collect()
    }
}

impl From<TriplePattern> for Head {
    fn from(p: TriplePattern) -> Self {
        Head::new(p.subject, p.predicate, p.object)
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub head: Head,
    pub body: Vec<TriplePattern>,
    pub negated: Vec<TriplePattern>,
}

impl Rule {
    pub fn new(name: impl Into<String>, head: impl Into<Head>, body: Vec<TriplePattern>) -> Self {
        Rule {
            name: name.into(),
            head: head.into(),
            body,
            negated: Vec::new(),
        }
    }

    pub fn with_negated(mut self, negated: Vec<TriplePattern>) -> Self {
        self.negated = negated;
        self
    }

    /// Head and negated-body variables must all be bound by the positive body.
    pub fn check_safety(&self) -> Result<(), RuleError> {
        let bound: BTreeSet<&Var> = self.body.iter().flat_map(TriplePattern::vars).collect();
        let needed = self
            .head
            .vars()
            .into_iter()
            .chain(self.negated.iter().flat_map(TriplePattern::vars));
        for v in needed {
            if !bound.contains(v) {
                return Err(RuleError::Unsafe {
                    rule: self.name.clone(),
                    var: v.clone(),
                });
            }
        }
        Ok(())
    }

    /// True when no negated pattern holds in `g` under `b`.
    pub fn negation_holds(&self, g: &Graph, b: &Binding) -> bool {
        self.negated
            .iter()
            .all(|p| p.instantiate(b).is_none_or(|t| !g.contains(&t)))
    }

    /// Re-derives the head from premises given in body order, checking
    /// negation against `g`.
    pub fn replay(&self, premises: &[Triple], g: &Graph) -> Option<Triple> {
        if premises.len() != self.body.len() {
            return None;
        }
        let mut b = Binding::new();
        for (p, t) in self.body.iter().zip(premises) {
            b = p.unify(t, &b)?;
        }
        if !self.negation_holds(g, &b) {
            return None;
        }
        self.head.instantiate(&b)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.body.iter().map(|p| p.to_string()).collect();
        parts.extend(self.negated.iter().map(|p| format!("not {p}")));
        write!(f, "rule {}: {} :- {} .", self.name, self.head, parts.join(", "))
    }
}
