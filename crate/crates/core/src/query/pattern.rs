use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::kg::{Cursor, Graph, ParseError, Term, Triple};

/// A named query variable, written `?name`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Option<Var> {
        let name = name.into();
        (!name.is_empty()).then_some(Var(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternTerm {
    Term(Term),
    Var(Var),
}

impl PatternTerm {
    pub fn var(name: &str) -> PatternTerm {
        PatternTerm::Var(Var::new(name).expect("variable names are non-empty"))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }

    /// The bound value under `b`, if any.
    pub fn resolve<'a>(&'a self, b: &'a Binding) -> Option<&'a Term> {
        match self {
            PatternTerm::Term(t) => Some(t),
            PatternTerm::Var(v) => b.get(v),
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Term(t) => write!(f, "{t}"),
            PatternTerm::Var(v) => write!(f, "{v}"),
        }
    }
}

pub type Binding = BTreeMap<Var, Term>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(
        subject: impl Into<PatternTerm>,
        predicate: impl Into<PatternTerm>,
        object: impl Into<PatternTerm>,
    ) -> Self {
        TriplePattern {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> + '_ {
        self.positions().into_iter().filter_map(PatternTerm::as_var)
    }

    /// Extends `b` so that this pattern denotes `t`; `None` on a clash.
    pub fn unify(&self, t: &Triple, b: &Binding) -> Option<Binding> {
        let mut out = b.clone();
        for (p, v) in self.positions().into_iter().zip([&t.subject, &t.predicate, &t.object]) {
            match p {
                PatternTerm::Term(term) if term != v => return None,
                PatternTerm::Term(_) => {}
                PatternTerm::Var(var) => match out.get(var) {
                    Some(bound) if bound != v => return None,
                    Some(_) => {}
                    None => {
                        out.insert(var.clone(), v.clone());
                    }
                },
            }
        }
        Some(out)
    }

    /// The ground triple under `b`, if every position is bound and the
    /// result is a well-formed triple.
    pub fn instantiate(&self, b: &Binding) -> Option<Triple> {
        Triple::new(
            self.subject.resolve(b)?.clone(),
            self.predicate.resolve(b)?.clone(),
            self.object.resolve(b)?.clone(),
        )
        .ok()
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.subject, self.predicate, self.object)
    }
}

/// A conjunction of triple patterns.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pattern {
    pub triples: Vec<TriplePattern>,
}

impl Pattern {
    pub fn new(triples: Vec<TriplePattern>) -> Self {
        Pattern { triples }
    }

    pub fn vars(&self) -> Vec<&Var> {
        let mut vs: Vec<&Var> = self.triples.iter().flat_map(TriplePattern::vars).collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

/// Reads `?name` or an RDF term.
pub fn read_pattern_term(
    cur: &mut Cursor<'_>,
    prefixes: &BTreeMap<String, String>,
    allow_a: bool,
) -> Result<PatternTerm, ParseError> {
    if cur.eat('?') {
        let name = cur.read_word();
        return Var::new(name)
            .map(PatternTerm::Var)
            .ok_or_else(|| cur.syntax("empty variable name"));
    }
    cur.read_term(prefixes, allow_a).map(PatternTerm::Term)
}

/// Reads three pattern terms separated by inline whitespace.
pub fn read_triple_pattern(
    cur: &mut Cursor<'_>,
    prefixes: &BTreeMap<String, String>,
    multiline: bool,
) -> Result<TriplePattern, ParseError> {
    let skip = |c: &mut Cursor<'_>| {
        if multiline {
            c.skip_trivia()
        } else {
            c.skip_inline_trivia()
        }
    };
    let s = read_pattern_term(cur, prefixes, false)?;
    skip(cur);
    let p = read_pattern_term(cur, prefixes, true)?;
    skip(cur);
    let o = read_pattern_term(cur, prefixes, false)?;
    Ok(TriplePattern::new(s, p, o))
}

/// Parses the line-oriented pattern syntax: one `s p o` group per line,
/// optionally wrapped in parentheses and terminated by `.`. `@prefix`
/// lines add to (and override) the graph's prefixes.
pub fn parse_pattern(text: &str, g: &Graph) -> Result<Pattern, ParseError> {
    let mut prefixes = g.prefixes().clone();
    let mut cur = Cursor::new(text);
    let mut triples = Vec::new();
    loop {
        cur.skip_trivia();
        if cur.at_end() {
            break;
        }
        if cur.eat_str("@prefix") {
            cur.skip_inline_trivia();
            let prefix = match cur.read_name()? {
                crate::kg::Name::Prefixed { prefix, local } if local.is_empty() => prefix,
                _ => return Err(cur.syntax("expected a prefix label ending in ':'")),
            };
            cur.skip_inline_trivia();
            let ns = cur.read_iri_ref()?;
            cur.skip_inline_trivia();
            cur.expect('.')?;
            prefixes.insert(prefix, ns.as_str().to_string());
            continue;
        }
        let paren = cur.eat('(');
        cur.skip_inline_trivia();
        triples.push(read_triple_pattern(&mut cur, &prefixes, false)?);
        cur.skip_inline_trivia();
        if paren {
            cur.expect(')')?;
            cur.skip_inline_trivia();
        }
        cur.eat('.');
        cur.skip_inline_trivia();
        if !(cur.at_end() || cur.eat('\n')) {
            return Err(cur.syntax(format!(
                "expected end of line after pattern, found {}",
                cur.describe_next()
            )));
        }
    }
    Ok(Pattern::new(triples))
}
