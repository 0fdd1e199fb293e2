use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::lexer::valid_local;
use super::term::{Iri, Term, TermError};
use super::vocab;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, TermError> {
        if subject.is_literal() {
            return Err(TermError::LiteralSubject(subject));
        }
        if predicate.as_iri().is_none() {
            return Err(TermError::NonIriPredicate(predicate));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

type Bucket = BTreeSet<Arc<Triple>>;

/// Indexed triple set with a prefix map.
///
/// Equality compares the triple sets only; prefixes are presentation.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    triples: Bucket,
    prefixes: BTreeMap<String, String>,
    by_subject: HashMap<Term, Bucket>,
    by_pred_obj: HashMap<(Term, Term), Bucket>,
    by_object: HashMap<Term, Bucket>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.triples == other.triples
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_default_prefixes() -> Self {
        let mut g = Graph::new();
        for (p, ns) in vocab::default_prefixes() {
            g.set_prefix(p, ns);
        }
        g
    }

    pub fn set_prefix(&mut self, prefix: impl Into<String>, namespace: impl Into<String>) {
        self.prefixes.insert(prefix.into(), namespace.into());
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    /// Inserts a triple; returns false if it was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        if self.triples.contains(&triple) {
            return false;
        }
        let t = Arc::new(triple);
        self.by_subject.entry(t.subject.clone()).or_default().insert(t.clone());
        self.by_pred_obj
            .entry((t.predicate.clone(), t.object.clone()))
            .or_default()
            .insert(t.clone());
        self.by_object.entry(t.object.clone()).or_default().insert(t.clone());
        self.triples.insert(t);
        true
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    /// All triples in (S, P, O) order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.triples.iter().map(|t| t.as_ref())
    }

    /// Triples matching the bound positions, in (S, P, O) order.
    pub fn find(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> Vec<&Triple> {
        let keep = |t: &&Triple| {
            s.is_none_or(|s| &t.subject == s) && p.is_none_or(|p| &t.predicate == p) && o.is_none_or(|o| &t.object == o)
        };
        let bucket: Box<dyn Iterator<Item = &Triple>> = match (s, p, o) {
            (Some(s), _, _) => match self.by_subject.get(s) {
                Some(b) => Box::new(b.iter().map(|t| t.as_ref())),
                None => return Vec::new(),
            },
            (None, Some(p), Some(o)) => match self.by_pred_obj.get(&(p.clone(), o.clone())) {
                Some(b) => Box::new(b.iter().map(|t| t.as_ref())),
                None => return Vec::new(),
            },
            (None, _, Some(o)) => match self.by_object.get(o) {
                Some(b) => Box::new(b.iter().map(|t| t.as_ref())),
                None => return Vec::new(),
            },
            _ => Box::new(self.iter()),
        };
        bucket.filter(keep).collect()
    }

    /// Upper bound on `find(s, p, o).len()` read off the index sizes.
    pub fn estimate(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> usize {
        match (s, p, o) {
            (Some(s), _, _) => self.by_subject.get(s).map_or(0, |b| b.len()),
            (None, Some(p), Some(o)) => self.by_pred_obj.get(&(p.clone(), o.clone())).map_or(0, |b| b.len()),
            (None, _, Some(o)) => self.by_object.get(o).map_or(0, |b| b.len()),
            _ => self.len(),
        }
    }

    pub fn objects(&self, s: &Term, p: &Term) -> Vec<&Term> {
        self.find(Some(s), Some(p), None)
            .into_iter()
            .map(|t| &t.object)
            .collect()
    }

    pub fn subjects(&self, p: &Term, o: &Term) -> Vec<&Term> {
        self.find(None, Some(p), Some(o))
            .into_iter()
            .map(|t| &t.subject)
            .collect()
    }

    pub fn has_type(&self, node: &Term, class: &Term) -> bool {
        self.contains_spo(node, &vocab::rdf_type(), class)
    }

    pub fn contains_spo(&self, s: &Term, p: &Term, o: &Term) -> bool {
        self.by_subject
            .get(s)
            .is_some_and(|b| b.iter().any(|t| &t.predicate == p && &t.object == o))
    }

    /// `rdfs:label` if present, otherwise the term's short name.
    pub fn label(&self, term: &Term) -> String {
        self.objects(term, &vocab::rdfs_label())
            .into_iter()
            .find_map(|t| t.as_literal().map(|l| l.lexical().to_string()))
            .unwrap_or_else(|| term.short_name().to_string())
    }

    /// Renders a term with the longest matching prefix, falling back to N-Triples.
    pub fn compact(&self, term: &Term) -> String {
        match term {
            Term::Iri(iri) => self.compact_iri(iri),
            other => other.to_string(),
        }
    }

    pub fn compact_iri(&self, iri: &Iri) -> String {
        let s = iri.as_str();
        self.prefixes
            .iter()
            .filter(|(_, ns)| s.starts_with(ns.as_str()) && valid_local(&s[ns.len()..]))
            .max_by(|a, b| a.1.len().cmp(&b.1.len()).then_with(|| b.0.cmp(a.0)))
            .map(|(p, ns)| format!("{p}:{}", &s[ns.len()..]))
            .unwrap_or_else(|| format!("<{s}>"))
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}
