use std::fmt;

use chrono::{DateTime, NaiveDateTime};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::graph::Graph;
use super::term::{Literal, Term};
use super::vocab::{self, kgc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("{0} is not typed as a scene (Situation, Statement or Thought)")]
    UnknownScene(Term),
    #[error("OR object {0} has no orTarget values")]
    OrEmpty(Term),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SceneKind {
    Situation,
    Statement,
    Thought,
}

impl SceneKind {
    pub const ALL: [SceneKind; 3] = [SceneKind::Situation, SceneKind::Statement, SceneKind::Thought];

    pub fn class(self) -> Term {
        kgc(match self {
            SceneKind::Situation => "Situation",
            SceneKind::Statement => "Statement",
            SceneKind::Thought => "Thought",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LinkRelation {
    When,
    Then,
    After,
    If,
    Because,
}

impl LinkRelation {
    pub const ALL: [LinkRelation; 5] = [
        LinkRelation::When,
        LinkRelation::Then,
        LinkRelation::After,
        LinkRelation::If,
        LinkRelation::Because,
    ];

    pub fn property(self) -> Term {
        kgc(match self {
            LinkRelation::When => "when",
            LinkRelation::Then => "then",
            LinkRelation::After => "after",
            LinkRelation::If => "if",
            LinkRelation::Because => "because",
        })
    }
}

/// An `xsd:dateTime` value. Offsets are normalised to UTC; values without
/// an offset are taken as-is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(NaiveDateTime);

impl Timestamp {
    pub fn parse(text: &str) -> Option<Timestamp> {
        if let Ok(dt) = DateTime::parse_from_rfc3339(text) {
            return Some(Timestamp(dt.naive_utc()));
        }
        NaiveDateTime::parse_from_str(text, "%Y-%m-%dT%H:%M:%S%.f")
            .ok()
            .map(Timestamp)
    }

    /// Parses a `kgc:time` object: a plain or `xsd:dateTime`-typed literal.
    pub fn from_term(term: &Term) -> Option<Timestamp> {
        let lit = term.as_literal()?;
        match lit.datatype() {
            Some(dt) if *dt != vocab::xsd_datetime() => None,
            _ if lit.language().is_some() => None,
            _ => Timestamp::parse(lit.lexical()),
        }
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format("%Y-%m-%dT%H:%M:%S%.f"))
    }
}

impl Serialize for Timestamp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Timestamp::parse(&text).ok_or_else(|| serde::de::Error::custom("invalid dateTime"))
    }
}

/// The 5W view over one scene ID.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scene {
    pub id: Term,
    pub kind: SceneKind,
    pub subjects: Vec<Term>,
    pub predicate: Option<Term>,
    pub property: Option<Term>,
    pub whom: Vec<Term>,
    pub what: Vec<Term>,
    pub where_: Vec<Term>,
    pub how: Vec<Term>,
    pub why: Vec<Term>,
    pub links: Vec<(LinkRelation, Term)>,
    pub time: Option<Timestamp>,
    pub sources: Vec<Literal>,
    pub info_source: Option<Term>,
}

impl Scene {
    /// The verb slot: `hasPredicate` if set, else `hasProperty`.
    pub fn verb(&self) -> Option<&Term> {
        self.predicate.as_ref().or(self.property.as_ref())
    }

    pub fn linked(&self, relation: LinkRelation) -> impl Iterator<Item = &Term> + '_ {
        self.links.iter().filter(move |(r, _)| *r == relation).map(|(_, t)| t)
    }

    /// Term-valued role slots: subject, whom, what, where, how, why.
    fn slots_mut(&mut self) -> Vec<&mut Vec<Term>> {
        vec![
            &mut self.subjects,
            &mut self.whom,
            &mut self.what,
            &mut self.where_,
            &mut self.how,
            &mut self.why,
        ]
    }
}

/// The scene kind of `node`, if it is typed with exactly one of the three kinds.
pub fn scene_kind(g: &Graph, node: &Term) -> Option<SceneKind> {
    let mut kinds = SceneKind::ALL.into_iter().filter(|k| g.has_type(node, &k.class()));
    match (kinds.next(), kinds.next()) {
        (Some(k), None) => Some(k),
        _ => None,
    }
}

pub fn is_scene(g: &Graph, node: &Term) -> bool {
    scene_kind(g, node).is_some()
}

/// All scene IDs in term order.
pub fn scene_ids(g: &Graph) -> Vec<Term> {
    let rdf_type = vocab::rdf_type();
    let mut ids: Vec<Term> = SceneKind::ALL
        .iter()
        .flat_map(|k| g.subjects(&rdf_type, &k.class()).into_iter().cloned())
        .filter(|id| is_scene(g, id))
        .collect();
    ids.sort();
    ids.dedup();
    ids
}

fn values(g: &Graph, id: &Term, property: &str) -> Vec<Term> {
    g.objects(id, &kgc(property)).into_iter().cloned().collect()
}

/// Aggregates every scene property of `id`. Multi-valued properties keep
/// all values. When a scene (invalidly) carries several verbs, the first in
/// term order is shown; `validate_schema` reports the problem.
pub fn scene_view(g: &Graph, id: &Term) -> Result<Scene, SceneError> {
    let kind = scene_kind(g, id).ok_or_else(|| SceneError::UnknownScene(id.clone()))?;
    let links = LinkRelation::ALL
        .iter()
        .flat_map(|&r| g.objects(id, &r.property()).into_iter().map(move |t| (r, t.clone())))
        .collect();
    let time = g.objects(id, &kgc("time")).into_iter().find_map(Timestamp::from_term);
    let sources = g
        .objects(id, &kgc("source"))
        .into_iter()
        .filter_map(|t| t.as_literal().cloned())
        .collect();
    Ok(Scene {
        id: id.clone(),
        kind,
        subjects: values(g, id, "subject"),
        predicate: values(g, id, "hasPredicate").into_iter().next(),
        property: values(g, id, "hasProperty").into_iter().next(),
        whom: values(g, id, "whom"),
        what: values(g, id, "what"),
        where_: values(g, id, "where"),
        how: values(g, id, "how"),
        why: values(g, id, "why"),
        links,
        time,
        sources,
        info_source: values(g, id, "infoSource").into_iter().next(),
    })
}

fn or_targets(g: &Graph, term: &Term) -> Result<Option<Vec<Term>>, SceneError> {
    if !g.has_type(term, &kgc("ORobj")) {
        return Ok(None);
    }
    let targets = values(g, term, "orTarget");
    if targets.is_empty() {
        return Err(SceneError::OrEmpty(term.clone()));
    }
    Ok(Some(targets))
}

/// Expands every ORobj value into its alternatives. The result is the
/// Cartesian product over all ORobj occurrences, first occurrence varying
/// slowest; a scene without ORobj values yields itself.
pub fn expand_or(g: &Graph, scene: &Scene) -> Result<Vec<Scene>, SceneError> {
    // (slot index, position, alternatives); slot 6/7 are predicate/property.
    let mut choices: Vec<(usize, usize, Vec<Term>)> = Vec::new();
    let mut probe = scene.clone();
    for (slot, list) in probe.slots_mut().into_iter().enumerate() {
        for (pos, term) in list.iter().enumerate() {
            if let Some(alts) = or_targets(g, term)? {
                choices.push((slot, pos, alts));
            }
        }
    }
    for (slot, term) in [(6, &scene.predicate), (7, &scene.property)] {
        if let Some(term) = term {
            if let Some(alts) = or_targets(g, term)? {
                choices.push((slot, 0, alts));
            }
        }
    }

    let mut out = vec![scene.clone()];
    for (slot, pos, alts) in &choices {
        let mut next = Vec::with_capacity(out.len() * alts.len());
        for partial in &out {
            for alt in alts {
                let mut s = partial.clone();
                match slot {
                    6 => s.predicate = Some(alt.clone()),
                    7 => s.property = Some(alt.clone()),
                    _ => s.slots_mut()[*slot][*pos] = alt.clone(),
                }
                next.push(s);
            }
        }
        out = next;
    }
    for s in &mut out {
        for list in s.slots_mut() {
            let mut seen = std::collections::BTreeSet::new();
            list.retain(|t| seen.insert(t.clone()));
        }
    }
    Ok(out)
}
