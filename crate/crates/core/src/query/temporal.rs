use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::kg::{is_scene, scene_ids, scene_view, Graph, LinkRelation, Scene, Term, Timestamp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("temporal links form a cycle: {}", render_cycle(.0))]
    TemporalCycle(Vec<Term>),
    #[error("{0} is not a scene")]
    UnknownScene(Term),
}

fn render_cycle(cycle: &[Term]) -> String {
    cycle
        .iter()
        .chain(cycle.first())
        .map(|t| t.short_name().to_string())
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// The strict partial order induced by `then`/`after` links.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TemporalOrder {
    later: BTreeMap<Term, BTreeSet<Term>>,
}

impl TemporalOrder {
    pub fn precedes(&self, a: &Term, b: &Term) -> bool {
        self.later.get(a).is_some_and(|s| s.contains(b))
    }

    /// Everything `a` precedes.
    pub fn successors(&self, a: &Term) -> impl Iterator<Item = &Term> + '_ {
        self.later.get(a).into_iter().flatten()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Term, &Term)> + '_ {
        self.later.iter().flat_map(|(a, bs)| bs.iter().map(move |b| (a, b)))
    }
}

/// Direct ordering edges: `a then b` puts a before b, `a after b` puts b
/// before a. Literal targets are ignored.
fn edges(g: &Graph) -> BTreeMap<Term, BTreeSet<Term>> {
    let mut out: BTreeMap<Term, BTreeSet<Term>> = BTreeMap::new();
    for rel in [LinkRelation::Then, LinkRelation::After] {
        for t in g.find(None, Some(&rel.property()), None) {
            if t.object.is_literal() {
                continue;
            }
            let (a, b) = match rel {
                LinkRelation::Then => (&t.subject, &t.object),
                _ => (&t.object, &t.subject),
            };
            out.entry(a.clone()).or_default().insert(b.clone());
            out.entry(b.clone()).or_default();
        }
    }
    out
}

fn find_cycle(edges: &BTreeMap<Term, BTreeSet<Term>>) -> Option<Vec<Term>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: BTreeMap<&Term, Mark> = BTreeMap::new();
    for root in edges.keys() {
        if marks.contains_key(root) {
            continue;
        }
        let mut path: Vec<&Term> = vec![root];
        let mut iters = vec![edges[root].iter()];
        marks.insert(root, Mark::Open);
        while let Some(it) = iters.last_mut() {
            match it.next() {
                Some(next) => match marks.get(next) {
                    Some(Mark::Open) => {
                        let start = path.iter().position(|t| *t == next).unwrap();
                        return Some(path[start..].iter().map(|t| (*t).clone()).collect());
                    }
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(next, Mark::Open);
                        path.push(next);
                        iters.push(edges[next].iter());
                    }
                },
                None => {
                    marks.insert(path.pop().unwrap(), Mark::Done);
                    iters.pop();
                }
            }
        }
    }
    None
}

pub fn temporal_order(g: &Graph) -> Result<TemporalOrder, QueryError> {
    let edges = edges(g);
    if let Some(cycle) = find_cycle(&edges) {
        return Err(QueryError::TemporalCycle(cycle));
    }
    let mut later = BTreeMap::new();
    for start in edges.keys() {
        let mut seen: BTreeSet<Term> = BTreeSet::new();
        let mut stack: Vec<&Term> = edges[start].iter().collect();
        while let Some(n) = stack.pop() {
            if seen.insert(n.clone()) {
                stack.extend(edges[n].iter());
            }
        }
        if !seen.is_empty() {
            later.insert(start.clone(), seen);
        }
    }
    Ok(TemporalOrder { later })
}

/// Scenes whose `time` equals `t`, minus those the incident precedes.
/// Scenes without a time never match.
pub fn scenes_at_time(g: &Graph, t: Timestamp, incident: &Term) -> Result<Vec<Scene>, QueryError> {
    if !is_scene(g, incident) {
        return Err(QueryError::UnknownScene(incident.clone()));
    }
    let order = temporal_order(g)?;
    Ok(scene_ids(g)
        .into_iter()
        .filter(|id| !order.precedes(incident, id))
        .filter_map(|id| scene_view(g, &id).ok())
        .filter(|s| s.time == Some(t))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::parse_turtle;

    const HEAD: &str =
        "@prefix kgc: <http://kgc.knowledge-graph.jp/ontology/kgc.owl#> .\n@prefix : <http://ex.org/> .\n";

    fn g(body: &str) -> Graph {
        parse_turtle(&format!("{HEAD}{body}")).unwrap()
    }

    fn i(local: &str) -> Term {
        Term::iri(format!("http://ex.org/{local}")).unwrap()
    }

    #[test]
    fn chain_is_transitive() {
        let order = temporal_order(&g(":s1 kgc:then :s2 . :s2 kgc:then :s3 .")).unwrap();
        assert!(order.precedes(&i("s1"), &i("s3")));
        assert!(!order.precedes(&i("s3"), &i("s1")));
    }

    #[test]
    fn after_points_backwards() {
        let order = temporal_order(&g(":s2 kgc:after :s1 .")).unwrap();
        assert!(order.precedes(&i("s1"), &i("s2")));
    }

    #[test]
    fn unrelated_scenes() {
        let order = temporal_order(&g(":s1 kgc:then :s2 . :s3 kgc:when :s4 .")).unwrap();
        assert!(!order.precedes(&i("s3"), &i("s4")));
        assert!(!order.precedes(&i("s4"), &i("s3")));
        assert!(!order.precedes(&i("s1"), &i("s3")));
    }

    #[test]
    fn two_cycle_is_reported() {
        let err = temporal_order(&g(":s1 kgc:then :s2 . :s2 kgc:then :s1 .")).unwrap_err();
        assert_eq!(err, QueryError::TemporalCycle(vec![i("s1"), i("s2")]));
        let err = temporal_order(&g(":s1 kgc:then :s2 . :s1 kgc:after :s2 .")).unwrap_err();
        assert!(matches!(err, QueryError::TemporalCycle(c) if c.len() == 2));
    }

    #[test]
    fn scenes_after_the_incident_are_excluded() {
        let graph = g(r#"
            :inc a kgc:Situation ; kgc:hasPredicate :die ; kgc:time "1883-04-01T03:00:00" ; kgc:then :run .
            :run a kgc:Situation ; kgc:hasPredicate :run ; kgc:time "1883-04-01T03:00:00" .
            :sleep a kgc:Situation ; kgc:hasPredicate :sleep ; kgc:time "1883-04-01T03:00:00" .
            :untimed a kgc:Situation ; kgc:hasPredicate :walk .
        "#);
        let t = Timestamp::parse("1883-04-01T03:00:00").unwrap();
        let ids: Vec<Term> = scenes_at_time(&graph, t, &i("inc"))
            .unwrap()
            .into_iter()
            .map(|s| s.id)
            .collect();
        assert_eq!(ids, vec![i("inc"), i("sleep")]);
        let other = Timestamp::parse("1883-04-02T03:00:00").unwrap();
        assert!(scenes_at_time(&graph, other, &i("inc")).unwrap().is_empty());
        assert_eq!(
            scenes_at_time(&graph, t, &i("nowhere")),
            Err(QueryError::UnknownScene(i("nowhere")))
        );
    }
}
