//! Motive / opportunity / means analysis.
//!
//! Motives and means come from rulebooks; opportunity is computed
//! directly from whereabouts at the incident time and reachability over
//! the room-connection graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::kg::{scene_view, vocab, Graph, Iri, Term, Triple};
use crate::query::{scenes_at_time, QueryError};

use super::derivation::{Derivation, Step};
use super::engine::forward_chain;
use super::rule::{Rule, RuleError};

pub const MOM: &str = "http://example.org/sleuth/mom#";

pub fn mom(local: &str) -> Term {
    Term::Iri(vocab::iri(MOM, local))
}

pub fn mom_iri(local: &str) -> Iri {
    vocab::iri(MOM, local)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomError {
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("incident {incident} has no {missing}")]
    IncompleteIncident { incident: Term, missing: &'static str },
}

impl MomError {
    pub fn code(&self) -> &'static str {
        match self {
            MomError::Rule(e) => e.code(),
            MomError::Query(QueryError::TemporalCycle(_)) => "TEMPORAL_CYCLE",
            MomError::Query(QueryError::UnknownScene(_)) => "UNKNOWN_SCENE",
            MomError::IncompleteIncident { .. } => "INCOMPLETE_INCIDENT",
        }
    }
}

/// The incident scene's victim, location and time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incident {
    pub scene: Term,
    pub victim: Term,
    pub crime_scene: Term,
    pub time: crate::kg::Timestamp,
}

impl Incident {
    /// Reads the incident scene: victim = first `whom`, else first subject.
    pub fn read(g: &Graph, scene: &Term) -> Result<Incident, MomError> {
        let view = scene_view(g, scene).map_err(|_| QueryError::UnknownScene(scene.clone()))?;
        let missing = |what| MomError::IncompleteIncident {
            incident: scene.clone(),
            missing: what,
        };
        let victim = view
            .whom
            .first()
            .or(view.subjects.first())
            .cloned()
            .ok_or_else(|| missing("victim (whom or subject)"))?;
        let crime_scene = view.where_.first().cloned().ok_or_else(|| missing("where"))?;
        let time = view.time.ok_or_else(|| missing("time"))?;
        Ok(Incident {
            scene: scene.clone(),
            victim,
            crime_scene,
            time,
        })
    }
}

/// The sole object of a `mom:incident` triple, if there is exactly one.
pub fn find_incident(g: &Graph) -> Option<Term> {
    let objects: BTreeSet<&Term> = g
        .find(None, Some(&mom("incident")), None)
        .into_iter()
        .map(|t| &t.object)
        .collect();
    match objects.len() {
        1 => objects.into_iter().next().cloned(),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Motive {
    pub suspect: Term,
    pub victim: Term,
    pub motive: Term,
    pub derivation: Arc<Derivation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Opportunity {
    pub suspect: Term,
    pub crime_scene: Term,
    /// Where the suspect was at the incident time.
    pub location: Term,
    /// Connections passed, in order.
    pub path: Vec<Term>,
    pub derivation: Arc<Derivation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Means {
    pub suspect: Term,
    pub method: Term,
    pub derivation: Arc<Derivation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerdictEntry {
    pub suspect: Term,
    pub components: u8,
    pub motive: bool,
    pub opportunity: bool,
    pub means: bool,
    pub derivations: Vec<Arc<Derivation>>,
    pub scenes_used: BTreeSet<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MomReport {
    pub victims: Vec<Term>,
    pub motives: Vec<Motive>,
    pub opportunities: Vec<Opportunity>,
    pub means: Vec<Means>,
    pub verdict: Vec<VerdictEntry>,
}

impl MomReport {
    /// Suspects sharing the highest component count, if it is non-zero.
    pub fn top_suspects(&self) -> Vec<&Term> {
        let Some(best) = self.verdict.first().map(|v| v.components).filter(|&c| c > 0) else {
            return Vec::new();
        };
        self.verdict
            .iter()
            .take_while(|v| v.components == best)
            .map(|v| &v.suspect)
            .collect()
    }
}

/// Motive atoms `(x mom:mayKillFor m)`, `(m mom:victim v)`, `(m mom:motive k)`
/// after chaining `rules` over `g`, sorted by (suspect, victim, motive).
pub fn infer_motives(g: &Graph, rules: &[Rule]) -> Result<Vec<Motive>, MomError> {
    let inf = forward_chain(g, rules)?;
    let closure = &inf.graph;
    let mut out: BTreeMap<(Term, Term, Term), Arc<Derivation>> = BTreeMap::new();
    for t in closure.find(None, Some(&mom("mayKillFor")), None) {
        let node = &t.object;
        for v in closure.objects(node, &mom("victim")) {
            for k in closure.objects(node, &mom("motive")) {
                let key = (t.subject.clone(), v.clone(), k.clone());
                out.entry(key)
                    .or_insert_with(|| inf.proof(t).expect("atom is in the closure"));
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|((suspect, victim, motive), derivation)| Motive {
            suspect,
            victim,
            motive,
            derivation,
        })
        .collect())
}

struct Edge {
    to: Term,
    via: Term,
}

/// Place adjacency over `mom:Connection` nodes that humans can pass.
fn passable_adjacency(g: &Graph) -> BTreeMap<Term, Vec<Edge>> {
    let mut adj: BTreeMap<Term, Vec<Edge>> = BTreeMap::new();
    for conn in g.subjects(&vocab::rdf_type(), &mom("Connection")) {
        if g.contains_spo(conn, &mom("impassableFor"), &mom("Human")) {
            continue;
        }
        let ends = g.objects(conn, &mom("links"));
        for a in &ends {
            for b in &ends {
                if a != b {
                    adj.entry((*a).clone()).or_default().push(Edge {
                        to: (*b).clone(),
                        via: conn.clone(),
                    });
                }
            }
        }
    }
    adj
}

/// Shortest passable route as the list of connections, breadth first with
/// neighbours in term order. `Some(vec![])` when `from == to`.
fn route(adj: &BTreeMap<Term, Vec<Edge>>, from: &Term, to: &Term) -> Option<Vec<Term>> {
    let mut back: BTreeMap<Term, (Term, Term)> = BTreeMap::new();
    let mut seen = BTreeSet::from([from.clone()]);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(here) = queue.pop_front() {
        if &here == to {
            let mut path = Vec::new();
            let mut at = here;
            while let Some((prev, via)) = back.get(&at) {
                path.push(via.clone());
                at = prev.clone();
            }
            path.reverse();
            return Some(path);
        }
        let mut next: Vec<&Edge> = adj.get(&here).map(|v| v.iter().collect()).unwrap_or_default();
        next.sort_by(|a, b| (&a.to, &a.via).cmp(&(&b.to, &b.via)));
        for e in next {
            if seen.insert(e.to.clone()) {
                back.insert(e.to.clone(), (here.clone(), e.via.clone()));
                queue.push_back(e.to.clone());
            }
        }
    }
    None
}

fn base(g: &Graph, s: &Term, p: Term, o: &Term) -> Arc<Derivation> {
    let t = Triple::new(s.clone(), p, o.clone()).expect("graph terms form triples");
    Arc::new(Derivation::base(g, t))
}

/// Persons other than the victim who, at the incident time, were somewhere
/// the crime scene can be reached from on foot.
pub fn infer_opportunity(g: &Graph, incident: &Term) -> Result<Vec<Opportunity>, MomError> {
    let inc = Incident::read(g, incident)?;
    let adj = passable_adjacency(g);
    let person = vocab::kgc("Person");
    let mut found: BTreeMap<Term, Opportunity> = BTreeMap::new();
    for scene in scenes_at_time(g, inc.time, incident)? {
        for suspect in &scene.subjects {
            if suspect == &inc.victim || !g.has_type(suspect, &person) || found.contains_key(suspect) {
                continue;
            }
            for place in &scene.where_ {
                let Some(path) = route(&adj, place, &inc.crime_scene) else {
                    continue;
                };
                let mut premises = vec![
                    base(g, incident, vocab::kgc("where"), &inc.crime_scene),
                    base(g, &scene.id, vocab::kgc("subject"), suspect),
                    base(g, &scene.id, vocab::kgc("where"), place),
                ];
                for conn in &path {
                    for end in g.objects(conn, &mom("links")) {
                        premises.push(base(g, conn, mom("links"), end));
                    }
                }
                let atom = Triple::new(suspect.clone(), mom("couldReach"), inc.crime_scene.clone())
                    .expect("suspect is a resource");
                let d = Derivation::derived(g, atom, Step::Builtin("opportunity".into()), premises);
                found.insert(
                    suspect.clone(),
                    Opportunity {
                        suspect: suspect.clone(),
                        crime_scene: inc.crime_scene.clone(),
                        location: place.clone(),
                        path,
                        derivation: Arc::new(d),
                    },
                );
                break;
            }
        }
    }
    Ok(found.into_values().collect())
}

fn with_victim_marker(g: &Graph, inc: &Incident) -> Graph {
    let mut work = g.clone();
    work.insert(Triple::new(inc.victim.clone(), vocab::rdf_type(), mom("Victim")).expect("victim is a resource"));
    work
}

/// Methods the means rules leave as candidates for the incident's victim
/// (`(m mom:candidateFor v)`), in term order.
pub fn candidate_methods(g: &Graph, rules: &[Rule], incident: &Term) -> Result<Vec<Term>, MomError> {
    let inc = Incident::read(g, incident)?;
    let inf = forward_chain(&with_victim_marker(g, &inc), rules)?;
    Ok(inf
        .graph
        .subjects(&mom("candidateFor"), &inc.victim)
        .into_iter()
        .cloned()
        .collect())
}

/// `(x mom:canKillBy m)` atoms for suspects other than the victim. The
/// victim is marked `mom:Victim` for the rules; each derivation also cites
/// the victim's `mom:showsSymptom` proofs.
pub fn infer_means(g: &Graph, rules: &[Rule], incident: &Term) -> Result<Vec<Means>, MomError> {
    let inc = Incident::read(g, incident)?;
    let work = with_victim_marker(g, &inc);
    let inf = forward_chain(&work, rules)?;
    let symptoms: Vec<Arc<Derivation>> = inf
        .graph
        .find(Some(&inc.victim), Some(&mom("showsSymptom")), None)
        .into_iter()
        .filter_map(|t| inf.proof(t))
        .collect();
    let mut out = Vec::new();
    for t in inf.graph.find(None, Some(&mom("canKillBy")), None) {
        if t.subject == inc.victim {
            continue;
        }
        let mut premises = vec![inf.proof(t).expect("atom is in the closure")];
        premises.extend(symptoms.iter().cloned());
        let d = Derivation::derived(&work, t.clone(), Step::Builtin("means".into()), premises);
        out.push(Means {
            suspect: t.subject.clone(),
            method: t.object.clone(),
            derivation: Arc::new(d),
        });
    }
    Ok(out)
}

/// Counts satisfied components per suspect and ranks by count, then
/// suspect. Only motives against one of `victims` count; an empty
/// `victims` list counts every motive.
pub fn combine_mom(
    motives: Vec<Motive>,
    opportunities: Vec<Opportunity>,
    means: Vec<Means>,
    victims: &[Term],
) -> MomReport {
    #[derive(Default)]
    struct Acc {
        motive: Vec<Arc<Derivation>>,
        opportunity: Vec<Arc<Derivation>>,
        means: Vec<Arc<Derivation>>,
    }
    let mut acc: BTreeMap<Term, Acc> = BTreeMap::new();
    for m in &motives {
        let entry = acc.entry(m.suspect.clone()).or_default();
        if victims.is_empty() || victims.contains(&m.victim) {
            entry.motive.push(m.derivation.clone());
        }
    }
    for o in &opportunities {
        acc.entry(o.suspect.clone())
            .or_default()
            .opportunity
            .push(o.derivation.clone());
    }
    for m in &means {
        acc.entry(m.suspect.clone())
            .or_default()
            .means
            .push(m.derivation.clone());
    }
    let mut verdict: Vec<VerdictEntry> = acc
        .into_iter()
        .map(|(suspect, a)| {
            let flags = [!a.motive.is_empty(), !a.opportunity.is_empty(), !a.means.is_empty()];
            let derivations: Vec<Arc<Derivation>> = a.motive.into_iter().chain(a.opportunity).chain(a.means).collect();
            let scenes_used = derivations.iter().flat_map(|d| d.scenes_used.iter().cloned()).collect();
            VerdictEntry {
                suspect,
                components: flags.iter().filter(|f| **f).count() as u8,
                motive: flags[0],
                opportunity: flags[1],
                means: flags[2],
                derivations,
                scenes_used,
            }
        })
        .collect();
    verdict.sort_by(|a, b| b.components.cmp(&a.components).then_with(|| a.suspect.cmp(&b.suspect)));
    MomReport {
        victims: victims.to_vec(),
        motives,
        opportunities,
        means,
        verdict,
    }
}

/// The whole pipeline for one incident, with `rules` serving as both the
/// motive and the means rulebook.
pub fn run_mom(g: &Graph, rules: &[Rule], incident: &Term) -> Result<MomReport, MomError> {
    let inc = Incident::read(g, incident)?;
    let motives = infer_motives(g, rules)?;
    let opportunities = infer_opportunity(g, incident)?;
    let means = infer_means(g, rules, incident)?;
    Ok(combine_mom(motives, opportunities, means, &[inc.victim]))
}
