use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use crate::kg::{is_negative_verb, scene_ids, scene_view, vocab, Graph, Term, Triple};
use crate::rules::mom::mom;
use crate::rules::{infer_means, infer_motives, infer_opportunity, Derivation, Incident, Rule};

use super::graph::{IbisGraph, NodeKind, Payload};
use super::IbisError;

/// Motive rules answer "why", means rules answer "how".
#[derive(Debug, Clone, Copy)]
pub struct Rulebooks<'a> {
    pub motive: &'a [Rule],
    pub means: &'a [Rule],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub victim: Term,
    pub suspect: Term,
    /// Method and its proof.
    pub how: Option<(Term, Arc<Derivation>)>,
    /// Motive kind and its proof.
    pub why: Option<(Term, Arc<Derivation>)>,
}

impl Hypothesis {
    pub fn new(victim: Term, suspect: Term) -> Hypothesis {
        Hypothesis {
            victim,
            suspect,
            how: None,
            why: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConReason {
    /// The suspect could not reach the crime scene at the incident time.
    NoOpportunity,
    /// A negated fact about the suspect.
    Contradicted { scene: Term },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterargument {
    pub attacker: Term,
    pub target: Term,
    pub reason: ConReason,
    pub text: String,
    pub evidence: Vec<Arc<Derivation>>,
}

#[derive(Debug, Clone)]
pub struct DiscussionAgent {
    pub hypothesis: Hypothesis,
    /// The shared graph plus everything this agent has appended.
    pub graph: Graph,
    /// The hypothesis' Idea node.
    pub idea: String,
    pub opportunity: Option<Arc<Derivation>>,
    pub received: Vec<Counterargument>,
}

impl DiscussionAgent {
    /// Copies `g` and appends `(v mom:isKilledBy x)`.
    pub fn new(g: &Graph, hypothesis: Hypothesis, idea: String) -> DiscussionAgent {
        let mut graph = g.clone();
        graph.insert(
            Triple::new(hypothesis.victim.clone(), mom("isKilledBy"), hypothesis.suspect.clone())
                .expect("victim is a resource"),
        );
        DiscussionAgent {
            hypothesis,
            graph,
            idea,
            opportunity: None,
            received: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConsistencyScore {
    pub value: f64,
    pub how: bool,
    pub why: bool,
    pub opportunity: bool,
    pub unrebutted: usize,
}

impl ConsistencyScore {
    /// `clamp((how + why + opportunity)/3 − unrebutted/3, −1, 1)`.
    pub fn new(how: bool, why: bool, opportunity: bool, unrebutted: usize) -> ConsistencyScore {
        let support = [how, why, opportunity].iter().filter(|b| **b).count() as f64;
        let value = ((support - unrebutted as f64) / 3.0).clamp(-1.0, 1.0);
        ConsistencyScore {
            value,
            how,
            why,
            opportunity,
            unrebutted,
        }
    }
}

fn person(g: &Graph, t: &Term) -> bool {
    g.has_type(t, &vocab::kgc("Person"))
}

fn name(t: &Term) -> &str {
    t.short_name()
}

/// One root Issue per victim.
pub fn seed_issues(g: &Graph, victims: &[Term]) -> Result<IbisGraph, IbisError> {
    if victims.is_empty() {
        return Err(IbisError::NoVictims);
    }
    let mut ibis = IbisGraph::new();
    for v in victims {
        if !person(g, v) {
            return Err(IbisError::UnknownPerson(v.clone()));
        }
        ibis.add(
            NodeKind::Issue,
            format!("who is the murderer of {}", name(v)),
            None,
            Some(Payload::atom("who", vec![v.clone()])),
        )?;
    }
    Ok(ibis)
}

/// `isKilledBy(victim, x)` for every other person, in term order, each as
/// an Idea under the victim's Issue. Returns the hypotheses with their
/// node ids.
pub fn generate_hypotheses(
    g: &Graph,
    ibis: &mut IbisGraph,
    victim: &Term,
) -> Result<Vec<(Hypothesis, String)>, IbisError> {
    if !person(g, victim) {
        return Err(IbisError::UnknownPerson(victim.clone()));
    }
    let issue = ibis
        .roots()
        .find(|n| {
            n.payload
                .as_ref()
                .is_some_and(|p| p.predicate == "who" && p.args == [victim.clone()])
        })
        .map(|n| n.id.clone())
        .ok_or_else(|| IbisError::NoIssue(victim.clone()))?;
    let suspects: BTreeSet<&Term> = g
        .subjects(&vocab::rdf_type(), &vocab::kgc("Person"))
        .into_iter()
        .filter(|x| *x != victim)
        .collect();
    let mut out = Vec::new();
    for x in suspects {
        let id = ibis.add(
            NodeKind::Idea,
            format!("isKilledBy({}, {})", name(victim), name(x)),
            Some(&issue),
            Some(Payload::atom("isKilledBy", vec![victim.clone(), x.clone()])),
        )?;
        out.push((Hypothesis::new(victim.clone(), x.clone()), id));
    }
    Ok(out)
}

/// Asks "How does x killed v ?" and "Why does x killed v ?" under the
/// agent's Idea and answers each from the rulebooks over the agent's
/// graph. Answers and opportunity are appended to the agent's graph; an
/// unanswered question stays open.
pub fn elaborate(
    agent: &mut DiscussionAgent,
    ibis: &mut IbisGraph,
    rules: Rulebooks<'_>,
    incident: &Term,
) -> Result<(), IbisError> {
    let (v, x) = (agent.hypothesis.victim.clone(), agent.hypothesis.suspect.clone());
    let pair = vec![v.clone(), x.clone()];

    let how_issue = ibis.add(
        NodeKind::Issue,
        format!("How does {} killed {} ?", name(&x), name(&v)),
        Some(&agent.idea),
        Some(Payload::atom("how", pair.clone())),
    )?;
    let means = infer_means(&agent.graph, rules.means, incident)?;
    if let Some(m) = means.into_iter().find(|m| m.suspect == x) {
        ibis.add(
            NodeKind::Idea,
            format!("{} killed {} by {}", name(&x), name(&v), agent.graph.label(&m.method)),
            Some(&how_issue),
            Some(
                Payload::atom("how", vec![v.clone(), x.clone(), m.method.clone()])
                    .with_derivation(m.derivation.clone()),
            ),
        )?;
        agent.graph.insert(m.derivation.atom.clone());
        agent.hypothesis.how = Some((m.method, m.derivation));
    }

    let why_issue = ibis.add(
        NodeKind::Issue,
        format!("Why does {} killed {} ?", name(&x), name(&v)),
        Some(&agent.idea),
        Some(Payload::atom("why", pair)),
    )?;
    let motives = infer_motives(&agent.graph, rules.motive)?;
    if let Some(m) = motives.into_iter().find(|m| m.suspect == x && m.victim == v) {
        ibis.add(
            NodeKind::Idea,
            format!("{} killed {} for {}", name(&x), name(&v), agent.graph.label(&m.motive)),
            Some(&why_issue),
            Some(
                Payload::atom("why", vec![v.clone(), x.clone(), m.motive.clone()])
                    .with_derivation(m.derivation.clone()),
            ),
        )?;
        agent.graph.insert(m.derivation.atom.clone());
        agent.hypothesis.why = Some((m.motive, m.derivation));
    }

    let opportunities = infer_opportunity(&agent.graph, incident)?;
    if let Some(o) = opportunities.into_iter().find(|o| o.suspect == x) {
        ibis.add(
            NodeKind::ArgumentPro,
            format!(
                "{} could reach {} from {}",
                name(&x),
                name(&o.crime_scene),
                name(&o.location)
            ),
            Some(&agent.idea),
            Some(
                Payload::atom("couldReach", vec![x.clone(), o.crime_scene.clone()])
                    .with_derivation(o.derivation.clone()),
            ),
        )?;
        agent.graph.insert(o.derivation.atom.clone());
        agent.opportunity = Some(o.derivation);
    }
    Ok(())
}

fn base(g: &Graph, s: &Term, p: Term, o: &Term) -> Arc<Derivation> {
    Arc::new(Derivation::base(
        g,
        Triple::new(s.clone(), p, o.clone()).expect("graph terms form triples"),
    ))
}

/// Counterarguments the attacker's graph raises against `target`: no
/// opportunity, and any scene asserting a negated verb of the target
/// suspect.
pub fn attack(
    attacker: &DiscussionAgent,
    target: &Hypothesis,
    incident: &Term,
) -> Result<Vec<Counterargument>, IbisError> {
    let me = &attacker.hypothesis.suspect;
    if me == &target.suspect {
        return Err(IbisError::SelfAttack(me.clone()));
    }
    if attacker.hypothesis.victim != target.victim {
        return Err(IbisError::VictimMismatch);
    }
    let g = &attacker.graph;
    let x = &target.suspect;
    let mut out = Vec::new();

    let inc = Incident::read(g, incident)?;
    if !infer_opportunity(g, incident)?.iter().any(|o| &o.suspect == x) {
        out.push(Counterargument {
            attacker: me.clone(),
            target: x.clone(),
            reason: ConReason::NoOpportunity,
            text: format!(
                "{} could not reach {} at the incident time",
                name(x),
                name(&inc.crime_scene)
            ),
            evidence: vec![base(g, incident, vocab::kgc("where"), &inc.crime_scene)],
        });
    }

    for id in scene_ids(g) {
        let Ok(scene) = scene_view(g, &id) else { continue };
        let Some(verb) = scene.verb() else { continue };
        if !scene.subjects.contains(x) || !is_negative_verb(g, verb) {
            continue;
        }
        let objects: Vec<&str> = scene
            .whom
            .iter()
            .chain(&scene.what)
            .chain(&scene.where_)
            .map(name)
            .collect();
        let verb_property = if scene.predicate.is_some() {
            "hasPredicate"
        } else {
            "hasProperty"
        };
        out.push(Counterargument {
            attacker: me.clone(),
            target: x.clone(),
            reason: ConReason::Contradicted { scene: id.clone() },
            text: format!("{}: {} {} {}", name(&id), name(x), name(verb), objects.join(", "))
                .trim_end()
                .to_string(),
            evidence: vec![
                base(g, &id, vocab::kgc("subject"), x),
                base(g, &id, vocab::kgc(verb_property), verb),
            ],
        });
    }
    Ok(out)
}

pub fn consistency(agent: &DiscussionAgent) -> ConsistencyScore {
    ConsistencyScore::new(
        agent.hypothesis.how.is_some(),
        agent.hypothesis.why.is_some(),
        agent.opportunity.is_some(),
        agent.received.len(),
    )
}

/// Highest value; ties go to the smaller suspect IRI.
pub fn select(scores: &BTreeMap<Term, ConsistencyScore>) -> Result<Term, IbisError> {
    let mut best: Option<(&Term, f64)> = None;
    for (suspect, s) in scores {
        if best.is_none_or(|(_, v)| s.value > v) {
            best = Some((suspect, s.value));
        }
    }
    best.map(|(t, _)| t.clone()).ok_or(IbisError::EmptyScores)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Explanation {
    pub victim: Term,
    pub suspect: Term,
    pub score: ConsistencyScore,
    pub how: Option<Arc<Derivation>>,
    pub why: Option<Arc<Derivation>>,
    pub opportunity: Option<Arc<Derivation>>,
    /// The winning Idea and everything under it.
    pub subtree: Value,
    pub scenes_used: BTreeSet<Term>,
}

#[derive(Debug, Clone)]
pub struct Discussion {
    pub victim: Term,
    pub ibis: IbisGraph,
    pub agents: Vec<DiscussionAgent>,
    pub scores: BTreeMap<Term, ConsistencyScore>,
    pub explanation: Explanation,
}

/// The full procedure for the incident's victim: issue, hypotheses,
/// elaboration, one round of attacks in suspect order, scoring and
/// selection. Duplicate counterarguments against a hypothesis are kept
/// once.
pub fn discuss(g: &Graph, rules: Rulebooks<'_>, incident: &Term) -> Result<Discussion, IbisError> {
    let victim = Incident::read(g, incident)?.victim;
    let mut ibis = seed_issues(g, std::slice::from_ref(&victim))?;
    let mut agents: Vec<DiscussionAgent> = generate_hypotheses(g, &mut ibis, &victim)?
        .into_iter()
        .map(|(h, idea)| DiscussionAgent::new(g, h, idea))
        .collect();
    for agent in &mut agents {
        elaborate(agent, &mut ibis, rules, incident)?;
    }

    let mut raised: Vec<Vec<Counterargument>> = vec![Vec::new(); agents.len()];
    for (t, target) in agents.iter().enumerate() {
        for (a, attacker) in agents.iter().enumerate() {
            if a == t {
                continue;
            }
            for con in attack(attacker, &target.hypothesis, incident)? {
                if !raised[t].iter().any(|c| c.reason == con.reason) {
                    raised[t].push(con);
                }
            }
        }
    }
    for (agent, cons) in agents.iter_mut().zip(raised) {
        for con in cons {
            let payload = Payload::atom("refutes", vec![con.attacker.clone(), con.target.clone()]);
            ibis.add(
                NodeKind::ArgumentCon,
                con.text.clone(),
                Some(&agent.idea),
                Some(payload),
            )?;
            agent.received.push(con);
        }
    }

    let scores: BTreeMap<Term, ConsistencyScore> = agents
        .iter()
        .map(|a| (a.hypothesis.suspect.clone(), consistency(a)))
        .collect();
    let suspect = select(&scores)?;
    let winner = agents
        .iter()
        .find(|a| a.hypothesis.suspect == suspect)
        .expect("selected suspect has an agent");
    let how = winner.hypothesis.how.as_ref().map(|(_, d)| d.clone());
    let why = winner.hypothesis.why.as_ref().map(|(_, d)| d.clone());
    let opportunity = winner.opportunity.clone();
    let scenes_used = [&how, &why, &opportunity]
        .into_iter()
        .flatten()
        .flat_map(|d| d.scenes_used.iter().cloned())
        .collect();
    let explanation = Explanation {
        victim: victim.clone(),
        suspect: suspect.clone(),
        score: scores[&suspect],
        how,
        why,
        opportunity,
        subtree: ibis.subtree(&winner.idea).expect("agent idea exists"),
        scenes_used,
    };
    Ok(Discussion {
        victim,
        ibis,
        agents,
        scores,
        explanation,
    })
}
