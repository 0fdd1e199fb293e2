mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use sleuth_core::ibis::{
    attack, consistency, discuss, elaborate, generate_hypotheses, seed_issues, select, ConReason, ConsistencyScore,
    DiscussionAgent, IbisGraph, NodeKind, Rulebooks,
};
use sleuth_core::kg::{parse_turtle, Term};

fn incident() -> Term {
    sb("s20")
}

/// Agent for `suspect` against Julia, elaborated with the fixture rules.
fn agent(suspect: &str, ibis: &mut IbisGraph) -> DiscussionAgent {
    let g = story();
    let rules = mom_rules(&g);
    let hyps = generate_hypotheses(&g, ibis, &sb("Julia")).unwrap();
    let (h, idea) = hyps.into_iter().find(|(h, _)| h.suspect == sb(suspect)).unwrap();
    let mut a = DiscussionAgent::new(&g, h, idea);
    elaborate(
        &mut a,
        ibis,
        Rulebooks {
            motive: &rules,
            means: &rules,
        },
        &incident(),
    )
    .unwrap();
    a
}

#[test]
fn seeding() {
    let g = story();
    let ibis = seed_issues(&g, &[sb("Julia")]).unwrap();
    assert_eq!(ibis.nodes.len(), 1);
    assert_eq!(ibis.nodes[0].kind, NodeKind::Issue);
    assert_eq!(ibis.nodes[0].text, "who is the murderer of Julia");
    assert_eq!(seed_issues(&g, &[sb("Julia"), sb("Helen")]).unwrap().nodes.len(), 2);
    assert_eq!(seed_issues(&g, &[]).unwrap_err().code(), "UNKNOWN_PERSON");
    assert_eq!(seed_issues(&g, &[sb("Holmes")]).unwrap_err().code(), "UNKNOWN_PERSON");
    assert_eq!(
        seed_issues(&g, &[sb("Villagers")]).unwrap_err().code(),
        "UNKNOWN_PERSON"
    );
}

#[test]
fn hypotheses_cover_every_other_person() {
    let g = story();
    let mut ibis = seed_issues(&g, &[sb("Julia")]).unwrap();
    let hyps = generate_hypotheses(&g, &mut ibis, &sb("Julia")).unwrap();
    let suspects: Vec<Term> = hyps.iter().map(|(h, _)| h.suspect.clone()).collect();
    assert_eq!(suspects, vec![sb("Helen"), sb("Roma"), sb("Roylott")]);
    for (_, id) in &hyps {
        let node = ibis.get(id).unwrap();
        assert_eq!(node.kind, NodeKind::Idea);
        assert_eq!(node.parent.as_deref(), Some("n0"));
    }
    assert_eq!(
        generate_hypotheses(&g, &mut ibis, &sb("Holmes")).unwrap_err().code(),
        "UNKNOWN_PERSON"
    );

    let lone = parse_turtle(
        "@prefix kgc: <http://kgc.knowledge-graph.jp/ontology/kgc.owl#> .\n<http://example.org/V> a kgc:Person .",
    )
    .unwrap();
    let v = Term::iri("http://example.org/V").unwrap();
    let mut ibis = seed_issues(&lone, std::slice::from_ref(&v)).unwrap();
    assert!(generate_hypotheses(&lone, &mut ibis, &v).unwrap().is_empty());
}

#[test]
fn roylott_answers_how_and_why() {
    let mut ibis = seed_issues(&story(), &[sb("Julia")]).unwrap();
    let a = agent("Roylott", &mut ibis);
    assert_eq!(a.hypothesis.how.as_ref().unwrap().0, sb("VenomKilling"));
    assert_eq!(a.hypothesis.why.as_ref().unwrap().0, mom("money"));
    assert!(a.opportunity.is_some());
    let texts: Vec<&str> = ibis.nodes.iter().map(|n| n.text.as_str()).collect();
    assert!(texts.contains(&"How does Roylott killed Julia ?"));
    assert!(texts.contains(&"Why does Roylott killed Julia ?"));
    assert!(texts.contains(&"Roylott killed Julia by venom killing"));
    assert!(texts.contains(&"Roylott killed Julia for money"));
    assert!(ibis.check().is_ok());
    // the agent's graph only grows
    let g = story();
    assert!(g.iter().all(|t| a.graph.contains(t)));
    assert!(a.graph.contains_spo(&sb("Julia"), &mom("isKilledBy"), &sb("Roylott")));
    assert!(a
        .graph
        .contains_spo(&sb("Roylott"), &mom("canKillBy"), &sb("VenomKilling")));
}

#[test]
fn roma_has_no_method() {
    let mut ibis = seed_issues(&story(), &[sb("Julia")]).unwrap();
    let a = agent("Roma", &mut ibis);
    assert!(a.hypothesis.how.is_none());
    assert!(a.hypothesis.why.is_none());
    assert!(a.opportunity.is_none());
    // both sub-issues remain open: no Idea below them
    let subs: Vec<_> = ibis.children(&a.idea).filter(|n| n.kind == NodeKind::Issue).collect();
    assert_eq!(subs.len(), 2);
    assert!(subs.iter().all(|s| ibis.children(&s.id).next().is_none()));
}

#[test]
fn empty_rulebooks_leave_questions_open() {
    let g = story();
    let mut ibis = seed_issues(&g, &[sb("Julia")]).unwrap();
    let (h, idea) = generate_hypotheses(&g, &mut ibis, &sb("Julia")).unwrap().pop().unwrap();
    let mut a = DiscussionAgent::new(&g, h, idea);
    elaborate(
        &mut a,
        &mut ibis,
        Rulebooks {
            motive: &[],
            means: &[],
        },
        &incident(),
    )
    .unwrap();
    assert!(a.hypothesis.how.is_none() && a.hypothesis.why.is_none());
}

#[test]
fn attacks() {
    let mut ibis = seed_issues(&story(), &[sb("Julia")]).unwrap();
    let roylott = agent("Roylott", &mut ibis);
    let roma = agent("Roma", &mut ibis);
    let helen = agent("Helen", &mut ibis);

    let cons = attack(&roylott, &roma.hypothesis, &incident()).unwrap();
    let reasons: Vec<&ConReason> = cons.iter().map(|c| &c.reason).collect();
    assert_eq!(
        reasons,
        vec![&ConReason::NoOpportunity, &ConReason::Contradicted { scene: sb("s27") }]
    );
    assert!(attack(&roma, &roylott.hypothesis, &incident()).unwrap().is_empty());
    assert!(attack(&roma, &helen.hypothesis, &incident()).unwrap().is_empty());
    assert_eq!(
        attack(&roma, &roma.hypothesis, &incident()).unwrap_err().code(),
        "SELF_ATTACK"
    );
}

#[test]
fn fixture_discussion_selects_roylott() {
    let g = story();
    let rules = mom_rules(&g);
    let d = discuss(
        &g,
        Rulebooks {
            motive: &rules,
            means: &rules,
        },
        &incident(),
    )
    .unwrap();
    // by hand: Roylott how+why+opp, no cons; Helen opp only; Roma two cons
    let expect = [("Roylott", 1.0), ("Helen", 1.0 / 3.0), ("Roma", -2.0 / 3.0)];
    for (who, value) in expect {
        assert!((d.scores[&sb(who)].value - value).abs() < 1e-12, "{who}");
    }
    assert_eq!(d.explanation.suspect, sb("Roylott"));
    assert!(d.explanation.how.is_some() && d.explanation.why.is_some());
    assert!(d.explanation.scenes_used.contains(&sb("s01")));
    assert_eq!(d.explanation.subtree["text"], "isKilledBy(Julia, Roylott)");
    assert!(d.ibis.check().is_ok());
    for a in &d.agents {
        assert_eq!(consistency(a), d.scores[&a.hypothesis.suspect]);
    }
    let roma = d.agents.iter().find(|a| a.hypothesis.suspect == sb("Roma")).unwrap();
    assert_eq!(roma.received.len(), 2);
    let con_nodes = d
        .ibis
        .children(&roma.idea)
        .filter(|n| n.kind == NodeKind::ArgumentCon)
        .count();
    assert_eq!(con_nodes, 2);
}

#[test]
fn fixture_export_round_trips() {
    let g = story();
    let rules = mom_rules(&g);
    let d = discuss(
        &g,
        Rulebooks {
            motive: &rules,
            means: &rules,
        },
        &incident(),
    )
    .unwrap();
    let doc = d.ibis.export();
    let text = serde_json::to_string(&doc).unwrap();
    let back = IbisGraph::import(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back, d.ibis);
    assert_eq!(serde_json::to_string(&back.export()).unwrap(), text);
    let dot = d.ibis.to_dot();
    assert_eq!(dot.matches(" -> ").count(), d.ibis.nodes.len() - 1);
}

fn score_strategy() -> impl Strategy<Value = ConsistencyScore> {
    (any::<bool>(), any::<bool>(), any::<bool>(), 0usize..6).prop_map(|(a, b, c, u)| ConsistencyScore::new(a, b, c, u))
}

proptest! {
    #[test]
    fn value_is_bounded_and_determined(s in score_strategy()) {
        prop_assert!((-1.0..=1.0).contains(&s.value));
        prop_assert_eq!(s, ConsistencyScore::new(s.how, s.why, s.opportunity, s.unrebutted));
    }

    #[test]
    fn select_is_invariant_under_monotone_rescaling(
        scores in proptest::collection::vec(score_strategy(), 1..8),
        scale in 0.1f64..10.0,
        shift in -5.0f64..5.0,
    ) {
        let map: BTreeMap<Term, ConsistencyScore> = scores
            .iter()
            .enumerate()
            .map(|(i, s)| (Term::iri(format!("http://example.org/p{i}")).unwrap(), *s))
            .collect();
        let rescaled: BTreeMap<Term, ConsistencyScore> = map
            .iter()
            .map(|(k, s)| (k.clone(), ConsistencyScore { value: (s.value * scale + shift).exp(), ..*s }))
            .collect();
        prop_assert_eq!(select(&map).unwrap(), select(&rescaled).unwrap());
    }
}
