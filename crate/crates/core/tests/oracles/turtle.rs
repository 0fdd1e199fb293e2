use proptest::prelude::*;
use sleuth_core::kg::{Graph, Literal, Term, Triple, ViolationCode};

fn lit_or_iri(i: u8) -> Term {
    match i % 4 {
        0 => Term::literal(format!("v \"{i}\"\n")),
        1 => Term::Literal(Literal::with_language(format!("é{i}"), "fr").unwrap()),
        _ => Term::iri(format!("http://ex.org/o{i}")).unwrap(),
    }
}

/// Small graphs mixing IRIs, blank subjects, escaped and tagged literals.
pub fn arb_doc_graph() -> impl Strategy<Value = Graph> {
    proptest::collection::vec((0u8..5, 0u8..3, 0u8..12, any::<bool>()), 0..25).prop_map(|rows| {
        let mut g = Graph::with_default_prefixes();
        g.set_prefix("ex", "http://ex.org/");
        for (s, p, o, blank) in rows {
            let subject = if blank {
                Term::blank(format!("b{s}")).unwrap()
            } else {
                Term::iri(format!("http://ex.org/s{s}")).unwrap()
            };
            let predicate = Term::iri(format!("http://ex.org/p{p}")).unwrap();
            g.insert(Triple::new(subject, predicate, lit_or_iri(o)).unwrap());
        }
        g
    })
}

pub const SCENE_PREFIXES: &str =
    "@prefix kgc: <http://kgc.knowledge-graph.jp/ontology/kgc.owl#> .\n@prefix : <http://example.org/> .\n";

/// One document per violation class, each breaking exactly one rule once.
pub fn seeded_violations() -> Vec<(ViolationCode, String)> {
    [
        (
            ViolationCode::BothPredProp,
            ":s a kgc:Situation ; kgc:hasPredicate :run ; kgc:hasProperty :tall .",
        ),
        (ViolationCode::NoPredProp, ":s a kgc:Situation ; kgc:subject :A ."),
        (
            ViolationCode::MissingInfosource,
            ":s a kgc:Statement ; kgc:hasPredicate :say .",
        ),
        (
            ViolationCode::DanglingSceneLink,
            ":s a kgc:Situation ; kgc:hasPredicate :run ; kgc:then :nowhere .",
        ),
        (
            ViolationCode::BadTimeLiteral,
            ":s a kgc:Situation ; kgc:hasPredicate :run ; kgc:time \"at dusk\" .",
        ),
        (
            ViolationCode::NegationWithoutPositive,
            ":s a kgc:Situation ; kgc:hasPredicate :notGo . :notGo a kgc:NegativeVerb .",
        ),
    ]
    .into_iter()
    .map(|(c, body)| (c, format!("{SCENE_PREFIXES}{body}")))
    .collect()
}
