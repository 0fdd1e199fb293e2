use std::collections::BTreeSet;

use proptest::prelude::*;
use sleuth_core::kg::{Graph, Term, Triple};
use sleuth_core::query::{Binding, PatternTerm, TriplePattern, Var};
use sleuth_core::rules::{HeadTerm, Rule};

pub const NODES: u8 = 6;

pub fn node(i: u8) -> Term {
    Term::iri(format!("http://ex.org/n{i}")).unwrap()
}

/// Base predicates e0..e2; derived predicate d{k} lives in layer k+1.
pub fn edb(i: u8) -> Term {
    Term::iri(format!("http://ex.org/e{i}")).unwrap()
}

pub fn idb(k: u8) -> Term {
    Term::iri(format!("http://ex.org/d{k}")).unwrap()
}

/// A rule program generated in layers: rules of layer k only negate
/// predicates of earlier layers.
#[derive(Debug, Clone)]
pub struct Layered {
    pub graph: Graph,
    pub layers: Vec<Vec<Rule>>,
}

impl Layered {
    pub fn rules(&self) -> Vec<Rule> {
        self.layers.iter().flatten().cloned().collect()
    }
}

fn ground(pt: &PatternTerm, b: &Binding) -> Term {
    match pt {
        PatternTerm::Term(t) => t.clone(),
        PatternTerm::Var(v) => b[v].clone(),
    }
}

fn ground_head(h: &HeadTerm, b: &Binding) -> Term {
    match h {
        HeadTerm::Pattern(p) => ground(p, b),
        HeadTerm::Skolem(_) => panic!("the oracle does not generate Skolem heads"),
    }
}

fn holds(g: &BTreeSet<Triple>, p: &TriplePattern, b: &Binding) -> bool {
    Triple::new(ground(&p.subject, b), ground(&p.predicate, b), ground(&p.object, b))
        .map(|t| g.contains(&t))
        .unwrap_or(false)
}

/// Naive iteration layer by layer: every rule is re-applied to the whole
/// set, over every assignment of its variables to nodes, until nothing
/// changes.
pub fn naive_fixpoint(program: &Layered) -> BTreeSet<Triple> {
    let mut facts: BTreeSet<Triple> = program.graph.iter().cloned().collect();
    let nodes: Vec<Term> = (0..NODES).map(node).collect();
    for layer in &program.layers {
        loop {
            let mut added = Vec::new();
            for rule in layer {
                let mut vars: Vec<Var> = rule.body.iter().flat_map(|p| p.vars().cloned()).collect();
                vars.sort();
                vars.dedup();
                let total = nodes.len().pow(vars.len() as u32);
                for code in 0..total {
                    let mut c = code;
                    let b: Binding = vars
                        .iter()
                        .map(|v| {
                            let t = nodes[c % nodes.len()].clone();
                            c /= nodes.len();
                            (v.clone(), t)
                        })
                        .collect();
                    if rule.body.iter().all(|p| holds(&facts, p, &b))
                        && rule.negated.iter().all(|p| !holds(&facts, p, &b))
                    {
                        let h = &rule.head;
                        let t = Triple::new(
                            ground_head(&h.subject, &b),
                            ground_head(&h.predicate, &b),
                            ground_head(&h.object, &b),
                        )
                        .unwrap();
                        if !facts.contains(&t) {
                            added.push(t);
                        }
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            facts.extend(added);
        }
    }
    facts
}

fn arb_term(vars: &'static [&'static str]) -> BoxedStrategy<PatternTerm> {
    prop_oneof![
        1 => (0..NODES).prop_map(|i| PatternTerm::Term(node(i))),
        4 => prop::sample::select(vars.to_vec()).prop_map(PatternTerm::var),
    ]
    .boxed()
}

fn arb_rule(layer: u8, index: usize) -> impl Strategy<Value = Rule> {
    const VARS: &[&str] = &["x", "y", "z"];
    // Positive bodies may use any base predicate or any derived predicate up
    // to this layer; negation only earlier ones.
    let positive_preds: Vec<Term> = (0..3).map(edb).chain((0..=layer).map(idb)).collect();
    let negative_preds: Vec<Term> = (0..3).map(edb).chain((0..layer).map(idb)).collect();
    let body = proptest::collection::vec(
        (arb_term(VARS), prop::sample::select(positive_preds), arb_term(VARS)),
        1..4,
    );
    let negated = proptest::collection::vec(
        (
            any::<prop::sample::Index>(),
            prop::sample::select(negative_preds),
            any::<prop::sample::Index>(),
        ),
        0..2,
    );
    let head = (any::<prop::sample::Index>(), any::<prop::sample::Index>());
    (body, negated, head).prop_map(move |(body, negated, (hs, ho))| {
        let body: Vec<TriplePattern> = body.into_iter().map(|(s, p, o)| TriplePattern::new(s, p, o)).collect();
        // Head and negated positions draw from terms the body binds.
        let mut bound: Vec<PatternTerm> = body
            .iter()
            .flat_map(|p| [p.subject.clone(), p.object.clone()])
            .collect();
        bound.sort();
        bound.dedup();
        let pick = |i: &prop::sample::Index| i.get(&bound).clone();
        let negated = negated
            .iter()
            .map(|(s, p, o)| TriplePattern::new(pick(s), p.clone(), pick(o)))
            .collect();
        Rule::new(
            format!("r{layer}_{index}"),
            TriplePattern::new(pick(&hs), idb(layer), pick(&ho)),
            body,
        )
        .with_negated(negated)
    })
}

/// Up to three layers of one to three rules over a random base graph of
/// at most `max_triples` triples.
pub fn arb_layered(max_triples: usize) -> impl Strategy<Value = Layered> {
    let graph = proptest::collection::vec((0..NODES, 0u8..3, 0..NODES), 0..=max_triples).prop_map(|edges| {
        edges
            .into_iter()
            .map(|(s, p, o)| Triple::new(node(s), edb(p), node(o)).unwrap())
            .collect::<Graph>()
    });
    let layer = |k: u8| {
        proptest::collection::vec(Just(()), 1..4).prop_flat_map(move |slots| {
            slots
                .iter()
                .enumerate()
                .map(|(i, _)| arb_rule(k, i))
                .collect::<Vec<_>>()
        })
    };
    (graph, 1u8..=3)
        .prop_flat_map(move |(graph, depth)| {
            let layers: Vec<_> = (0..depth).map(layer).collect();
            (Just(graph), layers)
        })
        .prop_map(|(graph, layers)| Layered { graph, layers })
}
