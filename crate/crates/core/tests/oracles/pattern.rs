use std::collections::BTreeSet;

use proptest::prelude::*;
use sleuth_core::kg::{Graph, Term, Triple};
use sleuth_core::query::{Binding, Pattern, PatternTerm, TriplePattern, Var};

/// Every assignment of the pattern's variables over all terms of `g`,
/// kept when each instantiated pattern is a triple of `g`.
pub fn brute_force_match(g: &Graph, p: &Pattern) -> Vec<Binding> {
    let mut universe: BTreeSet<Term> = BTreeSet::new();
    for t in g.iter() {
        universe.insert(t.subject.clone());
        universe.insert(t.predicate.clone());
        universe.insert(t.object.clone());
    }
    let universe: Vec<Term> = universe.into_iter().collect();
    let vars: Vec<Var> = p.vars().into_iter().cloned().collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; vars.len()];
    if !vars.is_empty() && universe.is_empty() {
        return out;
    }
    loop {
        let b: Binding = vars
            .iter()
            .cloned()
            .zip(idx.iter().map(|&i| universe[i].clone()))
            .collect();
        let holds = p.triples.iter().all(|tp| {
            let get = |pt: &PatternTerm| match pt {
                PatternTerm::Term(t) => t.clone(),
                PatternTerm::Var(v) => b[v].clone(),
            };
            Triple::new(get(&tp.subject), get(&tp.predicate), get(&tp.object))
                .map(|t| g.contains(&t))
                .unwrap_or(false)
        });
        if holds {
            out.push(b);
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == idx.len() {
                out.sort();
                return out;
            }
            idx[k] += 1;
            if idx[k] < universe.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn node(i: u8) -> Term {
    Term::iri(format!("http://ex.org/n{i}")).unwrap()
}

fn pred(i: u8) -> Term {
    Term::iri(format!("http://ex.org/p{i}")).unwrap()
}

pub fn arb_graph(max_triples: usize) -> impl Strategy<Value = Graph> {
    proptest::collection::vec((0u8..6, 0u8..3, 0u8..6), 0..=max_triples).prop_map(|edges| {
        edges
            .into_iter()
            .map(|(s, p, o)| Triple::new(node(s), pred(p), node(o)).unwrap())
            .collect()
    })
}

fn arb_position(is_predicate: bool) -> impl Strategy<Value = PatternTerm> {
    let constant = if is_predicate {
        (0u8..3).prop_map(pred).boxed()
    } else {
        (0u8..6).prop_map(node).boxed()
    };
    prop_oneof![
        2 => constant.prop_map(PatternTerm::Term),
        3 => prop::sample::select(vec!["x", "y", "z"]).prop_map(PatternTerm::var),
    ]
}

pub fn arb_pattern() -> impl Strategy<Value = Pattern> {
    proptest::collection::vec(
        (arb_position(false), arb_position(true), arb_position(false))
            .prop_map(|(s, p, o)| TriplePattern::new(s, p, o)),
        0..4,
    )
    .prop_map(Pattern::new)
}
