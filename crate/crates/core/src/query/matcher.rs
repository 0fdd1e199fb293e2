use std::collections::BTreeSet;

use crate::kg::{Graph, Triple};

use super::pattern::{Binding, Pattern, TriplePattern};

fn estimate(g: &Graph, p: &TriplePattern, b: &Binding) -> usize {
    g.estimate(p.subject.resolve(b), p.predicate.resolve(b), p.object.resolve(b))
}

/// Backtracking join. `sources[i]` is the graph pattern `i` is matched
/// against. At every level the remaining pattern with the smallest index
/// estimate goes next. `visit` receives each solution with the matched
/// triples in pattern order.
pub(crate) fn join<'g, F>(sources: &[&'g Graph], patterns: &[TriplePattern], init: Binding, visit: &mut F)
where
    F: FnMut(&Binding, &[&'g Triple]),
{
    debug_assert_eq!(sources.len(), patterns.len());
    let mut remaining: Vec<usize> = (0..patterns.len()).collect();
    let mut matched: Vec<Option<&'g Triple>> = vec![None; patterns.len()];
    step(sources, patterns, &init, &mut remaining, &mut matched, visit);
}

fn step<'g, F>(
    sources: &[&'g Graph],
    patterns: &[TriplePattern],
    binding: &Binding,
    remaining: &mut Vec<usize>,
    matched: &mut Vec<Option<&'g Triple>>,
    visit: &mut F,
) where
    F: FnMut(&Binding, &[&'g Triple]),
{
    let Some((slot, &next)) = remaining
        .iter()
        .enumerate()
        .min_by_key(|(_, &i)| estimate(sources[i], &patterns[i], binding))
    else {
        let triples: Vec<&Triple> = matched.iter().map(|t| t.expect("all patterns matched")).collect();
        visit(binding, &triples);
        return;
    };
    let p = &patterns[next];
    let candidates = sources[next].find(
        p.subject.resolve(binding),
        p.predicate.resolve(binding),
        p.object.resolve(binding),
    );
    if candidates.is_empty() {
        return;
    }
    remaining.swap_remove(slot);
    for t in candidates {
        if let Some(b) = p.unify(t, binding) {
            matched[next] = Some(t);
            step(sources, patterns, &b, remaining, matched, visit);
        }
    }
    matched[next] = None;
    remaining.push(next);
    let last = remaining.len() - 1;
    remaining.swap(slot, last);
}

/// Every binding under which all patterns are in `g`, without duplicates,
/// ordered by (variable name, term) comparison.
pub fn match_pattern(g: &Graph, p: &Pattern) -> Vec<Binding> {
    let sources = vec![g; p.triples.len()];
    let mut out = BTreeSet::new();
    join(&sources, &p.triples, Binding::new(), &mut |b, _| {
        out.insert(b.clone());
    });
    out.into_iter().collect()
}
