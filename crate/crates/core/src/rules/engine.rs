use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::kg::{Graph, Triple};
use crate::query::{join, Binding, PatternTerm, TriplePattern};

use super::derivation::{Derivation, Step};
use super::rule::{Rule, RuleError};

/// Result of [`forward_chain`].
#[derive(Debug, Clone)]
pub struct Inference {
    /// Atoms not present in the input graph.
    pub derived: BTreeSet<Triple>,
    /// One proof per derived atom.
    pub proofs: BTreeMap<Triple, Arc<Derivation>>,
    /// Input plus derived atoms.
    pub graph: Graph,
}

impl Inference {
    /// The proof of `t`, or a base derivation when `t` is an input fact.
    pub fn proof(&self, t: &Triple) -> Option<Arc<Derivation>> {
        if let Some(p) = self.proofs.get(t) {
            return Some(p.clone());
        }
        self.graph
            .contains(t)
            .then(|| Arc::new(Derivation::base(&self.graph, t.clone())))
    }
}

fn may_feed(producer: &Rule, pattern: &TriplePattern) -> bool {
    match (producer.head.predicate.constant(), &pattern.predicate) {
        (Some(c), PatternTerm::Term(p)) => c == p,
        _ => true,
    }
}

/// Groups rules into strata, dependencies first. Each strongly connected
/// component of the rule dependency graph is one stratum; a negative edge
/// inside a component makes the program unstratifiable.
pub fn stratify(rules: &[Rule]) -> Result<Vec<Vec<usize>>, RuleError> {
    let mut dg: DiGraph<usize, bool> = DiGraph::new();
    let nodes: Vec<_> = (0..rules.len()).map(|i| dg.add_node(i)).collect();
    let mut negative: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (c, consumer) in rules.iter().enumerate() {
        for (p, producer) in rules.iter().enumerate() {
            let pos = consumer.body.iter().any(|pat| may_feed(producer, pat));
            let neg = consumer.negated.iter().any(|pat| may_feed(producer, pat));
            if pos || neg {
                dg.add_edge(nodes[p], nodes[c], neg);
            }
            if neg {
                negative.insert((p, c));
            }
        }
    }

    let mut sccs = tarjan_scc(&dg);
    sccs.reverse();
    let mut strata = Vec::with_capacity(sccs.len());
    for scc in sccs {
        let members: BTreeSet<usize> = scc.iter().map(|n| dg[*n]).collect();
        if let Some(&(p, c)) = negative
            .iter()
            .find(|(p, c)| members.contains(p) && members.contains(c))
        {
            return Err(RuleError::Unstratifiable {
                cycle: cycle_through(rules, &members, p, c),
            });
        }
        strata.push(members.into_iter().collect());
    }
    Ok(strata)
}

/// Rule names along `p -> c -> ... -> p` inside one component.
fn cycle_through(rules: &[Rule], members: &BTreeSet<usize>, p: usize, c: usize) -> Vec<String> {
    let feeds = |a: usize, b: usize| {
        rules[b]
            .body
            .iter()
            .chain(&rules[b].negated)
            .any(|pat| may_feed(&rules[a], pat))
    };
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([c]);
    let mut seen = BTreeSet::from([c]);
    while let Some(n) = queue.pop_front() {
        if n == p {
            break;
        }
        for &m in members {
            if feeds(n, m) && seen.insert(m) {
                parent.insert(m, n);
                queue.push_back(m);
            }
        }
    }
    let mut path = vec![p];
    let mut n = p;
    while n != c {
        n = parent[&n];
        path.push(n);
    }
    path.reverse();
    // path runs c -> ... -> p; the negative edge closes it.
    let mut cycle: Vec<String> = vec![rules[p].name.clone()];
    cycle.extend(path.iter().take(path.len() - 1).map(|&i| rules[i].name.clone()));
    if p == c {
        cycle.truncate(1);
    }
    cycle
}

struct Chain<'a> {
    rules: &'a [Rule],
    total: Graph,
    proofs: BTreeMap<Triple, Arc<Derivation>>,
}

impl Chain<'_> {
    fn premise(&self, t: &Triple) -> Arc<Derivation> {
        self.proofs
            .get(t)
            .cloned()
            .unwrap_or_else(|| Arc::new(Derivation::base(&self.total, t.clone())))
    }

    /// Fires `rule` over `sources`, collecting atoms new to `total`.
    fn fire(&self, rule: &Rule, sources: &[&Graph], fresh: &mut BTreeMap<Triple, Derivation>) {
        let mut hits: Vec<(Triple, Vec<Triple>)> = Vec::new();
        join(sources, &rule.body, Binding::new(), &mut |b, ts| {
            if !rule.negation_holds(&self.total, b) {
                return;
            }
            if let Some(atom) = rule.head.instantiate(b) {
                if !self.total.contains(&atom) && !fresh.contains_key(&atom) {
                    hits.push((atom, ts.iter().map(|t| (*t).clone()).collect()));
                }
            }
        });
        for (atom, premises) in hits {
            if fresh.contains_key(&atom) {
                continue;
            }
            let premises = premises.iter().map(|t| self.premise(t)).collect();
            let d = Derivation::derived(&self.total, atom.clone(), Step::Rule(rule.name.clone()), premises);
            fresh.insert(atom, d);
        }
    }

    fn absorb(&mut self, fresh: BTreeMap<Triple, Derivation>) -> Graph {
        let mut delta = Graph::new();
        for (atom, d) in fresh {
            self.total.insert(atom.clone());
            delta.insert(atom.clone());
            self.proofs.insert(atom, Arc::new(d));
        }
        delta
    }

    fn stratum(&mut self, members: &[usize]) {
        let mut fresh = BTreeMap::new();
        for &r in members {
            let rule = &self.rules[r];
            let sources = vec![&self.total; rule.body.len()];
            self.fire(rule, &sources, &mut fresh);
        }
        let mut delta = self.absorb(fresh);
        while !delta.is_empty() {
            let mut fresh = BTreeMap::new();
            for &r in members {
                let rule = &self.rules[r];
                for i in 0..rule.body.len() {
                    let mut sources = vec![&self.total; rule.body.len()];
                    sources[i] = &delta;
                    self.fire(rule, &sources, &mut fresh);
                }
            }
            delta = self.absorb(fresh);
        }
    }
}

/// Stratified semi-naive evaluation to the least fixpoint.
pub fn forward_chain(g: &Graph, rules: &[Rule]) -> Result<Inference, RuleError> {
    for r in rules {
        r.check_safety()?;
    }
    let strata = stratify(rules)?;
    let mut chain = Chain {
        rules,
        total: g.clone(),
        proofs: BTreeMap::new(),
    };
    for members in &strata {
        chain.stratum(members);
    }
    Ok(Inference {
        derived: chain.proofs.keys().cloned().collect(),
        proofs: chain.proofs,
        graph: chain.total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::Term;
    use crate::rules::parse_rules;

    fn prefixes() -> BTreeMap<String, String> {
        BTreeMap::from([("".to_string(), "http://ex.org/".to_string())])
    }

    fn i(s: &str) -> Term {
        Term::iri(format!("http://ex.org/{s}")).unwrap()
    }

    fn chain_graph(n: usize) -> Graph {
        (0..n)
            .map(|k| Triple::new(i(&format!("n{k}")), i("edge"), i(&format!("n{}", k + 1))).unwrap())
            .collect()
    }

    #[test]
    fn empty_ruleset_derives_nothing() {
        let inf = forward_chain(&chain_graph(3), &[]).unwrap();
        assert!(inf.derived.is_empty());
    }

    #[test]
    fn transitive_closure_of_five_edges() {
        let rules = parse_rules(
            "rule base: (?x :reach ?y) :- (?x :edge ?y) .\n\
             rule step: (?x :reach ?z) :- (?x :reach ?y), (?y :edge ?z) .",
            &prefixes(),
        )
        .unwrap();
        let inf = forward_chain(&chain_graph(5), &rules).unwrap();
        let reach: Vec<_> = inf.derived.iter().filter(|t| t.predicate == i("reach")).collect();
        // 6 nodes in a line: 5 + 4 + 3 + 2 + 1 ordered pairs.
        assert_eq!(reach.len(), 15);
        let longest = Triple::new(i("n0"), i("reach"), i("n5")).unwrap();
        assert_eq!(inf.proofs[&longest].depth(), 6);
    }

    #[test]
    fn every_proof_replays() {
        let rules = parse_rules(
            "rule base: (?x :reach ?y) :- (?x :edge ?y) .\n\
             rule step: (?x :reach ?z) :- (?x :reach ?y), (?y :edge ?z) .\n\
             rule far: (?x :far ?z) :- (?x :reach ?z), not (?x :edge ?z) .",
            &prefixes(),
        )
        .unwrap();
        let inf = forward_chain(&chain_graph(4), &rules).unwrap();
        for (atom, d) in &inf.proofs {
            let Step::Rule(name) = &d.step else {
                panic!("derived atoms come from rules")
            };
            let rule = rules.iter().find(|r| &r.name == name).unwrap();
            let premises: Vec<Triple> = d.premises.iter().map(|p| p.atom.clone()).collect();
            assert_eq!(rule.replay(&premises, &inf.graph).as_ref(), Some(atom));
        }
    }

    #[test]
    fn negation_sees_lower_strata_to_fixpoint() {
        let rules = parse_rules(
            "rule lonely: (?x :lonely :yes) :- (?x :edge ?y), not (?x :reach ?x) .\n\
             rule base: (?x :reach ?y) :- (?x :edge ?y) .\n\
             rule step: (?x :reach ?z) :- (?x :reach ?y), (?y :reach ?z) .",
            &prefixes(),
        )
        .unwrap();
        let mut g = chain_graph(2);
        g.insert(Triple::new(i("n2"), i("edge"), i("n1")).unwrap());
        let inf = forward_chain(&g, &rules).unwrap();
        let lonely: Vec<&Term> = inf
            .derived
            .iter()
            .filter(|t| t.predicate == i("lonely"))
            .map(|t| &t.subject)
            .collect();
        assert_eq!(lonely, vec![&i("n0")]);
    }

    #[test]
    fn unstratifiable_cycle_is_reported() {
        let rules = parse_rules(
            "rule p: (?x :p :yes) :- (?x :node :yes), not (?x :q :yes) .\n\
             rule q: (?x :q :yes) :- (?x :node :yes), not (?x :p :yes) .",
            &prefixes(),
        )
        .unwrap();
        let err = forward_chain(&Graph::new(), &rules).unwrap_err();
        assert_eq!(err.code(), "UNSTRATIFIABLE");
        let RuleError::Unstratifiable { cycle } = err else {
            unreachable!()
        };
        let mut names = cycle.clone();
        names.sort();
        assert_eq!(names, ["p", "q"]);
    }

    #[test]
    fn self_negation_is_unstratifiable() {
        let rules = parse_rules(
            "rule p: (?x :p :yes) :- (?x :node :yes), not (?x :p :yes) .",
            &prefixes(),
        )
        .unwrap();
        let err = stratify(&rules).unwrap_err();
        assert_eq!(
            err,
            RuleError::Unstratifiable {
                cycle: vec!["p".into()]
            }
        );
    }

    #[test]
    fn unsafe_rule_is_rejected_before_evaluation() {
        let rules = parse_rules("rule bad: (?x :p ?y) :- (?x :q :r) .", &prefixes()).unwrap();
        assert_eq!(forward_chain(&Graph::new(), &rules).unwrap_err().code(), "UNSAFE_RULE");
    }
}
