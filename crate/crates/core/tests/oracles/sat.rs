use std::collections::BTreeSet;

use proptest::prelude::*;
use sleuth_core::solver::{Cnf, Formula, Lit};

/// Bit `v - 1` of `row` is variable `v`.
pub fn assignment(row: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| row >> i & 1 == 1).collect()
}

fn lit_true(a: &[bool], l: Lit) -> bool {
    a[l.unsigned_abs() as usize - 1] == (l > 0)
}

pub fn clause_true(a: &[bool], c: &[Lit]) -> bool {
    c.iter().any(|&l| lit_true(a, l))
}

pub fn cnf_true(a: &[bool], cnf: &Cnf) -> bool {
    cnf.clauses.iter().all(|c| clause_true(a, c))
}

/// Every satisfying row of the truth table, sorted.
pub fn models(cnf: &Cnf) -> BTreeSet<Vec<bool>> {
    (0..1u32 << cnf.num_vars)
        .map(|r| assignment(r, cnf.num_vars))
        .filter(|a| cnf_true(a, cnf))
        .collect()
}

/// Literals shared by all models; `None` when there are none.
pub fn backbone(cnf: &Cnf) -> Option<BTreeSet<Lit>> {
    let ms = models(cnf);
    let first = ms.iter().next()?;
    Some(
        (1..=cnf.num_vars)
            .filter(|&v| ms.iter().all(|m| m[v - 1] == first[v - 1]))
            .map(|v| if first[v - 1] { v as Lit } else { -(v as Lit) })
            .collect(),
    )
}

pub fn soft_weight(a: &[bool], soft: &[(Vec<Lit>, u64)]) -> u64 {
    soft.iter().filter(|(c, _)| clause_true(a, c)).map(|(_, w)| w).sum()
}

/// Best total soft weight over models of `hard`.
pub fn max_weight(hard: &Cnf, soft: &[(Vec<Lit>, u64)]) -> Option<u64> {
    models(hard).iter().map(|a| soft_weight(a, soft)).max()
}

/// Truth-table models of a formula over variables `1..=n`.
pub fn formula_models(f: &Formula, n: usize) -> BTreeSet<Vec<bool>> {
    (0..1u32 << n)
        .map(|r| assignment(r, n))
        .filter(|a| f.eval(&|v: &u32| a[*v as usize - 1]))
        .collect()
}

pub fn arb_clause(vars: usize) -> impl Strategy<Value = Vec<Lit>> {
    proptest::collection::vec((1..=vars as Lit, any::<bool>()), 1..=3)
        .prop_map(|ls| ls.into_iter().map(|(v, pos)| if pos { v } else { -v }).collect())
}

/// Up to `max_vars` variables and `max_clauses` clauses of length 1 to 3.
pub fn arb_cnf(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = Cnf> {
    (1..=max_vars).prop_flat_map(move |n| {
        proptest::collection::vec(arb_clause(n), 0..=max_clauses).prop_map(move |cs| Cnf::new(n, cs))
    })
}

pub fn arb_soft(vars: usize, max: usize) -> impl Strategy<Value = Vec<(Vec<Lit>, u64)>> {
    proptest::collection::vec((arb_clause(vars), 1u64..=5), 0..=max)
}

pub fn arb_formula(vars: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => any::<bool>().prop_map(Formula::Const),
        6 => (1..=vars).prop_map(Formula::Atom),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            proptest::collection::vec(inner.clone(), 0..=3).prop_map(Formula::And),
            proptest::collection::vec(inner.clone(), 0..=3).prop_map(Formula::Or),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::iff(a, b)),
        ]
    })
}
