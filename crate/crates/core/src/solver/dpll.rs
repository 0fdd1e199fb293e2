use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::cnf::{normalize_clause, var_of, Cnf, Lit, Model};
use super::SolverError;

/// Chronological DPLL state. Branching always picks the lowest-index
/// unassigned variable of some unsatisfied clause and tries true first;
/// once every clause is satisfied the rest of the variables are free.
struct Search<'a> {
    clauses: &'a [Vec<Lit>],
    assign: Vec<i8>,
    trail: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(num_vars: usize, clauses: &'a [Vec<Lit>]) -> Search<'a> {
        Search {
            clauses,
            assign: vec![0; num_vars + 1],
            trail: Vec::new(),
        }
    }

    fn value(&self, lit: Lit) -> i8 {
        let v = self.assign[var_of(lit)];
        if lit > 0 {
            v
        } else {
            -v
        }
    }

    fn set(&mut self, lit: Lit) {
        let v = var_of(lit);
        self.assign[v] = if lit > 0 { 1 } else { -1 };
        self.trail.push(v);
    }

    fn undo(&mut self, mark: usize) {
        for v in self.trail.drain(mark..) {
            self.assign[v] = 0;
        }
    }

    /// Unit propagation to a fixpoint over `clauses`; false on conflict.
    fn propagate(&mut self, clauses: &[Vec<Lit>]) -> bool {
        loop {
            let mut changed = false;
            for c in clauses {
                let mut unassigned = None;
                let mut open = 0;
                let mut sat = false;
                for &l in c {
                    match self.value(l) {
                        1 => {
                            sat = true;
                            break;
                        }
                        0 => {
                            open += 1;
                            unassigned = Some(l);
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match open {
                    0 => return false,
                    1 => {
                        self.set(unassigned.unwrap());
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn satisfied(&self, c: &[Lit]) -> bool {
        c.iter().any(|&l| self.value(l) == 1)
    }

    /// Lowest-index unassigned variable in an unsatisfied clause.
    fn branch_var(&self, clauses: &[Vec<Lit>]) -> Option<usize> {
        clauses
            .iter()
            .filter(|c| !self.satisfied(c))
            .filter_map(|c| c.iter().map(|&l| var_of(l)).find(|&v| self.assign[v] == 0))
            .min()
    }

    fn free_vars(&self) -> Vec<usize> {
        (1..self.assign.len()).filter(|&v| self.assign[v] == 0).collect()
    }

    /// The current assignment with free variables set from `free`.
    fn model(&self, free: &[(usize, bool)]) -> Model {
        let mut values: Vec<bool> = self.assign[1..].iter().map(|&v| v == 1).collect();
        for &(v, b) in free {
            values[v - 1] = b;
        }
        Model { values }
    }

    /// Depth-first over the decision tree; `leaf` runs at every node where
    /// all clauses are satisfied.
    fn dfs(&mut self, leaf: &mut dyn FnMut(&Search) -> ControlFlow<()>) -> ControlFlow<()> {
        let mark = self.trail.len();
        if !self.propagate(self.clauses) {
            self.undo(mark);
            return ControlFlow::Continue(());
        }
        let flow = match self.branch_var(self.clauses) {
            None => leaf(self),
            Some(v) => {
                let mut flow = ControlFlow::Continue(());
                for lit in [v as Lit, -(v as Lit)] {
                    let m = self.trail.len();
                    self.set(lit);
                    flow = self.dfs(leaf);
                    self.undo(m);
                    if flow.is_break() {
                        break;
                    }
                }
                flow
            }
        };
        self.undo(mark);
        flow
    }
}

fn has_empty_clause(c: &Cnf) -> bool {
    c.clauses.iter().any(|c| c.is_empty())
}

/// First model in branching order, free variables false.
pub fn solve(c: &Cnf) -> Option<Model> {
    if has_empty_clause(c) {
        return None;
    }
    let mut found = None;
    let mut s = Search::new(c.num_vars, &c.clauses);
    let _ = s.dfs(&mut |s| {
        found = Some(s.model(&[]));
        ControlFlow::Break(())
    });
    found
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub models: Vec<Model>,
    /// More models exist beyond `limit`.
    pub truncated: bool,
}

/// Distinct models in branching order, up to `limit`.
///
/// Equivalent to repeatedly solving and adding a blocking clause, but run
/// as one search: each satisfied node expands its free variables in binary
/// order (lowest index most significant, false first), so the first model
/// is the one [`solve`] returns.
pub fn enumerate_models(c: &Cnf, limit: usize) -> Enumeration {
    assert!(limit >= 1, "limit must be at least 1");
    let mut models = Vec::new();
    let mut truncated = false;
    if has_empty_clause(c) {
        return Enumeration { models, truncated };
    }
    let mut s = Search::new(c.num_vars, &c.clauses);
    let _ = s.dfs(&mut |s| {
        let free = s.free_vars();
        let mut bits = vec![false; free.len()];
        loop {
            if models.len() == limit {
                truncated = true;
                return ControlFlow::Break(());
            }
            let pairs: Vec<(usize, bool)> = free.iter().copied().zip(bits.iter().copied()).collect();
            models.push(s.model(&pairs));
            // odometer, last position fastest
            let mut k = bits.len();
            loop {
                if k == 0 {
                    return ControlFlow::Continue(());
                }
                k -= 1;
                bits[k] = !bits[k];
                if bits[k] {
                    break;
                }
            }
        }
    });
    Enumeration { models, truncated }
}

/// Literals true in every model, by one probe per variable not already
/// refuted by an earlier model.
pub fn backbone(c: &Cnf) -> Result<BTreeSet<Lit>, SolverError> {
    let first = solve(c).ok_or(SolverError::UnsatInput)?;
    let mut candidates: Vec<Option<Lit>> = first.literals().into_iter().map(Some).collect();
    let mut probe = c.clone();
    for i in 0..candidates.len() {
        let Some(lit) = candidates[i] else { continue };
        probe.clauses.push(vec![-lit]);
        if let Some(m) = solve(&probe) {
            for cand in candidates.iter_mut() {
                if cand.is_some_and(|l| !m.lit_true(l)) {
                    *cand = None;
                }
            }
        }
        probe.clauses.pop();
    }
    Ok(candidates.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weighted {
    pub model: Model,
    /// Total weight of satisfied soft clauses.
    pub weight: u64,
}

/// Exact MaxSAT by branch and bound over the same decision order as
/// [`solve`]. The first optimum found is kept.
pub fn solve_weighted(hard: &Cnf, soft: &[(Vec<Lit>, u64)]) -> Result<Weighted, SolverError> {
    assert!(soft.iter().all(|(_, w)| *w >= 1), "soft weights must be at least 1");
    if has_empty_clause(hard) {
        return Err(SolverError::UnsatInput);
    }
    let mut num_vars = hard.num_vars;
    let mut constant = 0u64;
    let mut clauses: Vec<(Vec<Lit>, u64)> = Vec::new();
    for (c, w) in soft {
        match normalize_clause(c) {
            None => constant += w,
            Some(c) if c.is_empty() => {}
            Some(c) => {
                num_vars = num_vars.max(c.iter().map(|l| var_of(*l)).max().unwrap_or(0));
                clauses.push((c, *w));
            }
        }
    }
    let soft_lits: Vec<Vec<Lit>> = clauses.iter().map(|(c, _)| c.clone()).collect();
    let mut best: Option<Weighted> = None;
    let mut s = Search::new(num_vars, &hard.clauses);
    bnb(&mut s, &clauses, &soft_lits, &mut best);
    let mut best = best.ok_or(SolverError::UnsatInput)?;
    best.weight += constant;
    Ok(best)
}

fn bnb(s: &mut Search, soft: &[(Vec<Lit>, u64)], soft_lits: &[Vec<Lit>], best: &mut Option<Weighted>) {
    let mark = s.trail.len();
    if !s.propagate(s.clauses) {
        s.undo(mark);
        return;
    }
    let (mut sat, mut open) = (0u64, 0u64);
    for (c, w) in soft {
        if s.satisfied(c) {
            sat += w;
        } else if c.iter().any(|&l| s.value(l) == 0) {
            open += w;
        }
    }
    if best.as_ref().is_some_and(|b| sat + open <= b.weight) {
        s.undo(mark);
        return;
    }
    let v = [s.branch_var(s.clauses), s.branch_var(soft_lits)]
        .into_iter()
        .flatten()
        .min();
    match v {
        None => {
            *best = Some(Weighted {
                model: s.model(&[]),
                weight: sat,
            });
        }
        Some(v) => {
            for lit in [v as Lit, -(v as Lit)] {
                let m = s.trail.len();
                s.set(lit);
                bnb(s, soft, soft_lits, best);
                s.undo(m);
            }
        }
    }
    s.undo(mark);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(clauses: &[&[Lit]]) -> Cnf {
        Cnf::new(0, clauses.iter().map(|c| c.to_vec()))
    }

    #[test]
    fn contradiction_is_unsat() {
        assert_eq!(solve(&cnf(&[&[1], &[-1]])), None);
    }

    #[test]
    fn free_variables_default_false() {
        let m = solve(&cnf(&[&[1, 2]])).unwrap();
        assert_eq!(m.values, vec![true, false]);
    }

    #[test]
    fn enumerate_small() {
        let e = enumerate_models(&cnf(&[&[1, 2]]), 10);
        let got: Vec<Vec<bool>> = e.models.into_iter().map(|m| m.values).collect();
        assert_eq!(got, vec![vec![true, false], vec![true, true], vec![false, true]]);
        assert!(!e.truncated);
    }

    #[test]
    fn enumerate_truncates() {
        let e = enumerate_models(&Cnf::new(3, []), 4);
        assert_eq!(e.models.len(), 4);
        assert!(e.truncated);
        assert!(enumerate_models(&cnf(&[&[1], &[-1]]), 4).models.is_empty());
    }

    #[test]
    fn empty_cnf_has_one_model() {
        let e = enumerate_models(&Cnf::new(0, []), 3);
        assert_eq!(e.models, vec![Model { values: vec![] }]);
    }

    #[test]
    fn backbone_small() {
        assert_eq!(backbone(&cnf(&[&[1], &[1, 2]])).unwrap(), BTreeSet::from([1]));
        assert!(backbone(&Cnf::new(3, [])).unwrap().is_empty());
        assert_eq!(backbone(&cnf(&[&[1], &[-1]])), Err(SolverError::UnsatInput));
    }

    #[test]
    fn weighted_small() {
        let w = solve_weighted(&cnf(&[&[1, 2]]), &[(vec![-1], 2), (vec![-2], 1)]).unwrap();
        assert_eq!(w.model.values, vec![false, true]);
        assert_eq!(w.weight, 2);
        let h = cnf(&[&[1, 2], &[-1, 3]]);
        assert_eq!(solve_weighted(&h, &[]).unwrap().model, solve(&h).unwrap());
        assert_eq!(solve_weighted(&cnf(&[&[1], &[-1]]), &[]), Err(SolverError::UnsatInput));
    }
}
