use std::fmt;

use serde::{Deserialize, Serialize};

/// A signed, 1-based variable index.
pub type Lit = i32;

pub fn var_of(lit: Lit) -> usize {
    lit.unsigned_abs() as usize
}

/// Clauses over variables `1..=num_vars`. Construction through [`Cnf::new`]
/// or [`Cnf::add_clause`] sorts and deduplicates literals and drops
/// tautologies, so no clause contains both `v` and `-v`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

/// Sorts and dedups; `None` for a tautology.
pub fn normalize_clause(clause: &[Lit]) -> Option<Vec<Lit>> {
    let mut c: Vec<Lit> = clause.to_vec();
    c.sort_by_key(|l| (var_of(*l), *l));
    c.dedup();
    if c.windows(2).any(|w| w[0] == -w[1]) {
        return None;
    }
    Some(c)
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: impl IntoIterator<Item = Vec<Lit>>) -> Cnf {
        let mut cnf = Cnf {
            num_vars,
            clauses: Vec::new(),
        };
        for c in clauses {
            cnf.add_clause(&c);
        }
        cnf
    }

    /// Adds a clause, growing `num_vars` to cover it.
    pub fn add_clause(&mut self, clause: &[Lit]) {
        assert!(clause.iter().all(|&l| l != 0), "literal 0 is not a variable");
        if let Some(c) = normalize_clause(clause) {
            self.num_vars = self.num_vars.max(c.iter().map(|l| var_of(*l)).max().unwrap_or(0));
            self.clauses.push(c);
        }
    }

    pub fn is_satisfied_by(&self, m: &Model) -> bool {
        self.clauses.iter().all(|c| m.satisfies(c))
    }
}

impl fmt::Display for Cnf {
    /// DIMACS.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for c in &self.clauses {
            for l in c {
                write!(f, "{l} ")?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

/// A total assignment; `values[v - 1]` is variable `v`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Model {
    pub values: Vec<bool>,
}

impl Model {
    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn lit_true(&self, lit: Lit) -> bool {
        self.value(var_of(lit)) == (lit > 0)
    }

    pub fn satisfies(&self, clause: &[Lit]) -> bool {
        clause.iter().any(|&l| self.lit_true(l))
    }

    /// The model as literals `±v`, in variable order.
    pub fn literals(&self) -> Vec<Lit> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &b)| if b { i as Lit + 1 } else { -(i as Lit + 1) })
            .collect()
    }

    /// The first `n` variables.
    pub fn project(&self, n: usize) -> Model {
        Model {
            values: self.values[..n].to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let cnf = Cnf::new(0, [vec![2, -1, 2], vec![1, -1], vec![-3]]);
        assert_eq!(cnf.clauses, vec![vec![-1, 2], vec![-3]]);
        assert_eq!(cnf.num_vars, 3);
    }

    #[test]
    fn dimacs() {
        let cnf = Cnf::new(2, [vec![1, -2]]);
        assert_eq!(cnf.to_string(), "p cnf 2 1\n1 -2 0\n");
    }
}
