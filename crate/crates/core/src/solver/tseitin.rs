use std::collections::HashMap;

use super::cnf::{Cnf, Lit};
use super::formula::Formula;

/// Incremental Tseitin encoder. Variables `1..=num_atoms` are the formula
/// atoms; auxiliaries follow. Every auxiliary is defined by a full
/// equivalence, so it is a function of the atoms and the models of the CNF
/// project one-to-one onto the models of the input.
#[derive(Debug, Clone)]
pub struct Encoder {
    num_atoms: usize,
    cnf: Cnf,
    cache: HashMap<Formula, Lit>,
}

enum Encoded {
    Const(bool),
    Lit(Lit),
}

impl Encoder {
    pub fn new(num_atoms: usize) -> Encoder {
        Encoder {
            num_atoms,
            cnf: Cnf {
                num_vars: num_atoms,
                clauses: Vec::new(),
            },
            cache: HashMap::new(),
        }
    }

    pub fn num_atoms(&self) -> usize {
        self.num_atoms
    }

    /// Asserts `f`. Top-level conjunctions and disjunctions become clauses
    /// directly; only nested structure gets auxiliaries.
    pub fn assert(&mut self, f: &Formula) {
        match f.clone().simplify() {
            Formula::Const(true) => {}
            Formula::Const(false) => self.cnf.clauses.push(Vec::new()),
            Formula::And(gs) => gs.iter().for_each(|g| self.assert(g)),
            Formula::Or(gs) => {
                let clause: Vec<Lit> = gs.iter().map(|g| self.lit(g)).collect();
                self.cnf.add_clause(&clause);
            }
            Formula::Implies(a, b) => {
                let clause = [-self.lit(&a), self.lit(&b)];
                self.cnf.add_clause(&clause);
            }
            g => {
                let l = self.lit(&g);
                self.cnf.add_clause(&[l]);
            }
        }
    }

    /// A literal equivalent to `f`, or the constant `f` simplifies to.
    pub fn literal(&mut self, f: &Formula) -> Result<Lit, bool> {
        match self.encode(&f.clone().simplify()) {
            Encoded::Const(b) => Err(b),
            Encoded::Lit(l) => Ok(l),
        }
    }

    pub fn finish(self) -> Cnf {
        self.cnf
    }

    pub fn cnf(&self) -> &Cnf {
        &self.cnf
    }

    fn lit(&mut self, f: &Formula) -> Lit {
        match self.encode(f) {
            Encoded::Lit(l) => l,
            Encoded::Const(_) => unreachable!("constants are simplified away"),
        }
    }

    fn fresh(&mut self) -> Lit {
        self.cnf.num_vars += 1;
        self.cnf.num_vars as Lit
    }

    fn encode(&mut self, f: &Formula) -> Encoded {
        let l = match f {
            Formula::Const(b) => return Encoded::Const(*b),
            Formula::Atom(v) => {
                let v = *v as usize;
                assert!(v >= 1, "atom index 0 is not a variable");
                self.num_atoms = self.num_atoms.max(v);
                self.cnf.num_vars = self.cnf.num_vars.max(v);
                v as Lit
            }
            Formula::Not(g) => -self.lit(g),
            _ => {
                if let Some(&l) = self.cache.get(f) {
                    return Encoded::Lit(l);
                }
                let l = self.define(f);
                self.cache.insert(f.clone(), l);
                l
            }
        };
        Encoded::Lit(l)
    }

    fn define(&mut self, f: &Formula) -> Lit {
        match f {
            Formula::And(gs) => {
                let ls: Vec<Lit> = gs.iter().map(|g| self.lit(g)).collect();
                let a = self.fresh();
                for &l in &ls {
                    self.cnf.add_clause(&[-a, l]);
                }
                let mut big: Vec<Lit> = ls.iter().map(|l| -l).collect();
                big.push(a);
                self.cnf.add_clause(&big);
                a
            }
            Formula::Or(gs) => {
                let ls: Vec<Lit> = gs.iter().map(|g| self.lit(g)).collect();
                let a = self.fresh();
                for &l in &ls {
                    self.cnf.add_clause(&[a, -l]);
                }
                let mut big = ls.clone();
                big.push(-a);
                self.cnf.add_clause(&big);
                a
            }
            Formula::Implies(p, q) => {
                let (p, q) = (self.lit(p), self.lit(q));
                let a = self.fresh();
                self.cnf.add_clause(&[-a, -p, q]);
                self.cnf.add_clause(&[a, p]);
                self.cnf.add_clause(&[a, -q]);
                a
            }
            Formula::Iff(p, q) => {
                let (p, q) = (self.lit(p), self.lit(q));
                let a = self.fresh();
                self.cnf.add_clause(&[-a, -p, q]);
                self.cnf.add_clause(&[-a, p, -q]);
                self.cnf.add_clause(&[a, p, q]);
                self.cnf.add_clause(&[a, -p, -q]);
                a
            }
            Formula::Const(_) | Formula::Atom(_) | Formula::Not(_) => unreachable!(),
        }
    }
}

/// Tseitin CNF of one formula; variables `1..=max atom` keep their meaning.
pub fn to_cnf(f: &Formula) -> Cnf {
    let mut e = Encoder::new(f.atoms().into_iter().max().map_or(0, |&v| v as usize));
    e.assert(f);
    e.finish()
}
