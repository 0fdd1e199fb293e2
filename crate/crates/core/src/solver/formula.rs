use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Propositional formula. Atoms are variable indices after grounding, or any
/// other atom type before.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula<A = u32> {
    Const(bool),
    Atom(A),
    Not(Box<Formula<A>>),
    And(Vec<Formula<A>>),
    Or(Vec<Formula<A>>),
    Implies(Box<Formula<A>>, Box<Formula<A>>),
    Iff(Box<Formula<A>>, Box<Formula<A>>),
}

impl<A> Formula<A> {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula<A>) -> Formula<A> {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula<A>, b: Formula<A>) -> Formula<A> {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula<A>, b: Formula<A>) -> Formula<A> {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, val: &impl Fn(&A) -> bool) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Atom(a) => val(a),
            Formula::Not(f) => !f.eval(val),
            Formula::And(fs) => fs.iter().all(|f| f.eval(val)),
            Formula::Or(fs) => fs.iter().any(|f| f.eval(val)),
            Formula::Implies(a, b) => !a.eval(val) || b.eval(val),
            Formula::Iff(a, b) => a.eval(val) == b.eval(val),
        }
    }

    pub fn map_atoms<B>(self, f: &mut impl FnMut(A) -> Formula<B>) -> Formula<B> {
        match self {
            Formula::Const(b) => Formula::Const(b),
            Formula::Atom(a) => f(a),
            Formula::Not(g) => Formula::not(g.map_atoms(f)),
            Formula::And(gs) => Formula::And(gs.into_iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Or(gs) => Formula::Or(gs.into_iter().map(|g| g.map_atoms(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
        }
    }

    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            Formula::Const(_) => {}
            Formula::Atom(a) => f(a),
            Formula::Not(g) => g.for_each_atom(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.for_each_atom(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
        }
    }

    pub fn atoms(&self) -> BTreeSet<&A>
    where
        A: Ord,
    {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| {
            out.insert(a);
        });
        out
    }

    /// Folds constants away. The result is either a bare constant or a
    /// formula with no constants inside; nested and/or are flattened.
    pub fn simplify(self) -> Formula<A> {
        use Formula::*;
        match self {
            Const(_) | Atom(_) => self,
            Not(g) => match g.simplify() {
                Const(b) => Const(!b),
                Not(h) => *h,
                h => Formula::not(h),
            },
            And(gs) => {
                let mut out = Vec::new();
                for g in gs {
                    match g.simplify() {
                        Const(true) => {}
                        Const(false) => return Const(false),
                        And(hs) => out.extend(hs),
                        h => out.push(h),
                    }
                }
                match out.len() {
                    0 => Const(true),
                    1 => out.pop().unwrap(),
                    _ => And(out),
                }
            }
            Or(gs) => {
                let mut out = Vec::new();
                for g in gs {
                    match g.simplify() {
                        Const(false) => {}
                        Const(true) => return Const(true),
                        Or(hs) => out.extend(hs),
                        h => out.push(h),
                    }
                }
                match out.len() {
                    0 => Const(false),
                    1 => out.pop().unwrap(),
                    _ => Or(out),
                }
            }
            Implies(a, b) => match (a.simplify(), b.simplify()) {
                (Const(false), _) | (_, Const(true)) => Const(true),
                (Const(true), b) => b,
                (a, Const(false)) => Formula::not(a).simplify(),
                (a, b) => Formula::implies(a, b),
            },
            Iff(a, b) => match (a.simplify(), b.simplify()) {
                (Const(x), Const(y)) => Const(x == y),
                (Const(true), h) | (h, Const(true)) => h,
                (Const(false), h) | (h, Const(false)) => Formula::not(h).simplify(),
                (a, b) => Formula::iff(a, b),
            },
        }
    }
}

impl<A: fmt::Display> fmt::Display for Formula<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, gs: &[Formula<A>], op: &str, empty: &str| {
            if gs.is_empty() {
                return write!(f, "{empty}");
            }
            write!(f, "(")?;
            for (i, g) in gs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{g}")?;
            }
            write!(f, ")")
        };
        match self {
            Formula::Const(b) => write!(f, "{b}"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::And(gs) => join(f, gs, "&", "true"),
            Formula::Or(gs) => join(f, gs, "|", "false"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
        }
    }
}
