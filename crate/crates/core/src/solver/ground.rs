use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::cnf::{Cnf, Lit};
use super::formula::Formula;
use super::scenario::{Arg, AtomExpr, Binder, CardinalityKind, Expr, ScenarioSpec};
use super::tseitin::Encoder;
use super::ScenarioError;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroundAtom {
    pub pred: String,
    pub args: Vec<String>,
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.pred, self.args.join(", "))
    }
}

/// Ground formulas over variable indices; atom `i + 1` is `atoms[i]`, in
/// lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grounding {
    pub atoms: Vec<GroundAtom>,
    pub hard: Vec<Formula>,
    pub soft: Vec<(Formula, u64)>,
}

/// A grounding compiled to clauses. Variables past `atoms.len()` are
/// Tseitin auxiliaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoded {
    pub cnf: Cnf,
    pub soft: Vec<(Vec<Lit>, u64)>,
    /// Weight of soft formulas that hold in every assignment.
    pub soft_constant: u64,
}

impl Grounding {
    pub fn var(&self, atom: &GroundAtom) -> Option<u32> {
        self.atoms.binary_search(atom).ok().map(|i| i as u32 + 1)
    }

    pub fn atom(&self, var: u32) -> &GroundAtom {
        &self.atoms[var as usize - 1]
    }

    pub fn encode(&self) -> Encoded {
        let mut e = Encoder::new(self.atoms.len());
        for f in &self.hard {
            e.assert(f);
        }
        let mut soft = Vec::new();
        let mut soft_constant = 0;
        for (f, w) in &self.soft {
            match e.literal(f) {
                Ok(l) => soft.push((vec![l], *w)),
                Err(true) => soft_constant += w,
                Err(false) => {}
            }
        }
        Encoded {
            cnf: e.finish(),
            soft,
            soft_constant,
        }
    }
}

type Env = BTreeMap<String, String>;

struct Grounder<'a> {
    spec: &'a ScenarioSpec,
    constants: BTreeSet<&'a str>,
    closed_true: BTreeSet<GroundAtom>,
}

impl<'a> Grounder<'a> {
    fn domain(&self, name: &str) -> Result<&'a [String], ScenarioError> {
        self.spec.domain(name).ok_or_else(|| ScenarioError::UndeclaredSymbol {
            symbol: name.to_string(),
            context: "domain".to_string(),
        })
    }

    fn params(&self, a: &AtomExpr) -> Result<&'a [String], ScenarioError> {
        let decl = self
            .spec
            .preds
            .get(&a.pred)
            .ok_or_else(|| ScenarioError::UndeclaredSymbol {
                symbol: a.pred.clone(),
                context: "predicate".to_string(),
            })?;
        if decl.params.len() != a.args.len() {
            return Err(ScenarioError::ArityMismatch {
                pred: a.pred.clone(),
                expected: decl.params.len(),
                found: a.args.len(),
            });
        }
        Ok(&decl.params)
    }

    fn constant(&self, name: &str, domain: &str) -> Result<String, ScenarioError> {
        if !self.constants.contains(name) {
            return Err(ScenarioError::UndeclaredSymbol {
                symbol: name.to_string(),
                context: "constant".to_string(),
            });
        }
        if !self.domain(domain)?.iter().any(|v| v == name) {
            return Err(ScenarioError::TypeMismatch {
                symbol: name.to_string(),
                domain: domain.to_string(),
            });
        }
        Ok(name.to_string())
    }

    /// Ground atom, with `wild` filling the `*` positions in order.
    fn ground_atom(&self, a: &AtomExpr, env: &Env, wild: &[String]) -> Result<GroundAtom, ScenarioError> {
        let params = self.params(a)?;
        let mut wild = wild.iter();
        let mut args = Vec::with_capacity(a.args.len());
        for (arg, dom) in a.args.iter().zip(params) {
            args.push(match arg {
                Arg::Wild => wild.next().expect("one value per wildcard").clone(),
                Arg::Name(n) => match env.get(n) {
                    Some(v) => v.clone(),
                    None => self.constant(n, dom)?,
                },
            });
        }
        Ok(GroundAtom {
            pred: a.pred.clone(),
            args,
        })
    }

    fn atom_formula(&self, a: GroundAtom) -> Formula<GroundAtom> {
        if self.spec.preds[&a.pred].closed {
            Formula::Const(self.closed_true.contains(&a))
        } else {
            Formula::Atom(a)
        }
    }

    fn bind(&self, binders: &[Binder], body: Binders<'_>) -> Result<Vec<(String, &'a [String])>, ScenarioError> {
        binders
            .iter()
            .map(|(v, d)| {
                let d = match d {
                    Some(d) => d.clone(),
                    None => body
                        .infer(v, self.spec)
                        .ok_or_else(|| ScenarioError::UninferableDomain { var: v.clone() })?,
                };
                let values = self.domain(&d)?;
                if values.is_empty() {
                    return Err(ScenarioError::EmptyDomain { domain: d });
                }
                Ok((v.clone(), values))
            })
            .collect()
    }

    fn quantified(
        &self,
        binders: &[Binder],
        body: &Expr,
        env: &Env,
    ) -> Result<Vec<Formula<GroundAtom>>, ScenarioError> {
        let bound = self.bind(binders, Binders::Expr(body))?;
        let mut out = Vec::new();
        for env in assignments(&bound, env) {
            out.push(self.ground(body, &env)?);
        }
        Ok(out)
    }

    fn ground(&self, e: &Expr, env: &Env) -> Result<Formula<GroundAtom>, ScenarioError> {
        Ok(match e {
            Expr::Const(b) => Formula::Const(*b),
            Expr::Atom(a) => self.atom_formula(self.ground_atom(a, env, &[])?),
            Expr::Not(g) => Formula::not(self.ground(g, env)?),
            Expr::And(gs) => Formula::And(gs.iter().map(|g| self.ground(g, env)).collect::<Result<_, _>>()?),
            Expr::Or(gs) => Formula::Or(gs.iter().map(|g| self.ground(g, env)).collect::<Result<_, _>>()?),
            Expr::Implies(a, b) => Formula::implies(self.ground(a, env)?, self.ground(b, env)?),
            Expr::Iff(a, b) => Formula::iff(self.ground(a, env)?, self.ground(b, env)?),
            Expr::Forall(bs, body) => Formula::And(self.quantified(bs, body, env)?),
            Expr::Exists(bs, body) => Formula::Or(self.quantified(bs, body, env)?),
        })
    }

    fn cardinality(
        &self,
        kind: CardinalityKind,
        family: &AtomExpr,
        forall: &[Binder],
    ) -> Result<Vec<Formula<GroundAtom>>, ScenarioError> {
        let params = self.params(family)?;
        let bound = self.bind(forall, Binders::Atom(family))?;
        let wild_domains: Vec<(String, &[String])> = family
            .args
            .iter()
            .zip(params)
            .filter(|(a, _)| **a == Arg::Wild)
            .map(|(_, d)| Ok((d.clone(), self.domain(d)?)))
            .collect::<Result<_, ScenarioError>>()?;
        let mut out = Vec::new();
        for env in assignments(&bound, &Env::new()) {
            let mut members = Vec::new();
            for fill in product(&wild_domains) {
                members.push(self.atom_formula(self.ground_atom(family, &env, &fill)?));
            }
            if kind == CardinalityKind::ExactlyOne {
                out.push(Formula::Or(members.clone()));
            }
            for i in 0..members.len() {
                for j in i + 1..members.len() {
                    out.push(Formula::Or(vec![
                        Formula::not(members[i].clone()),
                        Formula::not(members[j].clone()),
                    ]));
                }
            }
        }
        Ok(out)
    }
}

enum Binders<'b> {
    Expr(&'b Expr),
    Atom(&'b AtomExpr),
}

impl Binders<'_> {
    fn infer(&self, var: &str, spec: &ScenarioSpec) -> Option<String> {
        match self {
            Binders::Expr(e) => infer_in_expr(e, var, spec),
            Binders::Atom(a) => infer_in_atom(a, var, spec),
        }
    }
}

fn infer_in_atom(a: &AtomExpr, var: &str, spec: &ScenarioSpec) -> Option<String> {
    let decl = spec.preds.get(&a.pred)?;
    a.args
        .iter()
        .zip(&decl.params)
        .find(|(arg, _)| matches!(arg, Arg::Name(n) if n == var))
        .map(|(_, d)| d.clone())
}

fn infer_in_expr(e: &Expr, var: &str, spec: &ScenarioSpec) -> Option<String> {
    match e {
        Expr::Const(_) => None,
        Expr::Atom(a) => infer_in_atom(a, var, spec),
        Expr::Not(g) => infer_in_expr(g, var, spec),
        Expr::And(gs) | Expr::Or(gs) => gs.iter().find_map(|g| infer_in_expr(g, var, spec)),
        Expr::Implies(a, b) | Expr::Iff(a, b) => infer_in_expr(a, var, spec).or_else(|| infer_in_expr(b, var, spec)),
        Expr::Forall(bs, body) | Expr::Exists(bs, body) => {
            if bs.iter().any(|(v, _)| v == var) {
                None
            } else {
                infer_in_expr(body, var, spec)
            }
        }
    }
}

/// Every extension of `base` by one value per binder, first binder slowest.
fn assignments(bound: &[(String, &[String])], base: &Env) -> Vec<Env> {
    let mut out = vec![base.clone()];
    for (v, values) in bound {
        out = out
            .into_iter()
            .flat_map(|env| {
                values.iter().map(move |x| {
                    let mut e = env.clone();
                    e.insert(v.clone(), x.clone());
                    e
                })
            })
            .collect();
    }
    out
}

fn product(domains: &[(String, &[String])]) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for (_, values) in domains {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<String>| {
                values.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x.clone());
                    p
                })
            })
            .collect();
    }
    out
}

/// Expands quantifiers and cardinality constraints; closed predicates
/// become constants. Formulas that simplify to `true` are dropped.
pub fn ground(spec: &ScenarioSpec) -> Result<Grounding, ScenarioError> {
    let mut constants: BTreeSet<&str> = spec.domains.values().flatten().map(String::as_str).collect();
    constants.extend(spec.slots.iter().map(String::as_str));
    let mut g = Grounder {
        spec,
        constants,
        closed_true: BTreeSet::new(),
    };
    for decl in spec.preds.values() {
        for d in &decl.params {
            g.domain(d)?;
        }
    }
    let mut closed_true = BTreeSet::new();
    let mut hard: Vec<Formula<GroundAtom>> = Vec::new();
    for fact in &spec.facts {
        let a = g.ground_atom(fact, &Env::new(), &[])?;
        if spec.preds[&a.pred].closed {
            closed_true.insert(a);
        } else {
            hard.push(Formula::Atom(a));
        }
    }
    g.closed_true = closed_true;
    for axiom in &spec.axioms {
        hard.push(g.ground(axiom, &Env::new())?);
    }
    for c in &spec.cardinality {
        hard.extend(g.cardinality(c.kind, &c.family, &c.forall)?);
    }
    let mut soft = Vec::new();
    for (f, w) in &spec.soft {
        soft.push((g.ground(f, &Env::new())?.simplify(), *w));
    }
    let hard: Vec<Formula<GroundAtom>> = hard
        .into_iter()
        .map(Formula::simplify)
        .filter(|f| *f != Formula::Const(true))
        .collect();

    let mut atoms = BTreeSet::new();
    for f in hard.iter().chain(soft.iter().map(|(f, _)| f)) {
        f.for_each_atom(&mut |a| {
            atoms.insert(a.clone());
        });
    }
    let atoms: Vec<GroundAtom> = atoms.into_iter().collect();
    let index = |a: GroundAtom| Formula::Atom(atoms.binary_search(&a).expect("collected") as u32 + 1);
    let hard = hard.into_iter().map(|f| f.map_atoms(&mut { index })).collect();
    let soft = soft
        .into_iter()
        .map(|(f, w)| (f.map_atoms(&mut { index }), w))
        .collect();
    Ok(Grounding { atoms, hard, soft })
}
