use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::cnf::{var_of, Lit, Model};
use super::ground::{GroundAtom, Grounding};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NeverGuilty,
    GuiltyInSome,
    GuiltyInAll,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NeverGuilty => "never-guilty",
            Verdict::GuiltyInSome => "guilty-in-some",
            Verdict::GuiltyInAll => "guilty-in-all",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomVerdict {
    pub atom: GroundAtom,
    pub verdict: Verdict,
}

/// A suspect's strongest verdict over its atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuspectVerdict {
    pub suspect: String,
    pub verdict: Verdict,
    pub atoms: Vec<AtomVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub satisfiable: bool,
    pub models: usize,
    pub truncated: bool,
    pub suspects: Vec<SuspectVerdict>,
    /// Atom literals true in every model in atom order, `!` marking negatives.
    pub backbone: Vec<String>,
    /// Atoms that differ between the given models.
    pub indeterminate: Vec<GroundAtom>,
}

/// Verdicts for atoms of `verdict_pred`, grouped by their first argument.
/// A verdict atom is guilty-in-all when positive in the backbone,
/// never-guilty when negative in it, and guilty-in-some otherwise.
pub fn scenario_report(
    grounding: &Grounding,
    models: &[Model],
    truncated: bool,
    backbone: &BTreeSet<Lit>,
    verdict_pred: &str,
) -> ScenarioReport {
    if models.is_empty() {
        return ScenarioReport {
            satisfiable: false,
            models: 0,
            truncated: false,
            suspects: Vec::new(),
            backbone: Vec::new(),
            indeterminate: Vec::new(),
        };
    }
    let n = grounding.atoms.len();
    let mut by_suspect: BTreeMap<String, Vec<AtomVerdict>> = BTreeMap::new();
    for (i, atom) in grounding.atoms.iter().enumerate() {
        if atom.pred != verdict_pred || atom.args.is_empty() {
            continue;
        }
        let v = i as Lit + 1;
        let verdict = if backbone.contains(&v) {
            Verdict::GuiltyInAll
        } else if backbone.contains(&-v) {
            Verdict::NeverGuilty
        } else {
            Verdict::GuiltyInSome
        };
        by_suspect.entry(atom.args[0].clone()).or_default().push(AtomVerdict {
            atom: atom.clone(),
            verdict,
        });
    }
    let suspects = by_suspect
        .into_iter()
        .map(|(suspect, atoms)| SuspectVerdict {
            suspect,
            verdict: atoms.iter().map(|a| a.verdict).max().unwrap_or(Verdict::NeverGuilty),
            atoms,
        })
        .collect();
    let mut lits: Vec<Lit> = backbone.iter().copied().filter(|l| var_of(*l) <= n).collect();
    lits.sort_by_key(|l| var_of(*l));
    let backbone = lits
        .into_iter()
        .map(|l| {
            let atom = grounding.atom(var_of(l) as u32);
            if l > 0 {
                atom.to_string()
            } else {
                format!("!{atom}")
            }
        })
        .collect();
    let indeterminate = (1..=n)
        .filter(|&v| models.iter().any(|m| m.value(v) != models[0].value(v)))
        .map(|v| grounding.atom(v as u32).clone())
        .collect();
    ScenarioReport {
        satisfiable: true,
        models: models.len(),
        truncated,
        suspects,
        backbone,
        indeterminate,
    }
}

impl fmt::Display for ScenarioReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.satisfiable {
            return writeln!(f, "UNSAT");
        }
        let more = if self.truncated { "+" } else { "" };
        writeln!(f, "SAT, {}{more} models", self.models)?;
        writeln!(f, "verdict:")?;
        for s in &self.suspects {
            writeln!(f, "  {} {}", s.suspect, s.verdict)?;
            for a in &s.atoms {
                writeln!(f, "    {} {}", a.atom, a.verdict)?;
            }
        }
        writeln!(f, "indeterminate:")?;
        for a in &self.indeterminate {
            writeln!(f, "  {a}")?;
        }
        Ok(())
    }
}
