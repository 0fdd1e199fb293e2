use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::kg::{is_scene, Graph, Term, Triple};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "name", rename_all = "snake_case")]
pub enum Step {
    /// A triple of the input graph.
    Base,
    Rule(String),
    /// A procedural inference step (reachability, method feasibility, ...).
    Builtin(String),
}

/// Proof tree for one atom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub atom: Triple,
    pub step: Step,
    pub premises: Vec<Arc<Derivation>>,
    pub scenes_used: BTreeSet<Term>,
}

fn own_scene(g: &Graph, atom: &Triple) -> Option<Term> {
    is_scene(g, &atom.subject).then(|| atom.subject.clone())
}

impl Derivation {
    pub fn base(g: &Graph, atom: Triple) -> Derivation {
        let scenes_used = own_scene(g, &atom).into_iter().collect();
        Derivation {
            atom,
            step: Step::Base,
            premises: Vec::new(),
            scenes_used,
        }
    }

    /// A derived node; `scenes_used` is the union over the premises plus
    /// the atom's own scene.
    pub fn derived(g: &Graph, atom: Triple, step: Step, premises: Vec<Arc<Derivation>>) -> Derivation {
        let mut scenes_used: BTreeSet<Term> = premises.iter().flat_map(|p| p.scenes_used.iter().cloned()).collect();
        scenes_used.extend(own_scene(g, &atom));
        Derivation {
            atom,
            step,
            premises,
            scenes_used,
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.premises.iter().map(|p| p.depth()).max().unwrap_or(0)
    }

    /// Indented tree, one atom per line, IRIs compacted against `g`.
    pub fn render(&self, g: &Graph) -> String {
        let mut out = String::new();
        self.render_into(g, 0, &mut out);
        out
    }

    fn render_into(&self, g: &Graph, depth: usize, out: &mut String) {
        let how = match &self.step {
            Step::Base => "fact".to_string(),
            Step::Rule(name) => format!("rule {name}"),
            Step::Builtin(name) => format!("builtin {name}"),
        };
        let _ = writeln!(
            out,
            "{:indent$}{} {} {}  [{how}]",
            "",
            g.compact(&self.atom.subject),
            g.compact(&self.atom.predicate),
            g.compact(&self.atom.object),
            indent = depth * 2
        );
        for p in &self.premises {
            p.render_into(g, depth + 1, out);
        }
    }

    /// Every node of the tree, depth first, root first.
    pub fn nodes(&self) -> Vec<&Derivation> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let node = out[i];
            out.extend(node.premises.iter().map(|p| p.as_ref()));
            i += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::parse_turtle;

    #[test]
    fn scenes_used_unions_premises() {
        let g = parse_turtle(
            "@prefix kgc: <http://kgc.knowledge-graph.jp/ontology/kgc.owl#> .\n\
             @prefix : <http://ex.org/> .\n\
             :s1 a kgc:Situation ; kgc:subject :A ; kgc:hasPredicate :p .\n\
             :s2 a kgc:Situation ; kgc:subject :B ; kgc:hasPredicate :p .",
        )
        .unwrap();
        let facts: Vec<Triple> = g
            .iter()
            .filter(|t| t.predicate.short_name() == "subject")
            .cloned()
            .collect();
        let premises: Vec<Arc<Derivation>> = facts.into_iter().map(|t| Arc::new(Derivation::base(&g, t))).collect();
        let i = |s: &str| Term::iri(format!("http://ex.org/{s}")).unwrap();
        let d = Derivation::derived(
            &g,
            Triple::new(i("A"), i("knows"), i("B")).unwrap(),
            Step::Rule("r".into()),
            premises,
        );
        assert_eq!(d.scenes_used, [i("s1"), i("s2")].into_iter().collect());
        assert_eq!(d.depth(), 2);
        assert_eq!(d.nodes().len(), 3);
        assert!(d.render(&g).contains("[rule r]"));
    }
}
