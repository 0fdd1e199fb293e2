use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::kg::Term;
use crate::rules::Derivation;

use super::IbisError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeKind {
    Issue,
    Idea,
    ArgumentPro,
    ArgumentCon,
}

/// A structured atom such as `isKilledBy(v, x)` or `how(v, x)`, with the
/// proof behind it when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Payload {
    pub predicate: String,
    pub args: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<Arc<Derivation>>,
}

impl Payload {
    pub fn atom(predicate: &str, args: Vec<Term>) -> Payload {
        Payload {
            predicate: predicate.to_string(),
            args,
            derivation: None,
        }
    }

    pub fn with_derivation(mut self, d: Arc<Derivation>) -> Payload {
        self.derivation = Some(d);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IbisNode {
    /// `n<k>` for the `k`-th node created.
    pub id: String,
    pub kind: NodeKind,
    pub text: String,
    pub parent: Option<String>,
    pub payload: Option<Payload>,
}

/// A forest rooted at Issues. Ideas answer Issues, arguments back or
/// attack Ideas, and follow-up Issues may hang under Ideas.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IbisGraph {
    pub nodes: Vec<IbisNode>,
}

fn parent_allowed(child: NodeKind, parent: Option<NodeKind>) -> bool {
    matches!(
        (child, parent),
        (NodeKind::Issue, None | Some(NodeKind::Idea))
            | (NodeKind::Idea, Some(NodeKind::Issue))
            | (NodeKind::ArgumentPro | NodeKind::ArgumentCon, Some(NodeKind::Idea))
    )
}

fn index_of(id: &str) -> Option<usize> {
    id.strip_prefix('n')?.parse().ok()
}

impl IbisGraph {
    pub fn new() -> IbisGraph {
        IbisGraph::default()
    }

    pub fn get(&self, id: &str) -> Option<&IbisNode> {
        index_of(id).and_then(|i| self.nodes.get(i)).filter(|n| n.id == id)
    }

    pub fn add(
        &mut self,
        kind: NodeKind,
        text: impl Into<String>,
        parent: Option<&str>,
        payload: Option<Payload>,
    ) -> Result<String, IbisError> {
        let parent_kind = match parent {
            Some(p) => Some(self.get(p).ok_or_else(|| IbisError::UnknownNode(p.to_string()))?.kind),
            None => None,
        };
        if !parent_allowed(kind, parent_kind) {
            return Err(IbisError::BadAttachment {
                kind,
                parent: parent_kind,
            });
        }
        let id = format!("n{}", self.nodes.len());
        self.nodes.push(IbisNode {
            id: id.clone(),
            kind,
            text: text.into(),
            parent: parent.map(str::to_string),
            payload,
        });
        Ok(id)
    }

    pub fn children<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a IbisNode> + 'a {
        self.nodes.iter().filter(move |n| n.parent.as_deref() == Some(id))
    }

    pub fn roots(&self) -> impl Iterator<Item = &IbisNode> + '_ {
        self.nodes.iter().filter(|n| n.parent.is_none())
    }

    /// Every node's parent exists, precedes it and has an allowed kind.
    pub fn check(&self) -> Result<(), IbisError> {
        for (i, n) in self.nodes.iter().enumerate() {
            if n.id != format!("n{i}") {
                return Err(IbisError::UnknownNode(n.id.clone()));
            }
            let parent = match &n.parent {
                Some(p) => {
                    let pi = index_of(p)
                        .filter(|&pi| pi < i)
                        .ok_or_else(|| IbisError::UnknownNode(p.clone()))?;
                    Some(self.nodes[pi].kind)
                }
                None => None,
            };
            if !parent_allowed(n.kind, parent) {
                return Err(IbisError::BadAttachment { kind: n.kind, parent });
            }
        }
        Ok(())
    }

    fn subtree_value(&self, node: &IbisNode) -> Value {
        let children: Vec<Value> = self.children(&node.id).map(|c| self.subtree_value(c)).collect();
        json!({
            "id": node.id,
            "kind": node.kind,
            "text": node.text,
            "payload": node.payload,
            "children": children,
        })
    }

    /// The nested document for the subtree at `id`.
    pub fn subtree(&self, id: &str) -> Option<Value> {
        self.get(id).map(|n| self.subtree_value(n))
    }

    /// Nested document `{"nodes": [roots...]}`; each node carries `id`,
    /// `kind`, `text`, `payload` and `children`. Keys are sorted.
    pub fn export(&self) -> Value {
        json!({ "nodes": self.roots().map(|r| self.subtree_value(r)).collect::<Vec<_>>() })
    }

    pub fn import(doc: &Value) -> Result<IbisGraph, IbisError> {
        fn walk(v: &Value, parent: Option<&str>, out: &mut BTreeMap<usize, IbisNode>) -> Result<(), IbisError> {
            let bad = |m: &str| IbisError::Malformed(m.to_string());
            let id = v
                .get("id")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("node without id"))?;
            let index = index_of(id).ok_or_else(|| bad("node id is not n<k>"))?;
            let kind: NodeKind = serde_json::from_value(v.get("kind").cloned().unwrap_or(Value::Null))
                .map_err(|e| bad(&e.to_string()))?;
            let text = v
                .get("text")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("node without text"))?;
            let payload: Option<Payload> = serde_json::from_value(v.get("payload").cloned().unwrap_or(Value::Null))
                .map_err(|e| bad(&e.to_string()))?;
            let node = IbisNode {
                id: id.to_string(),
                kind,
                text: text.to_string(),
                parent: parent.map(str::to_string),
                payload,
            };
            if out.insert(index, node).is_some() {
                return Err(bad("duplicate node id"));
            }
            for c in v.get("children").and_then(Value::as_array).into_iter().flatten() {
                walk(c, Some(id), out)?;
            }
            Ok(())
        }
        let mut nodes = BTreeMap::new();
        let roots = doc
            .get("nodes")
            .and_then(Value::as_array)
            .ok_or_else(|| IbisError::Malformed("missing node list".into()))?;
        for r in roots {
            walk(r, None, &mut nodes)?;
        }
        let g = IbisGraph {
            nodes: nodes.into_values().collect(),
        };
        g.check()?;
        Ok(g)
    }

    /// Graphviz digraph, edges from parent to child.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph ibis {\n  rankdir=LR;\n");
        for n in &self.nodes {
            let shape = match n.kind {
                NodeKind::Issue => "diamond",
                NodeKind::Idea => "box",
                NodeKind::ArgumentPro | NodeKind::ArgumentCon => "ellipse",
            };
            let label = n.text.replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(out, "  {} [shape={shape}, label=\"{label}\"];", n.id);
        }
        for n in &self.nodes {
            if let Some(p) = &n.parent {
                let style = match n.kind {
                    NodeKind::ArgumentPro => " [label=\"+\"]",
                    NodeKind::ArgumentCon => " [label=\"-\"]",
                    _ => "",
                };
                let _ = writeln!(out, "  {p} -> {}{style};", n.id);
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attachment_rules() {
        let mut g = IbisGraph::new();
        let issue = g.add(NodeKind::Issue, "who", None, None).unwrap();
        assert!(g.add(NodeKind::Idea, "orphan", None, None).is_err());
        assert!(g.add(NodeKind::ArgumentCon, "con", Some(&issue), None).is_err());
        let idea = g.add(NodeKind::Idea, "x", Some(&issue), None).unwrap();
        g.add(NodeKind::ArgumentPro, "pro", Some(&idea), None).unwrap();
        g.add(NodeKind::Issue, "how", Some(&idea), None).unwrap();
        assert!(g.check().is_ok());
    }

    #[test]
    fn export_shape() {
        let mut g = IbisGraph::new();
        assert_eq!(g.export(), json!({"nodes": []}));
        let i = g.add(NodeKind::Issue, "who", None, None).unwrap();
        g.add(NodeKind::Idea, "a", Some(&i), None).unwrap();
        g.add(NodeKind::Idea, "b", Some(&i), None).unwrap();
        let doc = g.export();
        assert_eq!(doc["nodes"][0]["children"].as_array().unwrap().len(), 2);
        assert_eq!(g.nodes.iter().filter(|n| n.parent.is_some()).count(), 2);
        assert_eq!(IbisGraph::import(&doc).unwrap(), g);
        let dot = g.to_dot();
        assert!(dot.contains("n0 -> n1;") && dot.contains("n0 -> n2;"));
    }
}
