use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::kg::{expand_or, scene_ids, scene_view, Graph, SceneError};

use super::TensorError;

/// A dense third-order tensor with labelled axes (subject, predicate,
/// object). Entry `(i, j, k)` lives at `(i * n2 + j) * n3 + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor3 {
    pub dims: [usize; 3],
    pub labels: [Vec<String>; 3],
    pub data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(labels: [Vec<String>; 3]) -> Tensor3 {
        let dims = [labels[0].len(), labels[1].len(), labels[2].len()];
        Tensor3 {
            dims,
            labels,
            data: vec![0.0; dims[0] * dims[1] * dims[2]],
        }
    }

    /// Unlabelled tensor; axis labels are the indices.
    pub fn from_fn(dims: [usize; 3], f: impl Fn(usize, usize, usize) -> f64) -> Tensor3 {
        let labels = dims.map(|n| (0..n).map(|i| i.to_string()).collect());
        let mut t = Tensor3::zeros(labels);
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        t
    }

    /// 0/1 tensor over the given triples, axes in first-seen order.
    pub fn from_triples<S: AsRef<str>>(triples: &[(S, S, S)]) -> Tensor3 {
        let mut axes: [Axis; 3] = Default::default();
        let cells: Vec<[usize; 3]> = triples
            .iter()
            .map(|(s, p, o)| {
                [
                    axes[0].index(s.as_ref()),
                    axes[1].index(p.as_ref()),
                    axes[2].index(o.as_ref()),
                ]
            })
            .collect();
        let mut t = Tensor3::zeros(axes.map(|a| a.labels));
        for [i, j, k] in cells {
            t.set(i, j, k, 1.0);
        }
        t
    }

    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        assert!(
            i < self.dims[0] && j < self.dims[1] && k < self.dims[2],
            "index out of range"
        );
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.offset(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let o = self.offset(i, j, k);
        self.data[o] = v;
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0.0).count()
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self − other`.
    pub fn distance(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dims, other.dims);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn index_of(&self, axis: usize, label: &str) -> Option<usize> {
        self.labels[axis].iter().position(|l| l == label)
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let [n1, n2, n3] = self.dims;
        (0..n1).flat_map(move |i| (0..n2).flat_map(move |j| (0..n3).map(move |k| (i, j, k))))
    }
}

#[derive(Default)]
struct Axis {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Axis {
    fn index(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), self.labels.len() - 1);
        self.labels.len() - 1
    }
}

/// Subject-verb-object triples of every scene in scene order: each subject
/// × the verb (predicate, else property) × each whom and what value. ORobj
/// values contribute every alternative. Terms are labelled in compact form.
pub fn extract_svo(g: &Graph) -> Result<Vec<(String, String, String)>, SceneError> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for id in scene_ids(g) {
        let view = scene_view(g, &id)?;
        for scene in expand_or(g, &view)? {
            let Some(verb) = scene.verb() else { continue };
            for s in &scene.subjects {
                for o in scene.whom.iter().chain(&scene.what) {
                    let t = (g.compact(s), g.compact(verb), g.compact(o));
                    if seen.insert(t.clone()) {
                        out.push(t);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The 0/1 SVO tensor of `g`.
pub fn build_tensor(g: &Graph) -> Result<Tensor3, TensorError> {
    let triples = extract_svo(g)?;
    if triples.is_empty() {
        return Err(TensorError::EmptyExtraction);
    }
    Ok(Tensor3::from_triples(&triples))
}
