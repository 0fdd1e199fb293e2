use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linalg::{leading_eigenvectors, Matrix};
use super::tensor3::Tensor3;
use super::TensorError;

/// Core `ranks[0] × ranks[1] × ranks[2]`, row-major like [`Tensor3`], and
/// factor matrices `dims[n] × ranks[n]` with orthonormal columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuckerFactors {
    pub ranks: [usize; 3],
    pub core: Vec<f64>,
    pub factors: [Matrix; 3],
    /// `‖t − reconstruct‖_F` after initialization and after each accepted
    /// iteration; the last entry is the final fit.
    pub fits: Vec<f64>,
}

impl TuckerFactors {
    pub fn fit(&self) -> f64 {
        *self.fits.last().expect("at least the initial fit")
    }

    pub fn core_at(&self, a: usize, b: usize, c: usize) -> f64 {
        self.core[(a * self.ranks[1] + b) * self.ranks[2] + c]
    }
}

/// Raw dense array for intermediate mode products.
#[derive(Clone)]
struct Dense {
    dims: [usize; 3],
    data: Vec<f64>,
}

impl Dense {
    fn at(&self, idx: [usize; 3]) -> f64 {
        self.data[(idx[0] * self.dims[1] + idx[1]) * self.dims[2] + idx[2]]
    }

    /// `self ×_mode uᵀ`: axis `mode` shrinks from `u.rows` to `u.cols`.
    fn project(&self, mode: usize, u: &Matrix) -> Dense {
        let mut dims = self.dims;
        dims[mode] = u.cols;
        let mut out = vec![0.0; dims[0] * dims[1] * dims[2]];
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    let x = self.at([i, j, k]);
                    if x == 0.0 {
                        continue;
                    }
                    let src = [i, j, k];
                    for a in 0..u.cols {
                        let mut dst = src;
                        dst[mode] = a;
                        out[(dst[0] * dims[1] + dst[1]) * dims[2] + dst[2]] += x * u[(src[mode], a)];
                    }
                }
            }
        }
        Dense { dims, data: out }
    }

    /// Gram matrix of the mode-`mode` unfolding.
    fn gram(&self, mode: usize) -> Matrix {
        let n = self.dims[mode];
        let others: Vec<usize> = (0..3).filter(|&m| m != mode).collect();
        let (p, q) = (self.dims[others[0]], self.dims[others[1]]);
        let mut g = Matrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let mut s = 0.0;
                for x in 0..p {
                    for y in 0..q {
                        let mut ia = [0; 3];
                        ia[mode] = a;
                        ia[others[0]] = x;
                        ia[others[1]] = y;
                        let mut ib = ia;
                        ib[mode] = b;
                        s += self.at(ia) * self.at(ib);
                    }
                }
                g[(a, b)] = s;
                g[(b, a)] = s;
            }
        }
        g
    }
}

fn dense(t: &Tensor3) -> Dense {
    Dense {
        dims: t.dims,
        data: t.data.clone(),
    }
}

fn core_of(t: &Dense, factors: &[Matrix; 3]) -> Vec<f64> {
    t.project(0, &factors[0])
        .project(1, &factors[1])
        .project(2, &factors[2])
        .data
}

fn assemble(t: &Tensor3, ranks: [usize; 3], factors: [Matrix; 3], fits: Vec<f64>) -> TuckerFactors {
    let core = core_of(&dense(t), &factors);
    TuckerFactors {
        ranks,
        core,
        factors,
        fits,
    }
}

/// Higher-order orthogonal iteration from an HOSVD start. An iteration
/// whose fit would increase is discarded and the loop stops; otherwise it
/// stops after `max_iters` or once the relative fit change drops below
/// 1e-10.
pub fn hooi(t: &Tensor3, ranks: [usize; 3], max_iters: usize, seed: u64) -> Result<TuckerFactors, TensorError> {
    for (mode, (&rank, &dim)) in ranks.iter().zip(&t.dims).enumerate() {
        if rank < 1 || rank > dim {
            return Err(TensorError::RankOutOfRange { mode, rank, dim });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = dense(t);
    let factors: [Matrix; 3] = std::array::from_fn(|m| leading_eigenvectors(&x.gram(m), ranks[m], &mut rng));
    let mut current = assemble(t, ranks, factors, Vec::new());
    let mut fit = t.distance(&reconstruct(&current));
    current.fits.push(fit);

    for _ in 0..max_iters {
        let mut next = current.factors.clone();
        for mode in 0..3 {
            let mut y = x.clone();
            for other in (0..3).filter(|&m| m != mode) {
                y = y.project(other, &next[other]);
            }
            next[mode] = leading_eigenvectors(&y.gram(mode), ranks[mode], &mut rng);
        }
        let candidate = assemble(t, ranks, next, Vec::new());
        let new_fit = t.distance(&reconstruct(&candidate));
        if new_fit > fit {
            break;
        }
        let change = if fit > 0.0 { (fit - new_fit) / fit } else { 0.0 };
        let fits = std::mem::take(&mut current.fits);
        current = candidate;
        current.fits = fits;
        current.fits.push(new_fit);
        fit = new_fit;
        if change < 1e-10 {
            break;
        }
    }
    Ok(current)
}

/// `core ×1 A ×2 B ×3 C` by direct summation; axes are labelled by index.
pub fn reconstruct(f: &TuckerFactors) -> Tensor3 {
    let [a, b, c] = &f.factors;
    let [r1, r2, r3] = f.ranks;
    Tensor3::from_fn([a.rows, b.rows, c.rows], |i, j, k| {
        let mut s = 0.0;
        for p in 0..r1 {
            for q in 0..r2 {
                for r in 0..r3 {
                    s += f.core_at(p, q, r) * a[(i, p)] * b[(j, q)] * c[(k, r)];
                }
            }
        }
        s
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionCandidate {
    pub subject: String,
    pub predicate: String,
    pub object: String,
    pub score: f64,
}

/// Zero cells of `t` by reconstructed score, highest first; ties by label.
pub fn complete(t: &Tensor3, f: &TuckerFactors, top_k: usize) -> Vec<CompletionCandidate> {
    assert!(top_k >= 1, "top_k must be at least 1");
    let rec = reconstruct(f);
    let mut out: Vec<CompletionCandidate> = t
        .cells()
        .filter(|&(i, j, k)| t.get(i, j, k) == 0.0)
        .map(|(i, j, k)| CompletionCandidate {
            subject: t.labels[0][i].clone(),
            predicate: t.labels[1][j].clone(),
            object: t.labels[2][k].clone(),
            score: rec.get(i, j, k),
        })
        .collect();
    out.sort_by(|x, y| {
        y.score
            .total_cmp(&x.score)
            .then_with(|| (&x.subject, &x.predicate, &x.object).cmp(&(&y.subject, &y.predicate, &y.object)))
    });
    out.truncate(top_k);
    out
}
