use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// `selfᵀ self`.
    pub fn gram_t(&self) -> Matrix {
        let mut g = Matrix::zeros(self.cols, self.cols);
        for a in 0..self.cols {
            for b in a..self.cols {
                let s: f64 = (0..self.rows).map(|i| self[(i, a)] * self[(i, b)]).sum();
                g[(a, b)] = s;
                g[(b, a)] = s;
            }
        }
        g
    }

    /// `max |selfᵀ self − I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.gram_t();
        let mut worst: f64 = 0.0;
        for a in 0..g.rows {
            for b in 0..g.cols {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g[(a, b)] - target).abs());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenvalues descend; column `k` of the matrix is the `k`-th eigenvector.
pub fn symmetric_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.rows;
    let mut a = a.clone();
    let mut v = Matrix::identity(n);
    let scale: f64 = a.data.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, k)] = v[(r, i)];
        }
    }
    (values, vectors)
}

/// Modified Gram-Schmidt on the columns, in place.
fn orthonormalize(m: &mut Matrix) {
    for j in 0..m.cols {
        for k in 0..j {
            let dot: f64 = (0..m.rows).map(|i| m[(i, j)] * m[(i, k)]).sum();
            for i in 0..m.rows {
                m[(i, j)] -= dot * m[(i, k)];
            }
        }
        let norm: f64 = (0..m.rows).map(|i| m[(i, j)] * m[(i, j)]).sum::<f64>().sqrt();
        for i in 0..m.rows {
            m[(i, j)] /= norm;
        }
    }
}

/// The leading `r` eigenvectors of symmetric `gram`. Eigenvectors of a
/// repeated eigenvalue are rotated within their span by a random
/// orthogonal matrix from `rng`, then every column is signed so that its
/// largest-magnitude entry is non-negative.
pub fn leading_eigenvectors(gram: &Matrix, r: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let (values, vectors) = symmetric_eigen(gram);
    let n = gram.rows;
    let tol = 1e-9 * values.first().copied().unwrap_or(0.0).abs().max(1.0);
    let mut basis = vectors;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[start] - values[end]).abs() <= tol {
            end += 1;
        }
        if end - start > 1 && start < r {
            let k = end - start;
            let mut q = Matrix::zeros(k, k);
            for x in q.data.iter_mut() {
                *x = rng.gen_range(-1.0..1.0);
            }
            orthonormalize(&mut q);
            let mut rotated = Matrix::zeros(n, k);
            for i in 0..n {
                for b in 0..k {
                    rotated[(i, b)] = (0..k).map(|a| basis[(i, start + a)] * q[(a, b)]).sum();
                }
            }
            for i in 0..n {
                for b in 0..k {
                    basis[(i, start + b)] = rotated[(i, b)];
                }
            }
        }
        start = end;
    }
    let mut out = Matrix::zeros(n, r);
    for j in 0..r {
        let col = basis.column(j);
        let pivot = col
            .iter()
            .copied()
            .fold(0.0f64, |best, x| if x.abs() > best.abs() { x } else { best });
        let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            out[(i, j)] = sign * col[i];
        }
    }
    out
}
