use proptest::prelude::*;
use sleuth_core::tensor::Tensor3;

pub fn outer(a: &[f64], b: &[f64], c: &[f64]) -> Tensor3 {
    Tensor3::from_fn([a.len(), b.len(), c.len()], |i, j, k| a[i] * b[j] * c[k])
}

/// Frobenius norm of `x − y` by summing over every index triple.
pub fn frobenius_diff(x: &Tensor3, y: &Tensor3) -> f64 {
    let mut s = 0.0;
    for i in 0..x.dims[0] {
        for j in 0..x.dims[1] {
            for k in 0..x.dims[2] {
                let d = x.get(i, j, k) - y.get(i, j, k);
                s += d * d;
            }
        }
    }
    s.sqrt()
}

/// Points of the unit sphere on a `steps × 2·steps` grid of polar and
/// azimuthal angles.
pub fn sphere_grid(steps: usize) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for p in 0..=steps {
        let theta = std::f64::consts::PI * p as f64 / steps as f64;
        for q in 0..2 * steps {
            let phi = std::f64::consts::PI * q as f64 / steps as f64;
            out.push([theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]);
        }
    }
    out
}

/// Best rank-1 approximation `λ a cᵀ` of a 3×3 matrix, searched over unit
/// vectors `a`, `c` on a grid; `λ = aᵀ M c` is optimal for fixed `a`, `c`.
/// Returns the approximation.
pub fn rank1_by_grid(m: [[f64; 3]; 3], steps: usize) -> [[f64; 3]; 3] {
    let grid = sphere_grid(steps);
    let mut best = (0.0f64, [0.0; 3], [0.0; 3]);
    for a in &grid {
        let at_m: Vec<f64> = (0..3).map(|k| (0..3).map(|i| a[i] * m[i][k]).sum()).collect();
        for c in &grid {
            let lambda: f64 = (0..3).map(|k| at_m[k] * c[k]).sum();
            if lambda.abs() > best.0.abs() {
                best = (lambda, *a, *c);
            }
        }
    }
    let (lambda, a, c) = best;
    std::array::from_fn(|i| std::array::from_fn(|k| lambda * a[i] * c[k]))
}

pub fn arb_tensor(max_dim: usize) -> impl Strategy<Value = Tensor3> {
    (1..=max_dim, 1..=max_dim, 1..=max_dim).prop_flat_map(|(a, b, c)| {
        proptest::collection::vec(-1.0f64..1.0, a * b * c).prop_map(move |data| {
            let mut t = Tensor3::from_fn([a, b, c], |_, _, _| 0.0);
            t.data = data;
            t
        })
    })
}
