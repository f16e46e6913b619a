//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use super::LinearOp;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 30;
const OFF_DIAGONAL_THRESHOLD: f64 = 1e-13;

/// Eigen-decomposition `S = V Λ Vᵀ` of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub vectors: LinearOp,
    /// `max_k ‖S v_k − λ_k v_k‖`.
    pub accuracy: f64,
}

impl EigenResult {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("n >= 1")
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        (0..self.vectors.n()).map(|i| self.vectors.get(i, k)).collect()
    }
}

pub fn symmetric_eigen(s: &LinearOp) -> Result<EigenResult> {
    let n = s.n();
    let norm = s.norm_fro();
    if !s.is_symmetric(1e-12 * norm.max(1.0)) {
        return Err(Error::Parameter("eigensolver requires a symmetric matrix".into()));
    }
    let mut a = s.symmetric_part();
    let mut v = LinearOp::identity(n);
    let threshold = OFF_DIAGONAL_THRESHOLD * norm;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vectors = LinearOp::zeros(n);
    for (k, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, k, v.get(i, src));
        }
    }

    let mut accuracy: f64 = 0.0;
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        let col: Vec<f64> = (0..n).map(|i| vectors.get(i, k)).collect();
        let sv = s.apply_slice(&col);
        let r: f64 = sv
            .iter()
            .zip(&col)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        accuracy = accuracy.max(r);
    }

    Ok(EigenResult {
        eigenvalues,
        vectors,
        accuracy,
    })
}

fn off_diagonal_norm(a: &LinearOp) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).powi(2);
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with a Jacobi rotation, accumulating it into `v`.
fn rotate(a: &mut LinearOp, v: &mut LinearOp, p: usize, q: usize) {
    let apq = a.get(p, q);
    if apq == 0.0 {
        return;
    }
    let n = a.n();
    let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, c * akp - s * akq);
        a.set(k, q, s * akp + c * akq);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, c * apk - s * aqk);
        a.set(q, k, s * apk + c * aqk);
    }
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, c * vkp - s * vkq);
        v.set(k, q, s * vkp + c * vkq);
    }
}
