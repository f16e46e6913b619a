//! Dense linear operators on Rⁿ: exact classification via symmetric
//! eigenvalues, exact resolvents, and constructive example families.

mod classify;
mod eigen;
mod families;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::PointMap;
use crate::vector::Vector;

pub use classify::{
    classification_report, is_rho_comonotone_linear, is_rho_monotone_linear,
    optimal_comonotone_modulus_linear, optimal_conic_alpha_linear,
    optimal_monotone_modulus_linear, resolvent_linear, spectral_norm, ClassificationReport,
    LinearVerdict, MODULUS_CAP,
};
pub use eigen::{symmetric_eigen, EigenResult};
pub use families::{
    block_rotation, counterexample_family, projection_family, rotation_family,
    scaled_rotation, CounterexampleFamily, ProjectionFamily, ProjectionOperator, RotationFamily,
};

/// A dense n×n real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOp {
    n: usize,
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl Serialize for LinearOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixFile {
            n: self.n,
            rows: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixFile::deserialize(d)?;
        if raw.rows.len() != raw.n {
            return Err(serde::de::Error::custom(format!(
                "expected {} rows, got {}",
                raw.n,
                raw.rows.len()
            )));
        }
        LinearOp::from_rows(&raw.rows).map_err(serde::de::Error::custom)
    }
}

impl LinearOp {
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("matrix dimension must be >= 1".into()));
        }
        if data.len() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                got: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("matrix entries must be finite".into()));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parameter(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn scaled_identity(n: usize, c: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    /// `Σ_k v_k v_kᵀ`
    pub(crate) fn sum_outer(n: usize, vs: &[Vec<f64>]) -> Self {
        let mut m = Self::zeros(n);
        for v in vs {
            for i in 0..n {
                for j in 0..n {
                    m.data[i * n + j] += v[i] * v[j];
                }
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.data[j * n + i] = self.data[i * n + j];
            }
        }
        t
    }

    pub fn matmul(&self, other: &LinearOp) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// `a·self + b·other`
    pub fn lin_comb(&self, a: f64, other: &LinearOp, b: f64) -> Self {
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    /// `(A + Aᵀ)/2`
    pub fn symmetric_part(&self) -> Self {
        self.lin_comb(0.5, &self.transpose(), 0.5)
    }

    /// `AᵀA`
    pub fn gram(&self) -> Self {
        self.transpose().matmul(self)
    }

    pub fn apply_slice(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.n)
            .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

impl PointMap for LinearOp {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &Vector) -> Vector {
        Vector::from_vec_unchecked(self.apply_slice(x.as_slice()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_algebra() {
        let a = LinearOp::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(a.transpose().rows(), vec![vec![1.0, 3.0], vec![2.0, 4.0]]);
        assert_eq!(a.matmul(&LinearOp::identity(2)), a);
        assert_eq!(a.symmetric_part().rows(), vec![vec![1.0, 2.5], vec![2.5, 4.0]]);
        assert_eq!(a.gram().rows(), vec![vec![10.0, 14.0], vec![14.0, 20.0]]);
        assert_eq!(a.apply_slice(&[1.0, -1.0]), vec![-1.0, -1.0]);
        assert_eq!(a.norm_inf(), 7.0);
    }

    #[test]
    fn matrix_file_format() {
        let a = LinearOp::from_json(r#"{"n": 2, "rows": [[0.2, 0.4], [-0.4, 0.2]]}"#).unwrap();
        assert_eq!(a.get(1, 0), -0.4);
        assert_eq!(LinearOp::from_json(&a.to_json()).unwrap(), a);
        assert!(LinearOp::from_json(r#"{"n": 2, "rows": [[1.0, 0.0]]}"#).is_err());
        assert!(LinearOp::from_json(r#"{"n": 2, "rows": [[1.0], [0.0, 1.0]]}"#).is_err());
    }
}
