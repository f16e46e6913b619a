//! Closed boxes in Rⁿ (products of possibly unbounded intervals).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modulus::serialize_extended;
use crate::vector::Vector;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxSet {
    #[serde(serialize_with = "serialize_bounds")]
    lo: Vec<f64>,
    #[serde(serialize_with = "serialize_bounds")]
    hi: Vec<f64>,
}

fn serialize_bounds<S: serde::Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct Ext(f64);
    impl Serialize for Ext {
        fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            serialize_extended(&self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for &b in v {
        seq.serialize_element(&Ext(b))?;
    }
    seq.end()
}

impl BoxSet {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::Parameter(format!(
                "box bounds must be non-empty and of equal length ({} vs {})",
                lo.len(),
                hi.len()
            )));
        }
        for (i, (l, h)) in lo.iter().zip(&hi).enumerate() {
            if l.is_nan() || h.is_nan() || l > h || *l == f64::INFINITY || *h == f64::NEG_INFINITY {
                return Err(Error::Parameter(format!("empty or invalid interval at coordinate {i}: [{l}, {h}]")));
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    /// The whole space Rⁿ.
    pub fn whole(dim: usize) -> Self {
        Self {
            lo: vec![f64::NEG_INFINITY; dim],
            hi: vec![f64::INFINITY; dim],
        }
    }

    /// The nonnegative orthant, a closed convex cone.
    pub fn nonnegative(dim: usize) -> Self {
        Self {
            lo: vec![0.0; dim],
            hi: vec![f64::INFINITY; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn is_whole(&self) -> bool {
        self.lo.iter().all(|&l| l == f64::NEG_INFINITY) && self.hi.iter().all(|&h| h == f64::INFINITY)
    }

    /// A box is a cone iff every bound is 0 or infinite.
    pub fn is_cone(&self) -> bool {
        self.lo.iter().chain(&self.hi).all(|&b| b == 0.0 || b.is_infinite())
    }

    pub fn project_slice(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&v, (&l, &h))| v.clamp(l, h))
            .collect()
    }

    pub fn project(&self, x: &Vector) -> Vector {
        Vector::from_vec_unchecked(self.project_slice(x.as_slice()))
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(&v, (&l, &h))| v >= l - tol && v <= h + tol)
    }

    /// `{c·y : y ∈ self}`
    pub fn scaled(&self, c: f64) -> BoxSet {
        let (mut lo, mut hi): (Vec<f64>, Vec<f64>) = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| {
                let (a, b) = (scale_bound(c, l), scale_bound(c, h));
                (a.min(b), a.max(b))
            })
            .unzip();
        // 0·∞ collapses to the point 0.
        for (l, h) in lo.iter_mut().zip(hi.iter_mut()) {
            if l.is_nan() || h.is_nan() {
                *l = 0.0;
                *h = 0.0;
            }
        }
        BoxSet { lo, hi }
    }
}

fn scale_bound(c: f64, b: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_and_membership() {
        let c = BoxSet::interval(0.0, 1.0).unwrap();
        assert_eq!(c.project_slice(&[-2.0]), vec![0.0]);
        assert_eq!(c.project_slice(&[0.4]), vec![0.4]);
        assert_eq!(c.project_slice(&[7.0]), vec![1.0]);
        assert!(c.contains(&[1.0 + 1e-12], 1e-9));
        assert!(!c.contains(&[1.1], 1e-9));
        assert!(!c.is_whole() && !c.is_cone());
        assert!(BoxSet::nonnegative(3).is_cone());
        assert!(BoxSet::whole(2).is_whole());
    }

    #[test]
    fn scaling_flips_orientation() {
        let c = BoxSet::interval(0.0, 1.0).unwrap().scaled(-1.0);
        assert_eq!((c.lo()[0], c.hi()[0]), (-1.0, 0.0));
        let z = BoxSet::whole(1).scaled(0.0);
        assert_eq!((z.lo()[0], z.hi()[0]), (0.0, 0.0));
    }

    #[test]
    fn rejects_empty() {
        assert!(BoxSet::interval(1.0, 0.0).is_err());
        assert!(BoxSet::new(vec![0.0], vec![]).is_err());
    }
}
