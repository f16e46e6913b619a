//! Krasnosel'skiĭ–Mann and proximal-point iterations.

use std::fmt;
use std::io::{self, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypoconvex::{prox, HypoconvexFn};
use crate::map::PointMap;
use crate::vector::Vector;

/// Iterates whose norm exceeds this are reported as diverged.
pub const DIVERGENCE_BOUND: f64 = 1e8;
pub const DEFAULT_MAX_ITER: usize = 10_000;
pub const DEFAULT_ITER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIter,
    Diverged,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Converged => "converged",
            Status::MaxIter => "max_iter",
            Status::Diverged => "diverged",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace {
    pub iterates: Vec<Vector>,
    /// `‖x_{k+1} − x_k‖`
    pub residuals: Vec<f64>,
    pub status: Status,
    pub limit: Option<Vector>,
}

impl IterationTrace {
    pub fn last(&self) -> &Vector {
        self.iterates.last().expect("a trace holds at least the start point")
    }

    pub fn iterations(&self) -> usize {
        self.residuals.len()
    }

    /// Header `iter,x_0,…,x_{n−1},residual`, one row per iterate (the first
    /// has an empty residual), then `# status=<s>`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let dim = self.iterates.first().map_or(0, Vector::dim);
        let mut header = vec!["iter".to_string()];
        header.extend((0..dim).map(|i| format!("x_{i}")));
        header.push("residual".into());
        writeln!(w, "{}", header.join(","))?;
        for (k, x) in self.iterates.iter().enumerate() {
            let mut row = vec![k.to_string()];
            row.extend(x.as_slice().iter().map(f64::to_string));
            row.push(k.checked_sub(1).map_or(String::new(), |j| self.residuals[j].to_string()));
            writeln!(w, "{}", row.join(","))?;
        }
        writeln!(w, "# status={}", self.status)
    }
}

fn escaped(x: &Vector) -> bool {
    !x.is_finite() || x.norm() > DIVERGENCE_BOUND
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("tolerance must be > 0, got {tol}")))
    }
}

/// Shared loop: stops at `residual ≤ tol`, at the cap, or on escape.
fn run(x0: Vector, max_iter: usize, tol: f64, mut step: impl FnMut(&Vector) -> Result<Vector>) -> Result<IterationTrace> {
    let mut iterates = vec![x0];
    let mut residuals = Vec::new();
    if escaped(&iterates[0]) {
        return Ok(IterationTrace {
            iterates,
            residuals,
            status: Status::Diverged,
            limit: None,
        });
    }
    for _ in 0..max_iter {
        let x = iterates.last().expect("nonempty");
        let next = step(x)?;
        let r = (&next - x).norm();
        iterates.push(next);
        residuals.push(r);
        let last = iterates.last().expect("nonempty");
        if escaped(last) {
            return Ok(IterationTrace {
                iterates,
                residuals,
                status: Status::Diverged,
                limit: None,
            });
        }
        if r <= tol {
            let limit = Some(last.clone());
            return Ok(IterationTrace {
                iterates,
                residuals,
                status: Status::Converged,
                limit,
            });
        }
    }
    Ok(IterationTrace {
        iterates,
        residuals,
        status: Status::MaxIter,
        limit: None,
    })
}

/// `x_{k+1} = (1−t)x_k + t·T(x_k)` for relaxation `t ∈ (0, 1]`.
pub fn km_iterate<M: PointMap + ?Sized>(
    t: &M,
    x0: Vector,
    relaxation: f64,
    max_iter: usize,
    tol: f64,
) -> Result<IterationTrace> {
    if !(relaxation > 0.0 && relaxation <= 1.0) {
        return Err(Error::Parameter(format!("relaxation must lie in (0, 1], got {relaxation}")));
    }
    check_tol(tol)?;
    if x0.dim() != t.dim() {
        return Err(Error::Dimension {
            expected: t.dim(),
            got: x0.dim(),
        });
    }
    run(x0, max_iter, tol, |x| {
        let tx = t.apply(x);
        Ok(if relaxation == 1.0 {
            tx
        } else {
            x.lin_comb(1.0 - relaxation, &tx, relaxation)
        })
    })
}

/// `x_{k+1} = Prox_{μf}(x_k)`. A fixed point is a zero of the subdifferential of `f`.
pub fn proximal_point(
    f: &dyn HypoconvexFn,
    mu: f64,
    x0: f64,
    max_iter: usize,
    tol: f64,
) -> Result<IterationTrace> {
    crate::hypoconvex::check_regime(f.lambda(), mu, false)?;
    check_tol(tol)?;
    run(Vector::from_vec_unchecked(vec![x0]), max_iter, tol, |x| {
        Ok(Vector::from_vec_unchecked(vec![prox(f, mu, x[0])?.point]))
    })
}

/// `‖x − T(x)‖`
pub fn fixed_point_residual<M: PointMap + ?Sized>(t: &M, x: &Vector) -> f64 {
    (x - &t.apply(x)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypoconvex::{ExpFamily, Quadratic};
    use crate::linear::{resolvent_linear, rotation_family};
    use crate::map::{Blend, ScaledIdentity};

    #[test]
    fn contraction_halves_residual() {
        let trace = km_iterate(&ScaledIdentity::new(1, 0.5), Vector::scalar(8.0), 1.0, 200, 1e-12).unwrap();
        assert_eq!(trace.status, Status::Converged);
        assert!(trace.last().norm() < 1e-11);
        for w in trace.residuals.windows(2) {
            assert_eq!(w[1], 0.5 * w[0]);
        }
        assert_eq!(trace.residuals.len(), trace.iterates.len() - 1);
    }

    #[test]
    fn negative_identity_needs_relaxation() {
        let neg = ScaledIdentity::new(1, -1.0);
        let osc = km_iterate(&neg, Vector::scalar(1.0), 1.0, 50, 1e-10).unwrap();
        assert_eq!(osc.status, Status::MaxIter);
        assert_eq!(osc.iterations(), 50);
        let half = km_iterate(&neg, Vector::scalar(1.0), 0.5, 50, 1e-10).unwrap();
        assert_eq!(half.status, Status::Converged);
        assert_eq!(half.limit.unwrap()[0], 0.0);
    }

    #[test]
    fn relaxation_equals_blended_map() {
        let j = resolvent_linear(&rotation_family(0.6, 4).unwrap().a).unwrap();
        let x0 = Vector::new(vec![1.0, -2.0, 0.5, 3.0]).unwrap();
        for t in [0.3, 0.5, 0.9] {
            let a = km_iterate(&j, x0.clone(), t, 300, 1e-13).unwrap();
            let b = km_iterate(&Blend::relax(&j, t), x0.clone(), 1.0, 300, 1e-13).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rotation_resolvent_fejer() {
        let j = resolvent_linear(&rotation_family(0.25, 2).unwrap().a).unwrap();
        let trace = km_iterate(&j, Vector::new(vec![3.0, -1.0]).unwrap(), 1.0, 10_000, 1e-12).unwrap();
        assert_eq!(trace.status, Status::Converged);
        for w in trace.iterates.windows(2) {
            assert!(w[1].norm() <= w[0].norm());
        }
        assert_eq!(fixed_point_residual(&j, &Vector::zeros(2)), 0.0);
    }

    #[test]
    fn fixed_point_residual_examples() {
        let x = Vector::new(vec![2.0, -7.0]).unwrap();
        assert_eq!(fixed_point_residual(&ScaledIdentity::identity(2), &x), 0.0);
        assert_eq!(fixed_point_residual(&ScaledIdentity::new(1, 0.5), &Vector::scalar(2.0)), 1.0);
    }

    /// Newton on `eʸ − 5y` from the right of the larger root.
    fn larger_root() -> f64 {
        let mut y = 3.0f64;
        for _ in 0..100 {
            y -= (y.exp() - 5.0 * y) / (y.exp() - 5.0);
        }
        y
    }

    #[test]
    fn proximal_point_exp_family() {
        let f = ExpFamily::new(0.2).unwrap();
        let trace = proximal_point(&f, 0.1, 3.0, 200, 1e-8).unwrap();
        assert_eq!(trace.status, Status::Converged);
        let y = trace.limit.unwrap()[0];
        assert!((y - larger_root()).abs() < 1e-6);
        assert!((y - 2.542_641_3).abs() < 1e-6);
        assert!(f.derivative(y).unwrap().abs() <= 1e-8 / 0.1 + 1e-12);

        let escape = proximal_point(&f, 0.1, -2.0, 200, 1e-8).unwrap();
        assert_eq!(escape.status, Status::Diverged);
        assert!(escape.last().norm() > DIVERGENCE_BOUND);
    }

    #[test]
    fn proximal_point_convex_quadratic() {
        let trace = proximal_point(&Quadratic::new(1.0).unwrap(), 1.0, 4.0, 200, 1e-12).unwrap();
        assert_eq!(trace.status, Status::Converged);
        assert!(trace.limit.unwrap()[0].abs() < 1e-11);
    }

    #[test]
    fn csv_layout() {
        let trace = km_iterate(&ScaledIdentity::new(2, 0.5), Vector::new(vec![1.0, 2.0]).unwrap(), 1.0, 2, 1e-12).unwrap();
        let mut out = Vec::new();
        trace.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "iter,x_0,x_1,residual");
        assert_eq!(lines[1], "0,1,2,");
        assert_eq!(lines[2], "1,0.5,1,1.118033988749895");
        assert_eq!(lines.last().unwrap(), &"# status=max_iter");
    }

    #[test]
    fn parameter_errors() {
        let id = ScaledIdentity::identity(1);
        assert!(km_iterate(&id, Vector::scalar(1.0), 0.0, 10, 1e-9).is_err());
        assert!(km_iterate(&id, Vector::scalar(1.0), 1.0, 10, 0.0).is_err());
        assert!(km_iterate(&id, Vector::zeros(2), 1.0, 10, 1e-9).is_err());
        let f = ExpFamily::new(0.2).unwrap();
        assert!(matches!(proximal_point(&f, 0.3, 1.0, 10, 1e-9), Err(Error::Regime(_))));
    }
}
