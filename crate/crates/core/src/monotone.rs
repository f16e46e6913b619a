//! ρ-monotonicity and ρ-comonotonicity of sampled graphs.
//!
//! A graph is ρ-monotone when `⟨x−y, u−v⟩ ≥ ρ‖x−y‖²` for all pairs of its
//! points, and ρ-comonotone when `⟨x−y, u−v⟩ ≥ ρ‖u−v‖²`. Certification is
//! exact over the supplied points only.

use crate::cert::{margin, CertReport, MarginTracker, Property, Witness, RELATIVE_FLOOR};
use crate::error::{Error, Result};
use crate::graph::{GraphPoint, OperatorGraph};
use crate::modulus::Modulus;
use crate::vector::dot;

/// First coordinates closer than this (max-norm) are treated as equal.
pub const COINCIDENT_TOL: f64 = 1e-12;
/// Second coordinates differing by more than this at a coincident first coordinate flag multivaluedness.
pub const MULTIVALUED_TOL: f64 = 1e-9;

struct PairDiff {
    dx_dx: f64,
    dx_du: f64,
    du_du: f64,
    /// [`RELATIVE_FLOOR`] times the largest squared coordinate norm in the pair.
    floor: f64,
}

fn diff(a: &GraphPoint, b: &GraphPoint) -> PairDiff {
    let dx: Vec<f64> = a.x.as_slice().iter().zip(b.x.as_slice()).map(|(p, q)| p - q).collect();
    let du: Vec<f64> = a.u.as_slice().iter().zip(b.u.as_slice()).map(|(p, q)| p - q).collect();
    let size = [&a.x, &b.x, &a.u, &b.u].iter().map(|v| v.norm_sq()).fold(0.0, f64::max);
    PairDiff {
        dx_dx: dot(&dx, &dx),
        dx_du: dot(&dx, &du),
        du_du: dot(&du, &du),
        floor: RELATIVE_FLOOR * size,
    }
}

fn witness(a: &GraphPoint, b: &GraphPoint) -> Witness {
    Witness {
        x: a.x.clone(),
        y: b.x.clone(),
        u: Some(a.u.clone()),
        v: Some(b.u.clone()),
    }
}

/// Visits every unordered pair `i < j` in index order.
fn for_each_pair(g: &OperatorGraph, mut f: impl FnMut(&GraphPoint, &GraphPoint)) {
    let pts = g.pairs();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            f(&pts[i], &pts[j]);
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol >= 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("tolerance must be >= 0, got {tol}")))
    }
}

pub fn check_rho_monotone(g: &OperatorGraph, rho: f64, tol: f64) -> Result<CertReport> {
    check_tol(tol)?;
    let mut t = MarginTracker::new(Property::RhoMonotone, rho, tol);
    for_each_pair(g, |a, b| {
        let d = diff(a, b);
        let scale = (d.dx_dx * d.du_du).sqrt().max(rho.abs() * d.dx_dx).max(d.floor);
        let m = margin(d.dx_du - rho * d.dx_dx, scale);
        t.observe(m, || witness(a, b));
    });
    Ok(t.finish())
}

pub fn check_rho_comonotone(g: &OperatorGraph, rho: f64, tol: f64) -> Result<CertReport> {
    check_tol(tol)?;
    let mut t = MarginTracker::new(Property::RhoComonotone, rho, tol);
    for_each_pair(g, |a, b| {
        let d = diff(a, b);
        let scale = (d.dx_dx * d.du_du).sqrt().max(rho.abs() * d.du_du).max(d.floor);
        let m = margin(d.dx_du - rho * d.du_du, scale);
        t.observe(m, || witness(a, b));
    });
    Ok(t.finish())
}

/// `inf ⟨Δx,Δu⟩/‖Δx‖²` over pairs with `Δx ≠ 0`; `+∞` when no such pair exists.
pub fn optimal_monotone_modulus(g: &OperatorGraph) -> Modulus {
    let mut best = f64::INFINITY;
    for_each_pair(g, |a, b| {
        let d = diff(a, b);
        if d.dx_dx > 0.0 {
            best = best.min(d.dx_du / d.dx_dx);
        }
    });
    Modulus::from(best)
}

/// `inf ⟨Δx,Δu⟩/‖Δu‖²` over pairs with `Δu ≠ 0`; `+∞` when no such pair exists.
pub fn optimal_comonotone_modulus(g: &OperatorGraph) -> Modulus {
    let mut best = f64::INFINITY;
    for_each_pair(g, |a, b| {
        let d = diff(a, b);
        if d.du_du > 0.0 {
            best = best.min(d.dx_du / d.du_du);
        }
    });
    Modulus::from(best)
}

/// Checks that the graph is functional: no two points share a first
/// coordinate (within [`COINCIDENT_TOL`]) while their second coordinates
/// differ by more than [`MULTIVALUED_TOL`].
///
/// Margins are `−‖u−v‖∞` on coincident pairs and 0 elsewhere, checked
/// against the fixed tolerance [`MULTIVALUED_TOL`].
pub fn check_single_valued(g: &OperatorGraph) -> CertReport {
    let mut t = MarginTracker::new(Property::SingleValued, 0.0, MULTIVALUED_TOL);
    for_each_pair(g, |a, b| {
        let gap_x = (&a.x - &b.x).norm_inf();
        let m = if gap_x <= COINCIDENT_TOL {
            -(&a.u - &b.u).norm_inf()
        } else {
            0.0
        };
        t.observe(m, || witness(a, b));
    });
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::Vector;

    fn g1(pairs: &[(f64, f64)]) -> OperatorGraph {
        OperatorGraph::from_pairs(
            1,
            pairs
                .iter()
                .map(|&(x, u)| GraphPoint::new(Vector::scalar(x), Vector::scalar(u)))
                .collect(),
        )
        .unwrap()
    }

    fn linear_graph(rows: [[f64; 2]; 2], pts: &[[f64; 2]]) -> OperatorGraph {
        let pairs = pts
            .iter()
            .map(|p| {
                let u = [
                    rows[0][0] * p[0] + rows[0][1] * p[1],
                    rows[1][0] * p[0] + rows[1][1] * p[1],
                ];
                GraphPoint::new(Vector::new(p.to_vec()).unwrap(), Vector::new(u.to_vec()).unwrap())
            })
            .collect();
        OperatorGraph::from_pairs(2, pairs).unwrap()
    }

    #[test]
    fn identity_graph() {
        let g = g1(&[(0.0, 0.0), (1.0, 1.0)]);
        let r = check_rho_monotone(&g, 1.0, 1e-9).unwrap();
        assert!(r.passed);
        assert_eq!(r.worst_margin, 0.0);
        assert!(check_rho_comonotone(&g, 1.0, 1e-9).unwrap().passed);
        assert_eq!(optimal_monotone_modulus(&g).value(), 1.0);
        assert_eq!(optimal_comonotone_modulus(&g).value(), 1.0);
    }

    #[test]
    fn skew_rotation_is_not_strongly_monotone() {
        let g = linear_graph([[0.0, -1.0], [1.0, 0.0]], &[[1.0, 0.0], [0.0, 1.0]]);
        let r = check_rho_monotone(&g, 0.1, 1e-9).unwrap();
        assert!(!r.passed);
        // Δx = (1,−1): ⟨Δx,NΔx⟩ = 0, so slack = −0.1·2 over scale 2.
        assert!((r.worst_margin + 0.1).abs() < 1e-15);
        assert!(r.witness.is_some());
        assert!(check_rho_monotone(&g, 0.0, 1e-9).unwrap().passed);
    }

    #[test]
    fn repeated_output_pair_is_vacuous_for_comonotone() {
        let g = g1(&[(0.0, 5.0), (1.0, 5.0)]);
        for rho in [-10.0, 0.0, 3.0, 1e6] {
            let r = check_rho_comonotone(&g, rho, 0.0).unwrap();
            assert!(r.passed);
            assert_eq!(r.worst_margin, 0.0);
        }
        assert_eq!(optimal_comonotone_modulus(&g), Modulus::INFINITY);
    }

    #[test]
    fn degenerate_graphs_certify_everything() {
        let single = g1(&[(2.0, -7.0)]);
        assert_eq!(optimal_monotone_modulus(&single), Modulus::INFINITY);
        assert_eq!(optimal_comonotone_modulus(&single), Modulus::INFINITY);
        let r = check_rho_monotone(&single, 1e9, 1e-9).unwrap();
        assert!(r.passed && r.witness.is_none() && r.samples_used == 0);
        let empty = OperatorGraph::empty(3).unwrap();
        assert!(check_rho_comonotone(&empty, 5.0, 0.0).unwrap().passed);
    }

    #[test]
    fn negative_tolerance_rejected() {
        let g = g1(&[(0.0, 0.0)]);
        assert!(matches!(check_rho_monotone(&g, 0.0, -1.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn relative_tolerance_on_large_graphs() {
        // Slack −1e−4 at ‖Δx‖² = 1e6 is a relative violation of 1e−10.
        let g = g1(&[(0.0, 0.0), (1e3, 1e3 - 1e-7)]);
        assert!(check_rho_monotone(&g, 1.0, 1e-9).unwrap().passed);
        assert!(!check_rho_monotone(&g, 1.0, 1e-11).unwrap().passed);
    }

    #[test]
    fn single_valued_detection() {
        let multi = g1(&[(0.0, 1.0), (1.0, 2.0), (0.0, 3.0)]);
        let r = check_single_valued(&multi);
        assert!(!r.passed);
        assert_eq!(r.worst_margin, -2.0);
        let w = r.witness.unwrap();
        assert_eq!((w.x[0], w.y[0]), (0.0, 0.0));
        assert!(check_single_valued(&g1(&[(0.0, 1.0), (0.0, 1.0), (1.0, 0.0)])).passed);
    }
}
