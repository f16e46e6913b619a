//! Derivative-free prox oracle: grid search followed by golden-section refinement.

use super::{check_regime, residual_of, HypoconvexFn, ProxMethod, ProxResult};
use crate::error::{Error, Result};

const GRID_POINTS: usize = 2001;
const INTERVAL_TOL: f64 = 1e-12;

/// Default bracket half-width `10(1 + |x|)`.
pub fn default_bracket_radius(x: f64) -> f64 {
    10.0 * (1.0 + x.abs())
}

/// `argmin_y f(y) + (y − x)²/(2μ)` over `[x − R, x + R]`.
pub fn prox_numeric(
    f: &dyn HypoconvexFn,
    mu: f64,
    x: f64,
    bracket_radius: Option<f64>,
) -> Result<ProxResult> {
    check_regime(f.lambda(), mu, false)?;
    if !x.is_finite() {
        return Err(Error::Parameter(format!("prox argument must be finite, got {x}")));
    }
    let radius = bracket_radius.unwrap_or_else(|| default_bracket_radius(x));
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Parameter(format!("bracket radius must be > 0, got {radius}")));
    }
    let phi = |y: f64| {
        let v = f.value(y) + (y - x) * (y - x) / (2.0 * mu);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let lo = x - radius;
    let h = 2.0 * radius / (GRID_POINTS - 1) as f64;
    let grid = |k: usize| lo + h * k as f64;
    let mut best = (usize::MAX, f64::INFINITY);
    for k in 0..GRID_POINTS {
        let v = phi(grid(k));
        if v < best.1 {
            best = (k, v);
        }
    }
    if best.0 == usize::MAX {
        return Err(Error::Bracket(format!(
            "objective is not finite anywhere in [{}, {}]",
            lo,
            x + radius
        )));
    }
    let k = best.0;
    let a = grid(k.saturating_sub(1));
    let b = grid((k + 1).min(GRID_POINTS - 1));
    let y = golden_section(&phi, a, b, grid(k));
    Ok(ProxResult {
        point: y,
        residual: residual_of(f, mu, x, y),
        method: ProxMethod::Numeric,
    })
}

/// Golden-section search on `[a, b]`; returns the best point seen, seeded with `fallback`.
fn golden_section(phi: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, fallback: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best = (fallback, phi(fallback));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (phi(c), phi(d));
    for &(p, v) in &[(c, fc), (d, fd)] {
        if v < best.1 {
            best = (p, v);
        }
    }
    while b - a > INTERVAL_TOL * (1.0 + a.abs().max(b.abs())) {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = phi(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = phi(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
        if !(c < d) {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    if phi(mid) <= best.1 {
        mid
    } else {
        best.0
    }
}
