//! Principal branch of the Lambert W function.

use std::f64::consts::E;

use crate::error::{Error, Result};

const MAX_ITER: usize = 50;

/// `W₀(z)`, the solution `w ≥ −1` of `w·eʷ = z`, for `z ≥ −1/e`.
///
/// Halley iteration from `ln(1 + z)`, or from the branch-point series when
/// `z` is close to `−1/e`.
pub fn lambert_w0(z: f64) -> Result<f64> {
    if z.is_nan() {
        return Err(Error::Domain("lambert_w0 of NaN".into()));
    }
    let branch = -1.0 / E;
    if z < branch {
        // Accept inputs that miss the branch point by rounding only.
        if branch - z <= 4.0 * f64::EPSILON {
            return Ok(-1.0);
        }
        return Err(Error::Domain(format!("lambert_w0 requires z >= -1/e, got {z}")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    if z > 1e100 {
        return Ok(solve_log_form(z.ln()));
    }

    let mut w = if z < -0.25 {
        let p = (2.0 * (E * z + 1.0)).max(0.0).sqrt();
        let series = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
        if p < 1e-8 {
            return Ok(series);
        }
        series
    } else if z > 3.0 {
        let l = z.ln();
        l - l.ln()
    } else {
        z.ln_1p()
    };

    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        if !step.is_finite() {
            break;
        }
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

/// `W₀(eᴸ)` for a log-argument `L`, valid far past the overflow point of `eᴸ`.
pub fn lambert_w0_exp(ln_z: f64) -> Result<f64> {
    if ln_z.is_nan() {
        return Err(Error::Domain("lambert_w0_exp of NaN".into()));
    }
    if ln_z < 200.0 {
        return lambert_w0(ln_z.exp());
    }
    Ok(solve_log_form(ln_z))
}

/// Newton on `w + ln w = L` for large `L`; the left side is increasing and concave.
fn solve_log_form(ln_z: f64) -> f64 {
    let mut w = ln_z - ln_z.ln();
    for _ in 0..MAX_ITER {
        let g = w + w.ln() - ln_z;
        let step = g / (1.0 + 1.0 / w);
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs() {
            break;
        }
    }
    w
}
