use serde::Serialize;

use super::{symmetric_eigen, LinearOp};
use crate::error::{Error, Result};
use crate::modulus::{serialize_extended, Modulus};

/// Bracket cap for the comonotonicity bisection.
pub const MODULUS_CAP: f64 = 1e6;
const VERDICT_TOL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

/// Boolean verdict of an exact linear test plus its eigenvalue margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearVerdict {
    pub holds: bool,
    pub margin: f64,
}

impl LinearVerdict {
    fn from_margin(margin: f64) -> Self {
        Self {
            holds: margin >= -VERDICT_TOL,
            margin,
        }
    }
}

fn lambda_min(s: &LinearOp) -> f64 {
    symmetric_eigen(s)
        .expect("symmetric by construction")
        .min()
}

/// `λ_min(A_s) − ρ`
pub fn is_rho_monotone_linear(a: &LinearOp, rho: f64) -> LinearVerdict {
    LinearVerdict::from_margin(lambda_min(&a.symmetric_part()) - rho)
}

/// `λ_min(A_s − ρAᵀA)`
pub fn is_rho_comonotone_linear(a: &LinearOp, rho: f64) -> LinearVerdict {
    LinearVerdict::from_margin(lambda_min(&a.symmetric_part().lin_comb(1.0, &a.gram(), -rho)))
}

/// `λ_min(A_s)`: the optimal monotonicity modulus of a linear operator.
pub fn optimal_monotone_modulus_linear(a: &LinearOp) -> f64 {
    lambda_min(&a.symmetric_part())
}

/// `sup{ρ : A_s − ρAᵀA ⪰ 0}` by bisection.
///
/// `λ_min(A_s − ρAᵀA)` is nonincreasing in ρ because `AᵀA ⪰ 0`. Returns
/// `+∞` for the zero matrix, `−∞` when no ρ in `[−1e6, 1e6]` qualifies, and
/// the cap `1e6` when the supremum exceeds it.
pub fn optimal_comonotone_modulus_linear(a: &LinearOp) -> Modulus {
    if a.is_zero() {
        return Modulus::INFINITY;
    }
    let sym = a.symmetric_part();
    let gram = a.gram();
    let (sym_norm, gram_norm) = (sym.norm_fro(), gram.norm_fro());
    let n = a.n() as f64;
    // Roundoff allowance for an exactly-zero eigenvalue of the pencil.
    let feasible = |rho: f64| {
        let eps = 16.0 * n * f64::EPSILON * (sym_norm + rho.abs() * gram_norm);
        lambda_min(&sym.lin_comb(1.0, &gram, -rho)) >= -eps
    };

    // Any column e_i with A e_i ≠ 0 bounds ρ* above by ⟨e_i, A e_i⟩ / ‖A e_i‖².
    let mut hi = f64::INFINITY;
    for i in 0..a.n() {
        let col_sq = gram.get(i, i);
        if col_sq > 0.0 {
            hi = hi.min(a.get(i, i) / col_sq);
        }
    }
    let hi_cap = hi.min(MODULUS_CAP);
    if feasible(hi_cap) {
        return Modulus::finite(hi_cap);
    }
    let mut hi = hi_cap;

    let mut lo = (-(1.0 + sym.norm_fro())).min(hi - 1.0);
    while !feasible(lo) {
        if lo <= -MODULUS_CAP {
            return Modulus::NEG_INFINITY;
        }
        lo = (2.0 * lo).max(-MODULUS_CAP);
    }

    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Modulus::finite(lo)
}

/// The smallest α with `T` α-conically nonexpansive.
///
/// Uses `T` α-conic ⟺ `Id − T` is `1/(2α)`-cocoercive, so α* = 1/(2β*)
/// where β* is the comonotonicity modulus of `Id − T`. Returns 0 for
/// `T = Id` (every α > 0 works) and `+∞` when no α qualifies.
pub fn optimal_conic_alpha_linear(t: &LinearOp) -> f64 {
    let complement = LinearOp::identity(t.n()).lin_comb(1.0, t, -1.0);
    let beta = optimal_comonotone_modulus_linear(&complement).value();
    if beta == f64::INFINITY {
        0.0
    } else if beta > 0.0 {
        1.0 / (2.0 * beta)
    } else {
        f64::INFINITY
    }
}

/// `‖A‖₂ = sqrt(λ_max(AᵀA))`
pub fn spectral_norm(a: &LinearOp) -> f64 {
    symmetric_eigen(&a.gram())
        .expect("gram matrix is symmetric")
        .max()
        .max(0.0)
        .sqrt()
}

/// `(I + A)⁻¹` by Gauss–Jordan elimination with partial pivoting.
pub fn resolvent_linear(a: &LinearOp) -> Result<LinearOp> {
    invert(&LinearOp::identity(a.n()).lin_comb(1.0, a, 1.0))
}

pub(crate) fn invert(m: &LinearOp) -> Result<LinearOp> {
    let n = m.n();
    let tiny = n as f64 * f64::EPSILON * m.norm_inf();
    let mut a = m.clone();
    let mut inv = LinearOp::identity(n);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a.get(i, col).abs().total_cmp(&a.get(j, col).abs()))
            .expect("non-empty range");
        let pivot = a.get(pivot_row, col);
        if pivot.abs() <= tiny || pivot == 0.0 {
            return Err(Error::ResolventUndefined);
        }
        if pivot_row != col {
            for j in 0..n {
                let (p, c) = (a.get(pivot_row, j), a.get(col, j));
                a.set(pivot_row, j, c);
                a.set(col, j, p);
                let (p, c) = (inv.get(pivot_row, j), inv.get(col, j));
                inv.set(pivot_row, j, c);
                inv.set(col, j, p);
            }
        }
        for j in 0..n {
            a.set(col, j, a.get(col, j) / pivot);
            inv.set(col, j, inv.get(col, j) / pivot);
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let f = a.get(i, col);
            if f == 0.0 {
                continue;
            }
            for j in 0..n {
                a.set(i, j, a.get(i, j) - f * a.get(col, j));
                inv.set(i, j, inv.get(i, j) - f * inv.get(col, j));
            }
        }
    }
    Ok(inv)
}

/// Machine-readable summary of a linear operator's moduli.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationReport {
    #[serde(serialize_with = "serialize_extended")]
    pub lambda_min_sym: f64,
    pub rho_mono_opt: Modulus,
    pub rho_comono_opt: Modulus,
    pub resolvent_defined: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_conic: Option<f64>,
}

pub fn classification_report(a: &LinearOp) -> ClassificationReport {
    let lambda_min_sym = optimal_monotone_modulus_linear(a);
    let rho_comono = optimal_comonotone_modulus_linear(a);
    // ρ* = +∞ (A = 0) gives α = 0: the identity is α-conic for every α > 0.
    let alpha_conic =
        (rho_comono.value() > -1.0).then(|| 1.0 / (2.0 * (rho_comono.value() + 1.0)));
    ClassificationReport {
        lambda_min_sym,
        rho_mono_opt: Modulus::finite(lambda_min_sym),
        rho_comono_opt: rho_comono,
        resolvent_defined: resolvent_linear(a).is_ok(),
        alpha_conic,
    }
}
