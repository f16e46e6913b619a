//! Resolvents, reflected resolvents, and certification of conic
//! nonexpansiveness, averagedness, cocoercivity, Lipschitz continuity, and
//! strong monotonicity for single-valued maps.
//!
//! Inner-product inequalities are scaled by the Cauchy–Schwarz size of their
//! terms (`‖x−y‖·‖Tx−Ty‖` and the like), floored at [`RELATIVE_FLOOR`] times
//! the squared size of the points, so margins are invariant under rescaling
//! of linear maps. The α-conic inequality is measured as `1/(2α)`-cocoercivity
//! of `Id − T`; in these units a conic margin equals the nonexpansive margin
//! of `N = (T − (1−α)Id)/α` pair by pair, and a 5% change of α at a tight
//! pair moves the margin by about 5% whatever the size of α.
//!
//! Rounding in `Id − T` is of order `ε‖x‖` rather than `ε‖Id − T‖`, so conic
//! margins at near-coincident pairs carry an error of roughly
//! `ε/(α·√RELATIVE_FLOOR)`; keep `α ≳ 1e-5` at the default tolerance.

use serde::Serialize;

pub use crate::graph::{complement_resolvent_graph, reflected_resolvent_graph, resolvent_graph};

use crate::cert::{margin, CertReport, MarginTracker, Property, Witness, RELATIVE_FLOOR};
use crate::error::{Error, Result};
use crate::graph::OperatorGraph;
use crate::linear::{
    is_rho_comonotone_linear, is_rho_monotone_linear, optimal_comonotone_modulus_linear,
    optimal_conic_alpha_linear, optimal_monotone_modulus_linear, resolvent_linear,
    spectral_norm, LinearOp,
};
use crate::map::{Blend, PointMap};
use crate::modulus::Modulus;
use crate::sampler::{gaussian, PairSampler};
use crate::vector::Vector;

/// A map inequality with its parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapProperty {
    /// `2α⟨Tx−Ty, (Id−T)x−(Id−T)y⟩ ≥ (1−2α)‖(Id−T)x−(Id−T)y‖²`
    Conic(f64),
    /// Conic with `α < 1`, cross-checked against
    /// `‖Tx−Ty‖² + (1−2α)‖x−y‖² ≤ 2(1−α)⟨x−y, Tx−Ty⟩`.
    Averaged(f64),
    /// The conic inequality at `α = 1`.
    Nonexpansive,
    /// `⟨x−y, Tx−Ty⟩ ≥ β‖Tx−Ty‖²`
    Cocoercive(f64),
    /// `‖Tx−Ty‖ ≤ L‖x−y‖`
    Lipschitz(f64),
    /// `⟨x−y, Tx−Ty⟩ ≥ β‖x−y‖²`; β = 0 is plain monotonicity.
    StronglyMonotone(f64),
}

impl MapProperty {
    pub fn property(self) -> Property {
        match self {
            MapProperty::Conic(_) => Property::ConicNonexpansive,
            MapProperty::Averaged(_) => Property::Averaged,
            MapProperty::Nonexpansive => Property::Nonexpansive,
            MapProperty::Cocoercive(_) => Property::Cocoercive,
            MapProperty::Lipschitz(_) => Property::Lipschitz,
            MapProperty::StronglyMonotone(_) => Property::StronglyMonotone,
        }
    }

    pub fn parameter(self) -> f64 {
        match self {
            MapProperty::Conic(p)
            | MapProperty::Averaged(p)
            | MapProperty::Cocoercive(p)
            | MapProperty::Lipschitz(p)
            | MapProperty::StronglyMonotone(p) => p,
            MapProperty::Nonexpansive => 1.0,
        }
    }

    pub fn validate(self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        match self {
            MapProperty::Conic(a) if !(a > 0.0 && a.is_finite()) => bad(format!("conic alpha must be > 0, got {a}")),
            MapProperty::Averaged(a) if !(a > 0.0 && a <= 1.0) => bad(format!("averaged alpha must lie in (0, 1], got {a}")),
            MapProperty::Cocoercive(b) if !(b > 0.0 && b.is_finite()) => bad(format!("cocoercivity constant must be > 0, got {b}")),
            MapProperty::Lipschitz(l) if !(l >= 0.0 && l.is_finite()) => bad(format!("Lipschitz constant must be >= 0, got {l}")),
            MapProperty::StronglyMonotone(b) if !b.is_finite() => bad(format!("modulus must be finite, got {b}")),
            _ => Ok(()),
        }
    }

    /// Validates, and reports averagedness at `α = 1` as nonexpansiveness.
    pub fn normalized(self) -> Result<Self> {
        self.validate()?;
        Ok(match self {
            MapProperty::Averaged(1.0) => MapProperty::Nonexpansive,
            p => p,
        })
    }

    /// Normalized slack at the pair `(x, y)` with images `(tx, ty)`.
    pub fn margin(self, x: &Vector, y: &Vector, tx: &Vector, ty: &Vector) -> f64 {
        let complement = |p: &Vector, tp: &Vector| p - tp;
        match self {
            MapProperty::Conic(a) => {
                cocoercive_margin(0.5 / a, x, y, &complement(x, tx), &complement(y, ty))
            }
            MapProperty::Nonexpansive => {
                cocoercive_margin(0.5, x, y, &complement(x, tx), &complement(y, ty))
            }
            MapProperty::Averaged(a) => {
                let conic = cocoercive_margin(0.5 / a, x, y, &complement(x, tx), &complement(y, ty));
                // The averaged form has slack 2α times the conic one, built
                // from terms of size ‖x−y‖² and ‖Tx−Ty‖².
                let (dx, dt) = (x - y, tx - ty);
                let (xx, tt) = (dx.norm_sq(), dt.norm_sq());
                let fact = 2.0 * (1.0 - a) * dx.dot(&dt) - tt - (1.0 - 2.0 * a) * xx;
                let size = x.norm_sq().max(y.norm_sq()).max(tx.norm_sq()).max(ty.norm_sq());
                conic.min(margin(fact, xx.max(tt).max(RELATIVE_FLOOR * size)))
            }
            MapProperty::Cocoercive(b) => cocoercive_margin(b, x, y, tx, ty),
            MapProperty::Lipschitz(l) => {
                let l2 = l * l;
                let (xx, tt) = ((x - y).norm_sq(), (tx - ty).norm_sq());
                let size = (l2 * x.norm_sq().max(y.norm_sq())).max(tx.norm_sq()).max(ty.norm_sq());
                margin(l2 * xx - tt, (l2 * xx).max(tt).max(RELATIVE_FLOOR * size))
            }
            MapProperty::StronglyMonotone(b) => {
                let (dx, dt) = (x - y, tx - ty);
                let xx = dx.norm_sq();
                let size = x.norm_sq().max(y.norm_sq()).max(tx.norm_sq()).max(ty.norm_sq());
                let scale = (dx.norm() * dt.norm()).max(b.abs() * xx).max(RELATIVE_FLOOR * size);
                margin(dx.dot(&dt) - b * xx, scale)
            }
        }
    }
}

/// β-cocoercivity of a map `V` at `(x, y)` with images `(vx, vy)`:
/// slack `⟨x−y, vx−vy⟩ − β‖vx−vy‖²` over
/// `max(‖x−y‖‖vx−vy‖, β‖vx−vy‖², floor)`.
///
/// The α-conic inequality for `T` is this check on `V = Id − T` with
/// `β = 1/(2α)`, and nonexpansiveness is the case `α = 1`. The floor is
/// [`RELATIVE_FLOOR`]`/(2β)` times the largest squared norm among `x`, `y`
/// and `N = Id − 2βV` at both points. With these units the margin of `T` at
/// `α` equals the nonexpansive margin of `N = (T − (1−α)Id)/α` exactly,
/// and a fractional change in `α` at a tight pair moves the margin by the
/// same fraction whatever the size of `α`.
fn cocoercive_margin(beta: f64, x: &Vector, y: &Vector, vx: &Vector, vy: &Vector) -> f64 {
    let d = x - y;
    let v = vx - vy;
    let vv = v.norm_sq();
    let slack = d.dot(&v) - beta * vv;
    let n = |p: &Vector, vp: &Vector| p.lin_comb(1.0, vp, -2.0 * beta).norm_sq();
    let size = x.norm_sq().max(y.norm_sq()).max(n(x, vx)).max(n(y, vy));
    let scale = (d.norm() * v.norm())
        .max(beta * vv)
        .max(RELATIVE_FLOOR * size / (2.0 * beta));
    margin(slack, scale)
}

/// Where certification pairs come from.
#[derive(Debug, Clone, Copy)]
pub enum Samples<'a> {
    /// Seeded random pairs followed by local refinement from the worst pair.
    Sampler(&'a PairSampler),
    /// Exactly these pairs, in order.
    Pairs(&'a [(Vector, Vector)]),
}

impl<'a> From<&'a PairSampler> for Samples<'a> {
    fn from(s: &'a PairSampler) -> Self {
        Samples::Sampler(s)
    }
}

impl<'a> From<&'a [(Vector, Vector)]> for Samples<'a> {
    fn from(p: &'a [(Vector, Vector)]) -> Self {
        Samples::Pairs(p)
    }
}

impl<'a> From<&'a Vec<(Vector, Vector)>> for Samples<'a> {
    fn from(p: &'a Vec<(Vector, Vector)>) -> Self {
        Samples::Pairs(p.as_slice())
    }
}

/// Certifies `prop` for `t` over the given samples.
pub fn certify_map<'a, M: PointMap + ?Sized>(
    t: &M,
    prop: MapProperty,
    samples: impl Into<Samples<'a>>,
    tol: f64,
) -> Result<CertReport> {
    let prop = prop.normalized()?;
    if !(tol >= 0.0) {
        return Err(Error::Parameter(format!("tolerance must be >= 0, got {tol}")));
    }
    let dim = t.dim();
    let mut tracker = MarginTracker::new(prop.property(), prop.parameter(), tol);
    let eval = |tracker: &mut MarginTracker, x: &Vector, y: &Vector| -> f64 {
        let (tx, ty) = (t.apply(x), t.apply(y));
        let m = prop.margin(x, y, &tx, &ty);
        tracker.observe(m, || Witness {
            x: x.clone(),
            y: y.clone(),
            u: Some(tx),
            v: Some(ty),
        });
        m
    };

    match samples.into() {
        Samples::Pairs(pairs) => {
            for (x, y) in pairs {
                for v in [x, y] {
                    if v.dim() != dim {
                        return Err(Error::Dimension {
                            expected: dim,
                            got: v.dim(),
                        });
                    }
                }
                eval(&mut tracker, x, y);
            }
            Ok(tracker.finish())
        }
        Samples::Sampler(sampler) => {
            // Floored margins of near-coincident pairs are damped toward 0 and
            // the search keeps the separation fixed, so the worst far pair is
            // always refined; the worst pair overall is refined as well when it
            // already shows a violation.
            let mut worst_any: Option<(f64, usize)> = None;
            let mut worst_far: Option<(f64, usize)> = None;
            let pairs = sampler.sample_pairs(dim);
            for (i, (x, y)) in pairs.iter().enumerate() {
                let m = eval(&mut tracker, x, y);
                let m = if m.is_nan() { f64::NEG_INFINITY } else { m };
                if worst_any.is_none_or(|w| m < w.0) {
                    worst_any = Some((m, i));
                }
                if !sampler.is_near(i) && worst_far.is_none_or(|w| m < w.0) {
                    worst_far = Some((m, i));
                }
            }
            let mut starts = Vec::with_capacity(2);
            starts.extend(worst_far.or(worst_any));
            if let Some(a) = worst_any {
                if a.0 < 0.0 && worst_far.is_none_or(|f| f.1 != a.1) {
                    starts.push(a);
                }
            }
            for (m, i) in starts {
                let (x, y) = pairs[i].clone();
                refine(sampler, dim, m, x, y, |a, b| eval(&mut tracker, a, b));
            }
            Ok(tracker.finish().with_seed(sampler.seed))
        }
    }
}

/// (1+1) evolution strategy on the pair `(x, y)`, minimizing the margin.
/// The separation `‖x − y‖` is held fixed; steps are relative to it and
/// adapt by the one-fifth rule.
fn refine(
    sampler: &PairSampler,
    dim: usize,
    mut best: f64,
    mut bx: Vector,
    mut by: Vector,
    mut eval: impl FnMut(&Vector, &Vector) -> f64,
) {
    const SIGMA0: f64 = 0.3;
    let spread = (&bx - &by).norm();
    if spread == 0.0 || !spread.is_finite() {
        return;
    }
    let mut rng = sampler.refine_rng();
    let mut sigma = SIGMA0;
    for _ in 0..sampler.refine_steps {
        if best == f64::NEG_INFINITY {
            break;
        }
        let step = sigma * spread;
        let cx = bx.lin_comb(1.0, &gaussian(&mut rng, dim), step);
        let cy = by.lin_comb(1.0, &gaussian(&mut rng, dim), step);
        let d = &cx - &cy;
        let len = d.norm();
        if len == 0.0 {
            continue;
        }
        let mid = cx.lin_comb(0.5, &cy, 0.5);
        let half = d.scale(0.5 * spread / len);
        let (cx, cy) = (&mid + &half, &mid - &half);
        let m = eval(&cx, &cy);
        if m < best {
            best = m;
            bx = cx;
            by = cy;
            sigma *= 1.5;
        } else {
            sigma *= 0.9;
            if sigma < 1e-6 {
                sigma = SIGMA0;
            }
        }
    }
}

/// Certifies `prop` treating a functional graph `{(x, T(x))}` as the map's samples.
pub fn certify_graph_as_map(g: &OperatorGraph, prop: MapProperty, tol: f64) -> Result<CertReport> {
    let prop = prop.normalized()?;
    if !(tol >= 0.0) {
        return Err(Error::Parameter(format!("tolerance must be >= 0, got {tol}")));
    }
    let mut tracker = MarginTracker::new(prop.property(), prop.parameter(), tol);
    let pts = g.pairs();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let (a, b) = (&pts[i], &pts[j]);
            let m = prop.margin(&a.x, &b.x, &a.u, &b.u);
            tracker.observe(m, || Witness {
                x: a.x.clone(),
                y: b.x.clone(),
                u: Some(a.u.clone()),
                v: Some(b.u.clone()),
            });
        }
    }
    Ok(tracker.finish())
}

pub fn certify_conic<'a, M: PointMap + ?Sized>(
    t: &M,
    alpha: f64,
    samples: impl Into<Samples<'a>>,
    tol: f64,
) -> Result<CertReport> {
    certify_map(t, MapProperty::Conic(alpha), samples, tol)
}

/// α-averaged: α-conic with `α < 1`. At `α = 1` the report is for nonexpansiveness.
pub fn certify_averaged<'a, M: PointMap + ?Sized>(
    t: &M,
    alpha: f64,
    samples: impl Into<Samples<'a>>,
    tol: f64,
) -> Result<CertReport> {
    certify_map(t, MapProperty::Averaged(alpha), samples, tol)
}

pub fn certify_nonexpansive<'a, M: PointMap + ?Sized>(
    t: &M,
    samples: impl Into<Samples<'a>>,
    tol: f64,
) -> Result<CertReport> {
    certify_map(t, MapProperty::Nonexpansive, samples, tol)
}

pub fn certify_cocoercive<'a, M: PointMap + ?Sized>(
    t: &M,
    beta: f64,
    samples: impl Into<Samples<'a>>,
    tol: f64,
) -> Result<CertReport> {
    certify_map(t, MapProperty::Cocoercive(beta), samples, tol)
}

pub fn certify_lipschitz<'a, M: PointMap + ?Sized>(
    t: &M,
    lipschitz: f64,
    samples: impl Into<Samples<'a>>,
    tol: f64,
) -> Result<CertReport> {
    certify_map(t, MapProperty::Lipschitz(lipschitz), samples, tol)
}

pub fn certify_strongly_monotone<'a, M: PointMap + ?Sized>(
    t: &M,
    beta: f64,
    samples: impl Into<Samples<'a>>,
    tol: f64,
) -> Result<CertReport> {
    certify_map(t, MapProperty::StronglyMonotone(beta), samples, tol)
}

/// `N = (1/α)T − ((1−α)/α)Id`, so that `T = (1−α)Id + αN`.
pub fn conic_decompose<M: PointMap>(t: M, alpha: f64) -> Result<Blend<M>> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Parameter(format!("alpha must be > 0, got {alpha}")));
    }
    Ok(Blend::new(-(1.0 - alpha) / alpha, 1.0 / alpha, t))
}

/// `R = 2J − Id`
pub fn reflected_linear(j: &LinearOp) -> LinearOp {
    j.lin_comb(2.0, &LinearOp::identity(j.n()), -1.0)
}

/// Which side of a biconditional a probe checks and what was found.
#[derive(Debug, Clone, Serialize)]
pub struct ReflectedProbe {
    pub parameter: f64,
    /// `"optimal"` for the tight parameter, `"tightened"` for one just past it.
    pub kind: &'static str,
    /// Exact verdict on `A` (eigenvalue tests).
    pub operator_side: bool,
    /// Sampled verdicts on `J_A` / `R_A`.
    pub resolvent_side: Vec<CertReport>,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReflectedItem {
    pub item: &'static str,
    pub statement: &'static str,
    pub probes: Vec<ReflectedProbe>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReflectedReport {
    pub beta_comonotone: Modulus,
    pub beta_strongly_monotone: f64,
    pub items: Vec<ReflectedItem>,
    pub consistent: bool,
}

const EXACT_TOL: f64 = 1e-10;
const TIGHTEN: f64 = 0.95;

fn probe(parameter: f64, kind: &'static str, operator_side: bool, resolvent_side: Vec<CertReport>) -> ReflectedProbe {
    let agree = resolvent_side.iter().all(|r| r.passed == operator_side);
    ReflectedProbe {
        parameter,
        kind,
        operator_side,
        resolvent_side,
        agree,
    }
}

/// Cross-checks the correspondences between a linear `A` and its resolvent
/// `J_A` and reflected resolvent `R_A = 2J_A − Id`. Each item is evaluated as
/// a sample-level biconditional: the exact verdict on `A` must equal every
/// sampled verdict on `J_A` / `R_A`.
pub fn reflected_correspondence_report(
    a: &LinearOp,
    sampler: &PairSampler,
    tol: f64,
) -> Result<ReflectedReport> {
    let j = resolvent_linear(a)?;
    let r = reflected_linear(&j);
    let neg_r = r.scale(-1.0);
    let n = a.n();
    let beta = optimal_comonotone_modulus_linear(a);
    let beta_mono = optimal_monotone_modulus_linear(a);
    let mut items = Vec::new();

    // (i) β-comonotone ⟺ J_A is 1/(2(1+β))-averaged ⟺ R_A is 1/(1+β)-conic.
    let mut item = ReflectedItem {
        item: "i",
        statement: "A beta-comonotone <=> J_A 1/(2(1+beta))-averaged <=> R_A 1/(1+beta)-conic",
        probes: Vec::new(),
        skipped: None,
    };
    if !beta.is_finite() || beta.value() <= -0.5 {
        item.skipped = Some(format!("requires finite beta > -1/2, have {beta}"));
    } else {
        let b = beta.value();
        for (kind, alpha_j) in [("optimal", 1.0 / (2.0 * (1.0 + b))), ("tightened", TIGHTEN / (2.0 * (1.0 + b)))] {
            let b_probe = 1.0 / (2.0 * alpha_j) - 1.0;
            let lhs = is_rho_comonotone_linear(a, b_probe).holds;
            let rhs = vec![
                certify_averaged(&j, alpha_j, sampler, tol)?,
                certify_conic(&r, 2.0 * alpha_j, sampler, tol)?,
            ];
            item.probes.push(probe(b_probe, kind, lhs, rhs));
        }
    }
    items.push(item);

    // (ii) β-strongly monotone ⟺ −R_A is 1/(β+1)-averaged; then J_A is 1/(β+1)-Lipschitz.
    let mut item = ReflectedItem {
        item: "ii",
        statement: "A beta-strongly monotone <=> -R_A 1/(beta+1)-averaged, J_A 1/(beta+1)-Lipschitz",
        probes: Vec::new(),
        skipped: None,
    };
    if beta_mono <= 0.0 {
        item.skipped = Some(format!("requires beta > 0, have {beta_mono}"));
    } else {
        let alpha = 1.0 / (beta_mono + 1.0);
        let rhs = vec![
            certify_averaged(&neg_r, alpha, sampler, tol)?,
            certify_lipschitz(&j, alpha, sampler, tol)?,
        ];
        item.probes.push(probe(beta_mono, "optimal", is_rho_monotone_linear(a, beta_mono).holds, rhs));
        let tight_alpha = TIGHTEN * alpha;
        let b_probe = 1.0 / tight_alpha - 1.0;
        let rhs = vec![certify_averaged(&neg_r, tight_alpha, sampler, tol)?];
        item.probes.push(probe(b_probe, "tightened", is_rho_monotone_linear(a, b_probe).holds, rhs));
    }
    items.push(item);

    // (iii) A nonexpansive ⟺ J_A ½-strongly monotone ⟺ R_A monotone.
    let lhs = spectral_norm(a) <= 1.0 + EXACT_TOL;
    let rhs = vec![
        certify_strongly_monotone(&j, 0.5, sampler, tol)?,
        certify_strongly_monotone(&r, 0.0, sampler, tol)?,
    ];
    items.push(ReflectedItem {
        item: "iii",
        statement: "A nonexpansive <=> J_A 1/2-strongly monotone <=> R_A monotone",
        probes: vec![probe(1.0, "optimal", lhs, rhs)],
        skipped: None,
    });

    // (iv) A α-averaged ⟺ R_A (1−α)/α-cocoercive.
    let alpha_a = optimal_conic_alpha_linear(a);
    let mut item = ReflectedItem {
        item: "iv",
        statement: "A alpha-averaged <=> R_A (1-alpha)/alpha-cocoercive",
        probes: Vec::new(),
        skipped: None,
    };
    let averaged_at = |alpha: f64| alpha >= alpha_a * (1.0 - EXACT_TOL);
    if alpha_a > 0.0 && alpha_a < 1.0 {
        for (kind, alpha) in [("optimal", alpha_a), ("tightened", TIGHTEN * alpha_a)] {
            let rhs = vec![certify_cocoercive(&r, (1.0 - alpha) / alpha, sampler, tol)?];
            item.probes.push(probe(alpha, kind, averaged_at(alpha), rhs));
        }
    } else {
        let rhs = vec![certify_cocoercive(&r, 1.0, sampler, tol)?];
        item.probes.push(probe(0.5, "optimal", averaged_at(0.5), rhs));
    }
    items.push(item);

    // (v) A firmly nonexpansive ⟺ R_A firmly nonexpansive.
    let two_a_minus_i = a.lin_comb(2.0, &LinearOp::identity(n), -1.0);
    let lhs = spectral_norm(&two_a_minus_i) <= 1.0 + EXACT_TOL;
    let rhs = vec![certify_averaged(&r, 0.5, sampler, tol)?];
    items.push(ReflectedItem {
        item: "v",
        statement: "A firmly nonexpansive <=> R_A firmly nonexpansive",
        probes: vec![probe(0.5, "optimal", lhs, rhs)],
        skipped: None,
    });

    let consistent = items.iter().flat_map(|i| &i.probes).all(|p| p.agree);
    Ok(ReflectedReport {
        beta_comonotone: beta,
        beta_strongly_monotone: beta_mono,
        items,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{block_rotation, projection_family, rotation_family};
    use crate::map::{FnMap, ScaledIdentity};

    const TOL: f64 = 1e-9;

    fn sampler() -> PairSampler {
        PairSampler::default()
    }

    #[test]
    fn half_identity_is_quarter_conic() {
        let t = ScaledIdentity::new(2, 0.5);
        assert!(certify_conic(&t, 0.25, &sampler(), TOL).unwrap().passed);
        assert!(!certify_conic(&t, 0.24, &sampler(), TOL).unwrap().passed);
        assert!(certify_averaged(&t, 0.25, &sampler(), TOL).unwrap().passed);
    }

    #[test]
    fn rotation_resolvent_optimal_alpha() {
        let f = rotation_family(0.25, 2).unwrap();
        let j = resolvent_linear(&f.a).unwrap();
        assert!(certify_conic(&j, 0.25, &sampler(), TOL).unwrap().passed);
        assert!(!certify_conic(&j, 0.24, &sampler(), TOL).unwrap().passed);
    }

    #[test]
    fn projection_family_alpha_two() {
        let f = projection_family(2.0, &[Vector::basis(2, 0)]).unwrap();
        assert!(certify_conic(&f.t, 2.0, &sampler(), TOL).unwrap().passed);
        assert!(!certify_conic(&f.t, 1.9, &sampler(), TOL).unwrap().passed);
        // Lipschitz with constant 2α − 1 = 3
        assert!(certify_lipschitz(&f.t, 3.0, &sampler(), TOL).unwrap().passed);
    }

    #[test]
    fn cocoercive_examples() {
        let half = ScaledIdentity::new(3, 0.5);
        assert!(certify_cocoercive(&half, 2.0, &sampler(), TOL).unwrap().passed);
        assert!(!certify_cocoercive(&half, 2.01, &sampler(), TOL).unwrap().passed);
        // Id − T for T = ½Id is 1/(2·¼) = 2-cocoercive.
        let comp = Blend::complement(half);
        assert!(certify_cocoercive(&comp, 2.0, &sampler(), TOL).unwrap().passed);
        let two = ScaledIdentity::new(1, 2.0);
        let r = certify_cocoercive(&two, 0.5, &sampler(), TOL).unwrap();
        assert!(r.passed);
        assert!(r.worst_margin.abs() < 1e-12);
    }

    #[test]
    fn lipschitz_examples() {
        let half = ScaledIdentity::new(2, 0.5);
        assert!(certify_lipschitz(&half, 0.5, &sampler(), TOL).unwrap().passed);
        assert!(!certify_lipschitz(&half, 0.49, &sampler(), TOL).unwrap().passed);
        let j = resolvent_linear(&LinearOp::scaled_identity(2, 3.0)).unwrap();
        assert!(certify_lipschitz(&j, 0.25, &sampler(), TOL).unwrap().passed);
    }

    #[test]
    fn parameter_errors() {
        let t = ScaledIdentity::new(1, 0.5);
        assert!(matches!(certify_conic(&t, 0.0, &sampler(), TOL), Err(Error::Parameter(_))));
        assert!(matches!(certify_cocoercive(&t, -1.0, &sampler(), TOL), Err(Error::Parameter(_))));
        assert!(matches!(certify_averaged(&t, 1.5, &sampler(), TOL), Err(Error::Parameter(_))));
        let boundary = certify_averaged(&t, 1.0, &sampler(), TOL).unwrap();
        assert_eq!(boundary.property, Property::Nonexpansive);
        assert!(boundary.passed);
        assert!(conic_decompose(t, 0.0).is_err());
    }

    #[test]
    fn tiny_alpha_is_roundoff_safe() {
        for eps in [1e-3, 1e-4] {
            let j = resolvent_linear(&LinearOp::scaled_identity(3, eps)).unwrap();
            let alpha = 1.0 / (2.0 * (1.0 / eps + 1.0));
            let r = certify_averaged(&j, alpha, &sampler(), TOL).unwrap();
            assert!(r.passed, "eps={eps} margin {:e}", r.worst_margin);
            assert!(!certify_averaged(&j, 0.95 * alpha, &sampler(), TOL).unwrap().passed, "eps={eps}");
        }
        let id = ScaledIdentity::identity(2);
        assert!(certify_averaged(&id, 5e-7, &sampler(), TOL).unwrap().passed);
    }

    #[test]
    fn pairs_are_dimension_checked() {
        let t = ScaledIdentity::new(2, 0.5);
        let pairs = vec![(Vector::scalar(1.0), Vector::scalar(0.0))];
        assert!(matches!(
            certify_nonexpansive(&t, &pairs, TOL),
            Err(Error::Dimension { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn decompose_examples() {
        let x = Vector::new(vec![1.0, -2.0]).unwrap();
        let n = conic_decompose(ScaledIdentity::new(2, 0.5), 0.25).unwrap();
        assert_eq!(n.apply(&x).as_slice(), &[-1.0, 2.0]);
        let n = conic_decompose(ScaledIdentity::identity(2), 0.7).unwrap();
        let nx = n.apply(&x);
        assert!((&nx - &x).norm_inf() < 1e-15);

        // (1−λ)I + λN recovers N at α = λ.
        let lambda = 0.3;
        let f = rotation_family(lambda, 2).unwrap();
        let rec = conic_decompose(&f.t, lambda).unwrap();
        let rot = block_rotation(2).unwrap();
        for k in 0..2 {
            let e = Vector::basis(2, k);
            assert!((&rec.apply(&e) - &rot.apply(&e)).norm_inf() < 1e-15);
        }
    }

    #[test]
    fn decompose_verdicts_match_pairwise() {
        let t = FnMap::new(2, |v: &Vector| {
            Vector::new(vec![v[0].sin() * 0.8 + 0.1 * v[1], 0.9 * v[1].tanh()]).unwrap()
        });
        let pairs = sampler().sample_pairs(2);
        for alpha in [0.3, 0.5, 0.8, 1.0, 2.0] {
            let n = conic_decompose(&t, alpha).unwrap();
            for p in &pairs {
                let one = std::slice::from_ref(p);
                let c = certify_conic(&t, alpha, one, TOL).unwrap();
                let e = certify_nonexpansive(&n, one, TOL).unwrap();
                assert_eq!(c.passed, e.passed, "alpha {alpha}");
                let diff = (c.worst_margin - e.worst_margin).abs();
                assert!(diff <= 1e-10 * (1.0 + e.worst_margin.abs()), "alpha {alpha} diff {diff:e}");
            }
        }
    }

    #[test]
    fn reflected_resolvent_of_skew_is_nonexpansive() {
        let n = block_rotation(2).unwrap();
        let pts = sampler().sample_points(2, 40);
        let g = OperatorGraph::from_map(2, &pts, |x| n.apply(x)).unwrap();
        let r = reflected_resolvent_graph(&g);
        assert!(certify_graph_as_map(&r, MapProperty::Nonexpansive, TOL).unwrap().passed);
        // oracle: (I+N)⁻¹ = ½(I − N), R = −N is an isometry
        let j = LinearOp::identity(2).lin_comb(0.5, &n, -0.5);
        for p in resolvent_graph(&g).pairs() {
            assert!((&j.apply(&p.x) - &p.u).norm_inf() < 1e-12 * (1.0 + p.x.norm()));
        }
    }

    #[test]
    fn resolvent_graph_matches_matrix_inverse() {
        let a = rotation_family(0.25, 2).unwrap().a;
        let pts = sampler().sample_points(2, 30);
        let g = OperatorGraph::from_map(2, &pts, |x| a.apply(x)).unwrap();
        // (I+A)⁻¹ for A = [[0.2,0.4],[−0.4,0.2]]: det = 1.2² + 0.4² = 1.6
        let inv = LinearOp::from_rows(&[vec![1.2 / 1.6, -0.4 / 1.6], vec![0.4 / 1.6, 1.2 / 1.6]]).unwrap();
        for p in resolvent_graph(&g).pairs() {
            assert!((&inv.apply(&p.x) - &p.u).norm_inf() <= 1e-12 * (1.0 + p.x.norm_inf()));
        }
    }

    #[test]
    fn reflected_report_examples() {
        let half = reflected_correspondence_report(&LinearOp::scaled_identity(2, 0.5), &sampler(), TOL).unwrap();
        assert!(half.consistent, "{half:#?}");
        let v = half.items.iter().find(|i| i.item == "v").unwrap();
        assert!(v.probes[0].operator_side && v.probes[0].resolvent_side[0].passed);

        let skew = reflected_correspondence_report(&block_rotation(2).unwrap(), &sampler(), TOL).unwrap();
        assert!(skew.consistent, "{skew:#?}");
        let iii = skew.items.iter().find(|i| i.item == "iii").unwrap();
        assert!(iii.probes[0].resolvent_side[1].passed);

        let three = reflected_correspondence_report(&LinearOp::scaled_identity(2, 3.0), &sampler(), TOL).unwrap();
        assert!(three.consistent, "{three:#?}");
        let ii = three.items.iter().find(|i| i.item == "ii").unwrap();
        assert!((ii.probes[0].parameter - 3.0).abs() < 1e-12);
        assert!(ii.probes[0].resolvent_side.iter().all(|r| r.passed));
        assert!((ii.probes[0].resolvent_side[0].parameter - 0.25).abs() < 1e-12);

        assert!(matches!(
            reflected_correspondence_report(&LinearOp::scaled_identity(2, -1.0), &sampler(), TOL),
            Err(Error::ResolventUndefined)
        ));
    }
}
