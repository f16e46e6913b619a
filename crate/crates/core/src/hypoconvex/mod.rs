//! Hypoconvex (weakly convex) scalar functions and their proximal operators.
//!
//! `f` is 1/λ-hypoconvex when `f + |·|²/(2λ)` is convex. For `0 < μ < λ` the
//! prox `argmin_y f(y) + (x − y)²/(2μ)` is single-valued, λ/(λ−μ)-Lipschitz
//! and (λ−μ)/λ-cocoercive, and `Id − Prox` is λ/(2(λ−μ))-conic.
//! Convex functions have `λ = +∞`.

mod families;
mod lambert;
mod numeric;

pub use families::{
    prox_exp_family, prox_indicator_quadratic, ExpFamily, IndicatorQuadratic,
    IndicatorQuadraticProx, Quadratic, QuadraticSpline, SplinePiece,
};
pub use lambert::{lambert_w0, lambert_w0_exp};
pub use numeric::{default_bracket_radius, prox_numeric};

use serde::Serialize;

use crate::cert::{margin, CertReport, MarginTracker, Property, Witness};
use crate::error::{Error, Result};
use crate::map::PointMap;
use crate::sampler::PairSampler;
use crate::vector::Vector;

/// A scalar function with hypoconvexity scale `lambda` (modulus `1/λ`).
pub trait HypoconvexFn: Send + Sync {
    fn name(&self) -> String;

    fn lambda(&self) -> f64;

    /// `+∞` outside the effective domain.
    fn value(&self, y: f64) -> f64;

    /// `f′(y)` where `f` is differentiable.
    fn derivative(&self, _y: f64) -> Option<f64> {
        None
    }

    /// Exact prox, when one is known. Implementations validate `μ` themselves.
    fn closed_form_prox(&self, _mu: f64, _x: f64) -> Option<Result<f64>> {
        None
    }
}

impl<F: HypoconvexFn + ?Sized> HypoconvexFn for &F {
    fn name(&self) -> String {
        (**self).name()
    }
    fn lambda(&self) -> f64 {
        (**self).lambda()
    }
    fn value(&self, y: f64) -> f64 {
        (**self).value(y)
    }
    fn derivative(&self, y: f64) -> Option<f64> {
        (**self).derivative(y)
    }
    fn closed_form_prox(&self, mu: f64, x: f64) -> Option<Result<f64>> {
        (**self).closed_form_prox(mu, x)
    }
}

impl<F: HypoconvexFn + ?Sized> HypoconvexFn for Box<F> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn lambda(&self) -> f64 {
        (**self).lambda()
    }
    fn value(&self, y: f64) -> f64 {
        (**self).value(y)
    }
    fn derivative(&self, y: f64) -> Option<f64> {
        (**self).derivative(y)
    }
    fn closed_form_prox(&self, mu: f64, x: f64) -> Option<Result<f64>> {
        (**self).closed_form_prox(mu, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProxMethod {
    ClosedForm,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProxResult {
    pub point: f64,
    /// `|y + μf′(y) − x|`, present when `f` is differentiable at `y`.
    pub residual: Option<f64>,
    pub method: ProxMethod,
}

/// `0 < μ < λ`, or `μ = λ` when `allow_equal`.
pub(crate) fn check_regime(lambda: f64, mu: f64, allow_equal: bool) -> Result<()> {
    if !(lambda > 0.0) {
        return Err(Error::Parameter(format!("lambda must be > 0, got {lambda}")));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::Parameter(format!("mu must be > 0, got {mu}")));
    }
    if mu > lambda || (mu == lambda && !allow_equal) {
        return Err(Error::Regime(format!(
            "prox requires mu < lambda, got mu = {mu}, lambda = {lambda}; the prox may be multivalued"
        )));
    }
    Ok(())
}

pub(crate) fn residual_of(f: &dyn HypoconvexFn, mu: f64, x: f64, y: f64) -> Option<f64> {
    f.derivative(y).map(|d| (y + mu * d - x).abs())
}

/// `Prox_{μf}(x)`: the closed form when registered, the numeric oracle otherwise.
pub fn prox(f: &dyn HypoconvexFn, mu: f64, x: f64) -> Result<ProxResult> {
    if let Some(y) = f.closed_form_prox(mu, x) {
        let y = y?;
        return Ok(ProxResult {
            point: y,
            residual: residual_of(f, mu, x, y),
            method: ProxMethod::ClosedForm,
        });
    }
    prox_numeric(f, mu, x, None)
}

/// `e_μf(x) = f(p) + (x − p)²/(2μ)` at `p = Prox_{μf}(x)`.
pub fn moreau_envelope(f: &dyn HypoconvexFn, mu: f64, x: f64) -> Result<f64> {
    check_regime(f.lambda(), mu, false)?;
    let p = prox(f, mu, x)?.point;
    Ok(f.value(p) + (x - p) * (x - p) / (2.0 * mu))
}

const TAUS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

fn half_over(lambda: f64) -> f64 {
    if lambda.is_infinite() && lambda > 0.0 {
        0.0
    } else {
        0.5 / lambda
    }
}

fn scalar_pairs(sampler: &PairSampler) -> Vec<(f64, f64)> {
    sampler.sample_pairs(1).into_iter().map(|(x, y)| (x[0], y[0])).collect()
}

fn witness(x: f64, y: f64, tau: f64) -> Witness {
    Witness {
        x: Vector::scalar(x),
        y: Vector::scalar(y),
        u: Some(Vector::scalar(tau)),
        v: None,
    }
}

/// Slack of the hypoconvexity inequality
/// `f((1−τ)x + τy) ≤ (1−τ)f(x) + τf(y) + τ(1−τ)|x−y|²/(2λ)`.
/// Pairs with `f(x)` or `f(y)` infinite hold vacuously.
fn tau_margin(f: &dyn HypoconvexFn, lambda: f64, x: f64, y: f64, tau: f64) -> f64 {
    let (fx, fy) = (f.value(x), f.value(y));
    if fx == f64::INFINITY || fy == f64::INFINITY {
        return f64::INFINITY;
    }
    let fz = f.value((1.0 - tau) * x + tau * y);
    if fz == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    let quad = tau * (1.0 - tau) * (x - y) * (x - y) * half_over(lambda);
    let slack = (1.0 - tau) * fx + tau * fy + quad - fz;
    margin(slack, 1f64.max(fx.abs()).max(fy.abs()).max(fz.abs()).max(quad.abs()))
}

/// Slack of midpoint convexity of `g = f + |·|²/(2λ)`.
fn midpoint_margin(f: &dyn HypoconvexFn, lambda: f64, x: f64, y: f64) -> f64 {
    let (fx, fy) = (f.value(x), f.value(y));
    if fx == f64::INFINITY || fy == f64::INFINITY {
        return f64::INFINITY;
    }
    let m = 0.5 * (x + y);
    let fm = f.value(m);
    if fm == f64::INFINITY {
        return f64::NEG_INFINITY;
    }
    let k = half_over(lambda);
    let (qx, qy, qm) = (k * x * x, k * y * y, k * m * m);
    let slack = 0.5 * ((fx + qx) + (fy + qy)) - (fm + qm);
    let scale = [fx, fy, fm, qx, qy, qm].iter().fold(1f64, |s, v| s.max(v.abs()));
    margin(slack, scale)
}

/// Midpoint convexity of `f + |·|²/(2λ)` on sampled pairs.
pub fn check_midpoint_convexity(
    f: &dyn HypoconvexFn,
    lambda: f64,
    sampler: &PairSampler,
    tol: f64,
) -> CertReport {
    let mut tracker = MarginTracker::new(Property::Hypoconvex, lambda, tol);
    for (x, y) in scalar_pairs(sampler) {
        tracker.observe(midpoint_margin(f, lambda, x, y), || witness(x, y, 0.5));
    }
    tracker.finish().with_seed(sampler.seed)
}

/// The hypoconvexity inequality on sampled triples `(x, y, τ)`,
/// `τ ∈ {0.1, …, 0.9}`, together with midpoint convexity of
/// `f + |·|²/(2λ)`. Returns whichever of the two reports is worse; the
/// witness's `u` holds `τ`.
pub fn check_hypoconvex(
    f: &dyn HypoconvexFn,
    lambda: f64,
    sampler: &PairSampler,
    tol: f64,
) -> CertReport {
    let mut tracker = MarginTracker::new(Property::Hypoconvex, lambda, tol);
    for (x, y) in scalar_pairs(sampler) {
        for tau in TAUS {
            tracker.observe(tau_margin(f, lambda, x, y, tau), || witness(x, y, tau));
        }
    }
    let tau_report = tracker.finish().with_seed(sampler.seed);
    let mid_report = check_midpoint_convexity(f, lambda, sampler, tol);
    if mid_report.worst_margin < tau_report.worst_margin {
        CertReport {
            samples_used: tau_report.samples_used + mid_report.samples_used,
            ..mid_report
        }
    } else {
        CertReport {
            samples_used: tau_report.samples_used + mid_report.samples_used,
            ..tau_report
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProxConstants {
    /// of `Prox_{μf}`
    pub lipschitz: f64,
    /// of `Prox_{μf}`
    pub cocoercive: f64,
    /// of `Id − Prox_{μf}`
    pub conic_alpha: f64,
}

pub fn prox_constants(lambda: f64, mu: f64) -> Result<ProxConstants> {
    check_regime(lambda, mu, false)?;
    if lambda.is_infinite() {
        return Ok(ProxConstants {
            lipschitz: 1.0,
            cocoercive: 1.0,
            conic_alpha: 0.5,
        });
    }
    let gap = lambda - mu;
    Ok(ProxConstants {
        lipschitz: lambda / gap,
        cocoercive: gap / lambda,
        conic_alpha: lambda / (2.0 * gap),
    })
}

/// Coordinatewise `Prox_{μf}` on Rⁿ. Coordinates where the prox fails map to NaN,
/// which certifiers report as a violation.
#[derive(Debug, Clone)]
pub struct ProxMap<F> {
    f: F,
    mu: f64,
    dim: usize,
}

impl<F: HypoconvexFn> ProxMap<F> {
    pub fn new(f: F, mu: f64, dim: usize) -> Result<Self> {
        check_regime(f.lambda(), mu, false)?;
        Ok(Self { f, mu, dim })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn function(&self) -> &F {
        &self.f
    }
}

impl<F: HypoconvexFn> PointMap for ProxMap<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &Vector) -> Vector {
        Vector::from_vec_unchecked(
            x.as_slice()
                .iter()
                .map(|&xi| prox(&self.f, self.mu, xi).map_or(f64::NAN, |r| r.point))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::BoxSet;

    #[test]
    fn regime_checks() {
        assert!(check_regime(1.0, 0.5, false).is_ok());
        assert!(matches!(check_regime(1.0, 1.0, false), Err(Error::Regime(_))));
        assert!(check_regime(1.0, 1.0, true).is_ok());
        assert!(matches!(check_regime(1.0, 2.0, true), Err(Error::Regime(_))));
        assert!(matches!(check_regime(1.0, 0.0, false), Err(Error::Parameter(_))));
        assert!(check_regime(f64::INFINITY, 3.0, false).is_ok());
    }

    #[test]
    fn constants() {
        let c = prox_constants(1.0, 0.5).unwrap();
        assert_eq!((c.lipschitz, c.cocoercive, c.conic_alpha), (2.0, 0.5, 1.0));
        let c = prox_constants(0.2, 0.1).unwrap();
        assert!((c.lipschitz - 2.0).abs() < 1e-15 && (c.cocoercive - 0.5).abs() < 1e-15);
        let c = prox_constants(1.0, 1e-12).unwrap();
        assert!((c.lipschitz - 1.0).abs() < 1e-11 && (c.conic_alpha - 0.5).abs() < 1e-11);
        assert!(matches!(prox_constants(1.0, 1.0), Err(Error::Regime(_))));
    }

    #[test]
    fn envelopes() {
        let zero = Quadratic::new(0.0).unwrap();
        for x in [-3.0, 0.0, 2.5] {
            assert_eq!(moreau_envelope(&zero, 0.7, x).unwrap(), 0.0);
        }
        let half_sq = Quadratic::new(1.0).unwrap();
        assert!((moreau_envelope(&half_sq, 1.0, 2.0).unwrap() - 1.0).abs() < 1e-15);
        // oracle: direct evaluation at the golden-section minimizer
        let f = ExpFamily::new(1.0).unwrap();
        let y = prox_numeric(&f, 0.5, 1.0, None).unwrap().point;
        let e_oracle = f.value(y) + (1.0 - y) * (1.0 - y);
        let e = moreau_envelope(&f, 0.5, 1.0).unwrap();
        assert!((e - e_oracle).abs() < 1e-10);
        assert!((e - 1.769_48).abs() < 1e-4);
    }

    #[test]
    fn hypoconvexity_examples() {
        let s = PairSampler::default();
        let boundary = check_hypoconvex(&Quadratic::concave(1.0).unwrap(), 1.0, &s, 1e-9);
        assert!(boundary.passed);
        assert!(boundary.worst_margin.abs() < 1e-12);
        let too_concave = check_hypoconvex(&Quadratic::new(-2.0).unwrap(), 1.0, &s, 1e-9);
        assert!(!too_concave.passed);
        assert!(too_concave.witness.is_some());
        for lambda in [0.2, 1.0, 5.0] {
            let f = ExpFamily::new(lambda).unwrap();
            assert!(check_hypoconvex(&f, lambda, &s, 1e-9).passed);
            assert!(check_hypoconvex(&f, 0.9 * lambda, &s, 1e-9).passed);
            assert!(!check_hypoconvex(&f, 1.1 * lambda, &s, 1e-9).passed);
        }
        let ind = IndicatorQuadratic::new(1.0, BoxSet::interval(-1.0, 2.0).unwrap()).unwrap();
        assert!(check_hypoconvex(&ind, 1.0, &s, 1e-9).passed);
    }

    #[test]
    fn midpoint_agrees_with_tau_form() {
        let s = PairSampler::default();
        let cases: Vec<(Box<dyn HypoconvexFn>, f64)> = vec![
            (Box::new(Quadratic::concave(1.0).unwrap()), 1.0),
            (Box::new(Quadratic::new(-2.0).unwrap()), 1.0),
            (Box::new(ExpFamily::new(0.2).unwrap()), 0.2),
            (Box::new(ExpFamily::new(0.2).unwrap()), 0.3),
            (Box::new(Quadratic::new(1.0).unwrap()), f64::INFINITY),
        ];
        for (f, lambda) in cases {
            let full = check_hypoconvex(&*f, lambda, &s, 1e-9);
            let mid = check_midpoint_convexity(&*f, lambda, &s, 1e-9);
            assert_eq!(full.passed, mid.passed, "{}", f.name());
        }
    }

    #[test]
    fn prox_map_is_coordinatewise() {
        let m = ProxMap::new(Quadratic::concave(1.0).unwrap(), 0.5, 3).unwrap();
        let y = m.apply(&Vector::new(vec![1.0, -2.0, 0.5]).unwrap());
        assert_eq!(y.as_slice(), &[2.0, -4.0, 1.0]);
        assert!(ProxMap::new(Quadratic::concave(1.0).unwrap(), 1.5, 1).is_err());
    }
}
