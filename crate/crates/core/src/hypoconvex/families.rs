//! Registered hypoconvex families with closed-form proxes.

use serde::{Deserialize, Serialize};

use super::lambert::lambert_w0_exp;
use super::{check_regime, residual_of, HypoconvexFn, ProxMethod, ProxResult};
use crate::error::{Error, Result};
use crate::map::PointMap;
use crate::modulus::{deserialize_extended, serialize_extended};
use crate::sets::BoxSet;
use crate::vector::Vector;

fn positive_lambda(lambda: f64) -> Result<f64> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(lambda)
    } else {
        Err(Error::Parameter(format!("lambda must be finite and > 0, got {lambda}")))
    }
}

/// `f(y) = eʸ − y²/(2λ)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFamily {
    lambda: f64,
}

impl ExpFamily {
    pub fn new(lambda: f64) -> Result<Self> {
        Ok(Self {
            lambda: positive_lambda(lambda)?,
        })
    }
}

impl HypoconvexFn for ExpFamily {
    fn name(&self) -> String {
        format!("exp-hypoconvex(lambda={})", self.lambda)
    }

    fn lambda(&self) -> f64 {
        self.lambda
    }

    fn value(&self, y: f64) -> f64 {
        y.exp() - y * y / (2.0 * self.lambda)
    }

    fn derivative(&self, y: f64) -> Option<f64> {
        Some(y.exp() - y / self.lambda)
    }

    fn closed_form_prox(&self, mu: f64, x: f64) -> Option<Result<f64>> {
        Some(prox_exp_family(self.lambda, mu, x).map(|r| r.point))
    }
}

/// Prox of `eʸ − y²/(2λ)`:
/// `ln(x/μ)` when `μ = λ`, otherwise `cx − W(cμ·e^{cx})` with `c = λ/(λ−μ)`.
pub fn prox_exp_family(lambda: f64, mu: f64, x: f64) -> Result<ProxResult> {
    let f = ExpFamily::new(lambda)?;
    check_regime(lambda, mu, true)?;
    if !x.is_finite() {
        return Err(Error::Parameter(format!("prox argument must be finite, got {x}")));
    }
    let y = if mu == lambda {
        if x <= 0.0 {
            return Err(Error::Domain(format!("at mu = lambda the prox needs x > 0, got {x}")));
        }
        (x / mu).ln()
    } else {
        let c = lambda / (lambda - mu);
        let s = c * x;
        let mut y = s - lambert_w0_exp((c * mu).ln() + s)?;
        // Polish on the optimality condition y/c + μeʸ = x.
        for _ in 0..2 {
            let ey = y.exp();
            let g = y / c + mu * ey - x;
            let step = g / (1.0 / c + mu * ey);
            if !step.is_finite() || step == 0.0 {
                break;
            }
            y -= step;
        }
        y
    };
    Ok(ProxResult {
        point: y,
        residual: residual_of(&f, mu, x, y),
        method: ProxMethod::ClosedForm,
    })
}

/// `f(y) = q·y²/2`. Hypoconvex with `λ = −1/q` when `q < 0`, convex (`λ = +∞`) otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic {
    q: f64,
}

impl Quadratic {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() {
            return Err(Error::Parameter(format!("curvature must be finite, got {q}")));
        }
        Ok(Self { q })
    }

    /// `−y²/(2λ)`
    pub fn concave(lambda: f64) -> Result<Self> {
        Ok(Self {
            q: -1.0 / positive_lambda(lambda)?,
        })
    }

    pub fn curvature(&self) -> f64 {
        self.q
    }
}

impl HypoconvexFn for Quadratic {
    fn name(&self) -> String {
        if self.q < 0.0 {
            format!("concave-quadratic(lambda={})", -1.0 / self.q)
        } else {
            format!("quadratic(q={})", self.q)
        }
    }

    fn lambda(&self) -> f64 {
        if self.q < 0.0 {
            -1.0 / self.q
        } else {
            f64::INFINITY
        }
    }

    fn value(&self, y: f64) -> f64 {
        0.5 * self.q * y * y
    }

    fn derivative(&self, y: f64) -> Option<f64> {
        Some(self.q * y)
    }

    fn closed_form_prox(&self, mu: f64, x: f64) -> Option<Result<f64>> {
        Some(check_regime(self.lambda(), mu, false).map(|()| x / (1.0 + mu * self.q)))
    }
}

/// `f = ι_D − y²/(2λ)` for an interval `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorQuadratic {
    lambda: f64,
    set: BoxSet,
}

impl IndicatorQuadratic {
    pub fn new(lambda: f64, set: BoxSet) -> Result<Self> {
        if set.dim() != 1 {
            return Err(Error::Dimension {
                expected: 1,
                got: set.dim(),
            });
        }
        Ok(Self {
            lambda: positive_lambda(lambda)?,
            set,
        })
    }

    pub fn set(&self) -> &BoxSet {
        &self.set
    }
}

impl HypoconvexFn for IndicatorQuadratic {
    fn name(&self) -> String {
        format!(
            "indicator-quadratic(lambda={}, D=[{}, {}])",
            self.lambda,
            self.set.lo()[0],
            self.set.hi()[0]
        )
    }

    fn lambda(&self) -> f64 {
        self.lambda
    }

    fn value(&self, y: f64) -> f64 {
        if self.set.contains(&[y], 0.0) {
            -y * y / (2.0 * self.lambda)
        } else {
            f64::INFINITY
        }
    }

    fn derivative(&self, y: f64) -> Option<f64> {
        (y > self.set.lo()[0] && y < self.set.hi()[0]).then(|| -y / self.lambda)
    }

    fn closed_form_prox(&self, mu: f64, x: f64) -> Option<Result<f64>> {
        Some(
            prox_indicator_quadratic(self.lambda, mu, &self.set, &Vector::scalar(x))
                .map(|v| v[0]),
        )
    }
}

/// `P_D(λx/(λ−μ))`, the prox of `ι_D − ‖·‖²/(2λ)` for a box `D`.
/// For a cone this equals `(λ/(λ−μ))P_D(x)`.
pub fn prox_indicator_quadratic(lambda: f64, mu: f64, set: &BoxSet, x: &Vector) -> Result<Vector> {
    positive_lambda(lambda)?;
    check_regime(lambda, mu, false)?;
    if x.dim() != set.dim() {
        return Err(Error::Dimension {
            expected: set.dim(),
            got: x.dim(),
        });
    }
    Ok(set.project(&x.scale(lambda / (lambda - mu))))
}

/// `Prox_{μf}` for `f = ι_D − ‖·‖²/(2λ)` on a box in Rⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorQuadraticProx {
    lambda: f64,
    mu: f64,
    set: BoxSet,
}

impl IndicatorQuadraticProx {
    pub fn new(lambda: f64, mu: f64, set: BoxSet) -> Result<Self> {
        positive_lambda(lambda)?;
        check_regime(lambda, mu, false)?;
        Ok(Self { lambda, mu, set })
    }
}

impl PointMap for IndicatorQuadraticProx {
    fn dim(&self) -> usize {
        self.set.dim()
    }

    fn apply(&self, x: &Vector) -> Vector {
        self.set.project(&x.scale(self.lambda / (self.lambda - self.mu)))
    }
}

fn neg_inf() -> f64 {
    f64::NEG_INFINITY
}

fn pos_inf() -> f64 {
    f64::INFINITY
}

/// `a·y² + b·y + c` on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplinePiece {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(default = "neg_inf", serialize_with = "serialize_extended", deserialize_with = "deserialize_extended")]
    pub lo: f64,
    #[serde(default = "pos_inf", serialize_with = "serialize_extended", deserialize_with = "deserialize_extended")]
    pub hi: f64,
}

impl SplinePiece {
    fn eval(&self, y: f64) -> f64 {
        (self.a * y + self.b) * y + self.c
    }

    fn contains(&self, y: f64) -> bool {
        self.lo <= y && y <= self.hi
    }
}

/// Piecewise quadratic, `+∞` outside the union of pieces. Where pieces share
/// a point the smaller value is taken, keeping `f` lower semicontinuous.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticSpline {
    pieces: Vec<SplinePiece>,
    #[serde(serialize_with = "serialize_extended")]
    lambda: f64,
}

#[derive(Deserialize)]
struct SplineSpec {
    pieces: Vec<SplinePiece>,
    #[serde(default, deserialize_with = "optional_extended")]
    lambda: Option<f64>,
}

fn optional_extended<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
    deserialize_extended(d).map(Some)
}

impl QuadraticSpline {
    /// Without an explicit `lambda`, the scale is read off the most negative
    /// leading coefficient: `λ = 1/(−2·min a)`, or `+∞` when every `a ≥ 0`.
    /// Concave kinks are not detected; use [`super::check_hypoconvex`].
    pub fn new(pieces: Vec<SplinePiece>, lambda: Option<f64>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Parameter("spline needs at least one piece".into()));
        }
        for (k, p) in pieces.iter().enumerate() {
            if !(p.a.is_finite() && p.b.is_finite() && p.c.is_finite()) {
                return Err(Error::Parameter(format!("piece {k}: coefficients must be finite")));
            }
            if p.lo.is_nan() || p.hi.is_nan() || p.lo > p.hi {
                return Err(Error::Parameter(format!("piece {k}: need lo <= hi, got [{}, {}]", p.lo, p.hi)));
            }
        }
        let lambda = match lambda {
            Some(l) if l > 0.0 => l,
            Some(l) => return Err(Error::Parameter(format!("lambda must be > 0, got {l}"))),
            None => {
                let a_min = pieces.iter().map(|p| p.a).fold(f64::INFINITY, f64::min);
                if a_min < 0.0 {
                    -0.5 / a_min
                } else {
                    f64::INFINITY
                }
            }
        };
        Ok(Self { pieces, lambda })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SplineSpec = serde_json::from_str(text)?;
        Self::new(spec.pieces, spec.lambda)
    }

    pub fn pieces(&self) -> &[SplinePiece] {
        &self.pieces
    }
}

impl HypoconvexFn for QuadraticSpline {
    fn name(&self) -> String {
        format!("quadratic-spline({} pieces)", self.pieces.len())
    }

    fn lambda(&self) -> f64 {
        self.lambda
    }

    fn value(&self, y: f64) -> f64 {
        self.pieces
            .iter()
            .filter(|p| p.contains(y))
            .map(|p| p.eval(y))
            .fold(f64::INFINITY, f64::min)
    }

    fn derivative(&self, y: f64) -> Option<f64> {
        let mut inside = self.pieces.iter().filter(|p| p.contains(y));
        let p = inside.next()?;
        (inside.next().is_none() && p.lo < y && y < p.hi).then_some(2.0 * p.a * y + p.b)
    }

    /// Exact: on each piece the prox objective is a quadratic, minimized at
    /// its clipped vertex (or an endpoint when it opens downward).
    fn closed_form_prox(&self, mu: f64, x: f64) -> Option<Result<f64>> {
        if let Err(e) = check_regime(self.lambda, mu, false) {
            return Some(Err(e));
        }
        let mut best: Option<(f64, f64)> = None;
        for p in &self.pieces {
            let qa = p.a + 0.5 / mu;
            let qb = p.b - x / mu;
            let candidates: Vec<f64> = if qa > 0.0 {
                vec![(-qb / (2.0 * qa)).clamp(p.lo, p.hi)]
            } else {
                if p.lo.is_infinite() || p.hi.is_infinite() {
                    return Some(Err(Error::Bracket(format!(
                        "prox objective unbounded below on [{}, {}]",
                        p.lo, p.hi
                    ))));
                }
                vec![p.lo, p.hi]
            };
            for y in candidates {
                let v = p.eval(y) + (y - x) * (y - x) / (2.0 * mu);
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((y, v));
                }
            }
        }
        best.map(|(y, _)| Ok(y))
    }
}
