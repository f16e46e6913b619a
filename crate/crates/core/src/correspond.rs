//! Regime table relating a ρ-comonotone operator `A`, its inverse, and both resolvents.
//!
//! | ρ              | A                 | A⁻¹                  | J_A                     | J_{A⁻¹}             |
//! |----------------|-------------------|----------------------|-------------------------|---------------------|
//! | ρ > 0          | ρ-cocoercive      | ρ-strongly monotone  | 1/(2(ρ+1))-conic        | (ρ+1)-cocoercive    |
//! | ρ = 0          | monotone          | monotone             | firmly nonexpansive     | firmly nonexpansive |
//! | −½ < ρ < 0     | ρ-comonotone      | ρ-monotone           | 1/(2(ρ+1))-averaged     | (ρ+1)-cocoercive    |
//! | ρ = −½         | ρ-comonotone      | ρ-monotone           | nonexpansive            | ½-cocoercive        |
//! | −1 < ρ < −½    | ρ-comonotone      | ρ-monotone           | 1/(2(ρ+1))-conic        | (ρ+1)-cocoercive    |
//! | ρ ≤ −1         | ρ-comonotone      | ρ-monotone           | may be multivalued      | may be multivalued  |

use serde::Serialize;

use crate::cert::CertReport;
use crate::error::Result;
use crate::graph::{invert_graph, OperatorGraph};
use crate::linear::{
    is_rho_comonotone_linear, optimal_comonotone_modulus_linear, resolvent_linear, LinearOp,
};
use crate::map::{Blend, PointMap};
use crate::modulus::Modulus;
use crate::monotone::{check_rho_comonotone, check_rho_monotone};
use crate::resolvent::{
    certify_averaged, certify_cocoercive, certify_conic, certify_nonexpansive,
    reflected_correspondence_report, ReflectedReport,
};
use crate::sampler::PairSampler;

/// Distance within which ρ* snaps onto a regime boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Graph points sampled from `A` for the operator-side claims.
const GRAPH_POINTS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// ρ > 0
    Cocoercive,
    /// ρ = 0
    Monotone,
    /// −½ < ρ < 0
    Averaged,
    /// ρ = −½
    Nonexpansive,
    /// −1 < ρ < −½
    Conic,
    /// ρ ≤ −1
    MaybeMultivalued,
}

impl Regime {
    /// Row assignment, with boundaries resolved within [`BOUNDARY_TOL`].
    pub fn of(rho: f64) -> Self {
        if rho <= -1.0 + BOUNDARY_TOL {
            Regime::MaybeMultivalued
        } else if (rho + 0.5).abs() <= BOUNDARY_TOL {
            Regime::Nonexpansive
        } else if rho.abs() <= BOUNDARY_TOL {
            Regime::Monotone
        } else if rho > 0.0 {
            Regime::Cocoercive
        } else if rho > -0.5 {
            Regime::Averaged
        } else {
            Regime::Conic
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::Cocoercive => "ρ-cocoercive / strongly monotone",
            Regime::Monotone => "monotone",
            Regime::Averaged => "−½ < ρ < 0",
            Regime::Nonexpansive => "ρ = −½",
            Regime::Conic => "−1 < ρ < −½",
            Regime::MaybeMultivalued => "ρ ≤ −1",
        }
    }

    /// The value of ρ used for certification: boundaries snap exactly, and
    /// `ρ* = +∞` (only `A = 0`) is certified at ρ = 1, since every finite ρ holds.
    fn certified_rho(self, rho: f64) -> f64 {
        match self {
            Regime::Monotone => 0.0,
            Regime::Nonexpansive => -0.5,
            _ if rho == f64::INFINITY => 1.0,
            _ => rho,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    /// `A`, `A^-1`, `J_A`, or `J_A^-1`.
    pub subject: &'static str,
    pub statement: String,
    pub holds: bool,
    /// Sampled evidence; absent for exact eigenvalue verdicts.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<CertReport>,
}

impl Claim {
    fn sampled(subject: &'static str, statement: String, report: CertReport) -> Self {
        Self {
            subject,
            statement,
            holds: report.passed,
            report: Some(report),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceReport {
    pub rho_star: Modulus,
    pub rho_certified: f64,
    pub regime: Regime,
    pub row: &'static str,
    pub resolvent_defined: bool,
    pub claims: Vec<Claim>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reflected: Option<ReflectedReport>,
}

/// Assigns `A`'s row and verifies every claim in it.
pub fn correspondence_report(a: &LinearOp, sampler: &PairSampler, tol: f64) -> Result<CorrespondenceReport> {
    correspondence_report_with(a, sampler, tol, false)
}

/// As [`correspondence_report`], optionally adding the reflected-resolvent report.
pub fn correspondence_report_with(
    a: &LinearOp,
    sampler: &PairSampler,
    tol: f64,
    reflected: bool,
) -> Result<CorrespondenceReport> {
    let rho_star = optimal_comonotone_modulus_linear(a);
    let regime = Regime::of(rho_star.value());
    let rho = regime.certified_rho(rho_star.value());
    let j = resolvent_linear(a).ok();
    let mut claims = Vec::new();

    if regime != Regime::MaybeMultivalued {
        let points = sampler.sample_points(a.n(), GRAPH_POINTS);
        let g = OperatorGraph::from_map(a.n(), &points, |x| a.apply(x))?;
        claims.push(Claim {
            subject: "A",
            statement: format!("{rho}-comonotone (exact)"),
            holds: is_rho_comonotone_linear(a, rho).holds,
            report: None,
        });
        claims.push(Claim::sampled("A", format!("{rho}-comonotone"), check_rho_comonotone(&g, rho, tol)?));
        claims.push(Claim::sampled("A^-1", format!("{rho}-monotone"), check_rho_monotone(&invert_graph(&g), rho, tol)?));

        let j = j.as_ref().expect("rho > -1 gives an invertible I + A");
        let j_inv = Blend::complement(j);
        let alpha = 1.0 / (2.0 * (rho + 1.0));
        let beta = rho + 1.0;
        match regime {
            Regime::Cocoercive | Regime::Averaged | Regime::Conic => {
                claims.push(Claim::sampled("J_A", format!("{alpha}-conically nonexpansive"), certify_conic(j, alpha, sampler, tol)?));
                if alpha < 1.0 {
                    claims.push(Claim::sampled("J_A", format!("{alpha}-averaged"), certify_averaged(j, alpha, sampler, tol)?));
                }
                claims.push(Claim::sampled("J_A^-1", format!("{beta}-cocoercive"), certify_cocoercive(&j_inv, beta, sampler, tol)?));
            }
            Regime::Monotone => {
                claims.push(Claim::sampled("J_A", "firmly nonexpansive".into(), certify_averaged(j, 0.5, sampler, tol)?));
                claims.push(Claim::sampled("J_A^-1", "firmly nonexpansive".into(), certify_averaged(&j_inv, 0.5, sampler, tol)?));
            }
            Regime::Nonexpansive => {
                claims.push(Claim::sampled("J_A", "nonexpansive".into(), certify_nonexpansive(j, sampler, tol)?));
                claims.push(Claim::sampled("J_A^-1", "0.5-cocoercive".into(), certify_cocoercive(&j_inv, 0.5, sampler, tol)?));
            }
            Regime::MaybeMultivalued => unreachable!(),
        }
    }

    let reflected = match (&j, reflected) {
        (Some(_), true) => Some(reflected_correspondence_report(a, sampler, tol)?),
        _ => None,
    };
    let passed = claims.iter().all(|c| c.holds);
    Ok(CorrespondenceReport {
        rho_star,
        rho_certified: rho,
        regime,
        row: regime.label(),
        resolvent_defined: j.is_some(),
        claims,
        passed,
        reflected,
    })
}
