//! Certification verdicts.
//!
//! Every inequality check reduces a set of pairwise slacks to a single
//! [`CertReport`]. Each slack is divided by a per-pair scale in the units of
//! the inequality to give a *margin*; a report passes iff its worst margin is
//! at least `-tolerance`. Ties are broken by first index.
//!
//! Scales are relative: they are built from the pair's differences and
//! floored at [`RELATIVE_FLOOR`] times the squared magnitude of the points,
//! which bounds the effect of rounding on near-coincident pairs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::vector::Vector;

/// Default slack tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Scale floor relative to the squared magnitude of the points in a pair.
pub const RELATIVE_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    RhoMonotone,
    RhoComonotone,
    ConicNonexpansive,
    Nonexpansive,
    Averaged,
    Cocoercive,
    Lipschitz,
    StronglyMonotone,
    SingleValued,
    Hypoconvex,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::RhoMonotone => "rho_monotone",
            Property::RhoComonotone => "rho_comonotone",
            Property::ConicNonexpansive => "conic_nonexpansive",
            Property::Nonexpansive => "nonexpansive",
            Property::Averaged => "averaged",
            Property::Cocoercive => "cocoercive",
            Property::Lipschitz => "lipschitz",
            Property::StronglyMonotone => "strongly_monotone",
            Property::SingleValued => "single_valued",
            Property::Hypoconvex => "hypoconvex",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The two inputs that produced the worst margin.
///
/// For graph checks `x`/`y` are the two first coordinates and `u`/`v` the
/// matching second coordinates; for map checks `u`/`v` hold `T(x)`/`T(y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vector,
    pub y: Vector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vector>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub property: Property,
    pub parameter: f64,
    pub passed: bool,
    #[serde(serialize_with = "crate::modulus::serialize_extended", deserialize_with = "crate::modulus::deserialize_extended")]
    pub worst_margin: f64,
    pub witness: Option<Witness>,
    pub samples_used: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CertReport {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Streaming min-reduction over pair margins.
#[derive(Debug)]
pub(crate) struct MarginTracker {
    property: Property,
    parameter: f64,
    tol: f64,
    worst: f64,
    witness: Option<Witness>,
    samples: usize,
}

impl MarginTracker {
    pub fn new(property: Property, parameter: f64, tol: f64) -> Self {
        Self {
            property,
            parameter,
            tol,
            worst: f64::INFINITY,
            witness: None,
            samples: 0,
        }
    }

    /// Records one pair. A NaN margin counts as an unbounded violation.
    pub fn observe(&mut self, margin: f64, witness: impl FnOnce() -> Witness) {
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        self.samples += 1;
        if self.witness.is_none() || margin < self.worst {
            self.worst = margin;
            self.witness = Some(witness());
        }
    }

    pub fn finish(self) -> CertReport {
        // No pairs examined: the universally quantified inequality holds vacuously.
        let worst = if self.samples == 0 { 0.0 } else { self.worst };
        CertReport {
            property: self.property,
            parameter: self.parameter,
            passed: worst >= -self.tol,
            worst_margin: worst,
            witness: self.witness,
            samples_used: self.samples,
            seed: None,
        }
    }
}

/// `slack / scale`; a zero scale (all points at the origin) leaves the slack as is.
pub(crate) fn margin(slack: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        slack / scale
    } else {
        slack
    }
}
