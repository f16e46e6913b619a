//! Monotonicity, comonotonicity, and conic nonexpansiveness of operators and
//! their resolvents, with prox computations for hypoconvex functions.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` rejects NaN too

pub mod cert;
pub mod cli;
pub mod correspond;
pub mod error;
pub mod graph;
pub mod iterate;
pub mod hypoconvex;
pub mod linear;
pub mod map;
pub mod modulus;
pub mod monotone;
pub mod resolvent;
pub mod sampler;
pub mod sets;
pub mod vector;

pub use cert::{CertReport, Property, Witness, DEFAULT_TOL};
pub use error::{Error, Result};
pub use graph::{GraphPoint, OperatorGraph};
pub use linear::LinearOp;
pub use map::PointMap;
pub use modulus::Modulus;
pub use sampler::PairSampler;
pub use vector::Vector;
