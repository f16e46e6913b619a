//! Constructive operator families with known moduli.

use super::LinearOp;
use crate::error::{Error, Result};
use crate::graph::{GraphPoint, OperatorGraph};
use crate::modulus::Modulus;
use crate::sampler::PairSampler;
use crate::sets::BoxSet;
use crate::vector::Vector;

/// Block-diagonal `N` with 2×2 blocks `[[0, −1], [1, 0]]`: `Nᵀ = −N`, `N² = −I`.
pub fn block_rotation(n: usize) -> Result<LinearOp> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "rotation needs an even dimension (N² = −I has no real solution for n = {n})"
        )));
    }
    let mut m = LinearOp::zeros(n);
    for b in (0..n).step_by(2) {
        m.set(b, b + 1, -1.0);
        m.set(b + 1, b, 1.0);
    }
    Ok(m)
}

/// `a·I + b·N`, with optimal moduli `a` (monotone) and `a/(a² + b²)` (comonotone).
pub fn scaled_rotation(a: f64, b: f64, n: usize) -> Result<LinearOp> {
    Ok(LinearOp::identity(n).lin_comb(a, &block_rotation(n)?, b))
}

#[derive(Debug, Clone)]
pub struct RotationFamily {
    /// `T_λ = (1−λ)I + λN`
    pub t: LinearOp,
    /// `A_λ = T_λ⁻¹ − I`
    pub a: LinearOp,
    pub rho_mono: f64,
    pub rho_comono: Modulus,
}

/// The averaged rotation family `T_λ = (1−λ)I + λN` and the operator whose resolvent it is.
pub fn rotation_family(lambda: f64, n: usize) -> Result<RotationFamily> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::Parameter(format!("lambda must lie in [0, 1), got {lambda}")));
    }
    let rot = block_rotation(n)?;
    let id = LinearOp::identity(n);
    let denom = (1.0 - lambda).powi(2) + lambda * lambda;
    let t = id.lin_comb(1.0 - lambda, &rot, lambda);
    let c = lambda / denom;
    let a = id.lin_comb(c * (1.0 - 2.0 * lambda), &rot, -c);
    let rho_mono = lambda * (1.0 - 2.0 * lambda) / denom;
    let rho_comono = if lambda == 0.0 {
        Modulus::INFINITY
    } else {
        Modulus::finite((1.0 - 2.0 * lambda) / (2.0 * lambda))
    };
    Ok(RotationFamily {
        t,
        a,
        rho_mono,
        rho_comono,
    })
}

#[derive(Debug, Clone)]
pub enum ProjectionOperator {
    Linear(LinearOp),
    /// `α = ½`: the operator is the normal cone `N_U`, which is set-valued.
    NormalCone,
}

#[derive(Debug, Clone)]
pub struct ProjectionFamily {
    pub alpha: f64,
    /// `P_U`
    pub projector: LinearOp,
    /// `T_α = (1 − 2α)I + 2αP_U`
    pub t: LinearOp,
    /// `A_α = T_α⁻¹ − I`
    pub a: ProjectionOperator,
    /// `1/(2α) − 1`
    pub rho_comono: f64,
}

/// The α-conically nonexpansive family `T_α = (1−α)Id + α(2P_U − Id)`.
pub fn projection_family(alpha: f64, u_basis: &[Vector]) -> Result<ProjectionFamily> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Parameter(format!("alpha must be positive, got {alpha}")));
    }
    let n = u_basis
        .first()
        .map(Vector::dim)
        .ok_or_else(|| Error::Parameter("subspace basis must be non-empty".into()))?;
    let q = orthonormalize(n, u_basis)?;
    let projector = LinearOp::sum_outer(n, &q);
    let id = LinearOp::identity(n);
    let t = id.lin_comb(1.0 - 2.0 * alpha, &projector, 2.0 * alpha);
    let a = if alpha == 0.5 {
        ProjectionOperator::NormalCone
    } else {
        let complement = id.lin_comb(1.0, &projector, -1.0);
        ProjectionOperator::Linear(complement.scale(2.0 * alpha / (1.0 - 2.0 * alpha)))
    };
    Ok(ProjectionFamily {
        alpha,
        projector,
        t,
        a,
        rho_comono: 1.0 / (2.0 * alpha) - 1.0,
    })
}

fn orthonormalize(n: usize, basis: &[Vector]) -> Result<Vec<Vec<f64>>> {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(basis.len());
    for (k, b) in basis.iter().enumerate() {
        if b.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                got: b.dim(),
            });
        }
        let mut v = b.as_slice().to_vec();
        // Two passes of modified Gram–Schmidt.
        for _ in 0..2 {
            for e in &q {
                let c: f64 = v.iter().zip(e).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(e).for_each(|(a, b)| *a -= c * b);
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm <= 1e-10 * b.norm().max(f64::MIN_POSITIVE) {
            return Err(Error::Parameter(format!("basis vector {k} is linearly dependent")));
        }
        q.push(v.into_iter().map(|a| a / norm).collect());
    }
    Ok(q)
}

/// `A = B⁻¹` with `B = −Id − rP_C`: maximally `−(1+r)`-comonotone, and
/// its resolvent fails to be single-valued unless `C = Rⁿ` and `r > 0`.
#[derive(Debug, Clone)]
pub struct CounterexampleFamily {
    pub r: f64,
    pub c: BoxSet,
}

pub fn counterexample_family(r: f64, c: BoxSet) -> Result<CounterexampleFamily> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Parameter(format!("r must be >= 0, got {r}")));
    }
    Ok(CounterexampleFamily { r, c })
}

impl CounterexampleFamily {
    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    /// `ρ = −(1 + r)`
    pub fn rho(&self) -> f64 {
        -(1.0 + self.r)
    }

    /// `B(x) = −x − rP_C(x)`
    pub fn b(&self, x: &Vector) -> Vector {
        x.lin_comb(-1.0, &self.c.project(x), -self.r)
    }

    /// `ran(Id + A) = −rC`
    pub fn range_of_id_plus_a(&self) -> BoxSet {
        self.c.scaled(-self.r)
    }

    /// `gra A = {(B(x), x)}` at the given points.
    pub fn graph_at(&self, points: &[Vector]) -> Result<OperatorGraph> {
        let pairs = points
            .iter()
            .map(|x| GraphPoint::new(self.b(x), x.clone()))
            .collect();
        OperatorGraph::from_pairs(self.dim(), pairs)
    }

    /// Samples `count` graph points with the sampler's radii and seed.
    pub fn sample_graph(&self, sampler: &PairSampler, count: usize) -> Result<OperatorGraph> {
        self.graph_at(&sampler.sample_points(self.dim(), count))
    }
}
