//! Finite samples of set-valued operators and the graph transforms between
//! an operator, its inverse, shifts, and resolvents.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::Vector;

/// One point `(x, u)` with `u ∈ A(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphPoint {
    pub x: Vector,
    pub u: Vector,
}

impl GraphPoint {
    pub fn new(x: Vector, u: Vector) -> Self {
        Self { x, u }
    }
}

/// A finite sample `{(x, u)}` of the graph of an operator on Rⁿ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorGraph {
    dim: usize,
    pairs: Vec<GraphPoint>,
}

#[derive(Deserialize)]
struct RawGraph {
    dim: usize,
    pairs: Vec<GraphPoint>,
}

impl<'de> Deserialize<'de> for OperatorGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawGraph::deserialize(d)?;
        OperatorGraph::from_pairs(raw.dim, raw.pairs).map_err(serde::de::Error::custom)
    }
}

impl OperatorGraph {
    pub fn empty(dim: usize) -> Result<Self> {
        Self::from_pairs(dim, Vec::new())
    }

    pub fn from_pairs(dim: usize, pairs: Vec<GraphPoint>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::MalformedGraph("dim must be positive".into()));
        }
        for (i, p) in pairs.iter().enumerate() {
            if p.x.dim() != dim || p.u.dim() != dim {
                return Err(Error::MalformedGraph(format!(
                    "pair {i} has dimensions ({}, {}), graph dim is {dim}",
                    p.x.dim(),
                    p.u.dim()
                )));
            }
            if !p.x.is_finite() || !p.u.is_finite() {
                return Err(Error::MalformedGraph(format!("pair {i} has non-finite entries")));
            }
        }
        Ok(Self { dim, pairs })
    }

    /// Samples the graph of a single-valued map at the given points.
    pub fn from_map<F>(dim: usize, points: &[Vector], map: F) -> Result<Self>
    where
        F: Fn(&Vector) -> Vector,
    {
        let pairs = points
            .iter()
            .map(|x| GraphPoint::new(x.clone(), map(x)))
            .collect();
        Self::from_pairs(dim, pairs)
    }

    pub fn push(&mut self, x: Vector, u: Vector) -> Result<()> {
        for v in [&x, &u] {
            if v.dim() != self.dim {
                return Err(Error::Dimension {
                    expected: self.dim,
                    got: v.dim(),
                });
            }
        }
        self.pairs.push(GraphPoint::new(x, u));
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[GraphPoint] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn map_pairs(&self, f: impl Fn(&GraphPoint) -> GraphPoint) -> OperatorGraph {
        OperatorGraph {
            dim: self.dim,
            pairs: self.pairs.iter().map(f).collect(),
        }
    }
}

/// `gra A⁻¹`: `(x, u) ↦ (u, x)`.
pub fn invert_graph(g: &OperatorGraph) -> OperatorGraph {
    g.map_pairs(|p| GraphPoint::new(p.u.clone(), p.x.clone()))
}

/// `gra(A⁻¹ − ρ Id)`: `(x, u) ↦ (u, x − ρu)`.
pub fn rho_shift_graph(g: &OperatorGraph, rho: f64) -> OperatorGraph {
    g.map_pairs(|p| GraphPoint::new(p.u.clone(), p.x.lin_comb(1.0, &p.u, -rho)))
}

/// Inverse of [`rho_shift_graph`]: `(x, u) ↦ (u + ρx, x)`.
pub fn rho_unshift_graph(g: &OperatorGraph, rho: f64) -> OperatorGraph {
    g.map_pairs(|p| GraphPoint::new(p.u.lin_comb(1.0, &p.x, rho), p.x.clone()))
}

/// `gra J_A`: `(x, u) ↦ (x + u, x)`.
pub fn resolvent_graph(g: &OperatorGraph) -> OperatorGraph {
    g.map_pairs(|p| GraphPoint::new(&p.x + &p.u, p.x.clone()))
}

/// `gra J_{A⁻¹} = gra(Id − J_A)`: `(x, u) ↦ (x + u, u)`.
pub fn complement_resolvent_graph(g: &OperatorGraph) -> OperatorGraph {
    g.map_pairs(|p| GraphPoint::new(&p.x + &p.u, p.u.clone()))
}

/// `gra R_A` with `R_A = 2J_A − Id`: `(x, u) ↦ (x + u, x − u)`.
pub fn reflected_resolvent_graph(g: &OperatorGraph) -> OperatorGraph {
    g.map_pairs(|p| GraphPoint::new(&p.x + &p.u, &p.x - &p.u))
}

/// Recovers `gra A` from a sampled resolvent graph `{(z, J_A z)}`:
/// `(z, j) ↦ (j, z − j)`.
pub fn minty_graph(resolvent: &OperatorGraph) -> OperatorGraph {
    resolvent.map_pairs(|p| GraphPoint::new(p.u.clone(), &p.x - &p.u))
}
