//! Single-valued, dimension-preserving maps `T: Rⁿ → Rⁿ`.

use crate::vector::Vector;

/// A deterministic total map on Rⁿ. Implementations must be reentrant.
pub trait PointMap {
    fn dim(&self) -> usize;
    fn apply(&self, x: &Vector) -> Vector;
}

impl<M: PointMap + ?Sized> PointMap for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &Vector) -> Vector {
        (**self).apply(x)
    }
}

impl<M: PointMap + ?Sized> PointMap for Box<M> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, x: &Vector) -> Vector {
        (**self).apply(x)
    }
}

/// Wraps a closure as a [`PointMap`].
pub struct FnMap<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&Vector) -> Vector> FnMap<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&Vector) -> Vector> PointMap for FnMap<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &Vector) -> Vector {
        (self.f)(x)
    }
}

/// `x ↦ c·x`
#[derive(Debug, Clone, Copy)]
pub struct ScaledIdentity {
    pub dim: usize,
    pub factor: f64,
}

impl ScaledIdentity {
    pub fn new(dim: usize, factor: f64) -> Self {
        Self { dim, factor }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(dim, 1.0)
    }
}

impl PointMap for ScaledIdentity {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &Vector) -> Vector {
        x.scale(self.factor)
    }
}

/// `x ↦ a·x + b·T(x)`. Covers `Id − T`, `2T − Id`, relaxations, and conic decompositions.
pub struct Blend<M> {
    id_coef: f64,
    map_coef: f64,
    inner: M,
}

impl<M: PointMap> Blend<M> {
    pub fn new(id_coef: f64, map_coef: f64, inner: M) -> Self {
        Self {
            id_coef,
            map_coef,
            inner,
        }
    }

    /// `Id − T`
    pub fn complement(inner: M) -> Self {
        Self::new(1.0, -1.0, inner)
    }

    /// `2T − Id`
    pub fn reflect(inner: M) -> Self {
        Self::new(-1.0, 2.0, inner)
    }

    /// `(1 − t)Id + tT`
    pub fn relax(inner: M, t: f64) -> Self {
        Self::new(1.0 - t, t, inner)
    }

    /// `−T`
    pub fn negate(inner: M) -> Self {
        Self::new(0.0, -1.0, inner)
    }
}

impl<M: PointMap> PointMap for Blend<M> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, x: &Vector) -> Vector {
        x.lin_comb(self.id_coef, &self.inner.apply(x), self.map_coef)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blends() {
        let half = ScaledIdentity::new(2, 0.5);
        let x = Vector::new(vec![2.0, -4.0]).unwrap();
        assert_eq!(Blend::complement(half).apply(&x).as_slice(), &[1.0, -2.0]);
        assert_eq!(Blend::reflect(half).apply(&x).as_slice(), &[0.0, 0.0]);
        assert_eq!(Blend::relax(half, 0.5).apply(&x).as_slice(), &[1.5, -3.0]);
        assert_eq!(Blend::negate(&half).apply(&x).as_slice(), &[-1.0, 2.0]);
        let f = FnMap::new(2, |v: &Vector| v.scale(3.0));
        assert_eq!(f.apply(&x).as_slice(), &[6.0, -12.0]);
    }
}
