//! Truncated Fock space and ladder operators built from a structure function.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::op::{DenseOp, DiagonalOp};
use crate::scalar::Real;
use crate::structure::StructureFunction;

/// Smallest supported truncation.
pub const MIN_DIM: usize = 4;

/// Default truncation used by verification routines.
pub const DEFAULT_DIM: usize = 64;

/// The span of `|0⟩ … |D-1⟩` together with the structure function whose
/// square roots give the ladder amplitudes.
#[derive(Clone, Debug)]
pub struct FockRep<T> {
    dim: usize,
    structure: StructureFunction<T>,
    phi: Vec<T>,
}

/// Lowering, raising and number operators of a [`FockRep`].
#[derive(Clone, Debug)]
pub struct Ladders<T> {
    pub lower: DenseOp<T>,
    pub raise: DenseOp<T>,
    pub number: DiagonalOp<T>,
}

impl<T: Real> FockRep<T> {
    /// Validates the truncation and caches `Φ(0) … Φ(D+1)`.
    pub fn new(dim: usize, structure: StructureFunction<T>) -> Result<Self> {
        if dim < MIN_DIM {
            return Err(Error::DimensionTooSmall(dim));
        }
        let phi = (0..=dim + 1)
            .map(|n| structure.eval(n))
            .collect::<Result<Vec<_>>>()?;
        for (n, &v) in phi.iter().enumerate().take(dim + 1) {
            if v < T::zero() || v.is_nan() {
                return Err(Error::NegativeStructureValue {
                    n,
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self {
            dim,
            structure,
            phi,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn structure(&self) -> &StructureFunction<T> {
        &self.structure
    }

    /// Cached `Φ(n)` for `n ≤ D + 1`.
    #[inline]
    pub fn phi(&self, n: usize) -> T {
        self.phi[n]
    }

    /// The operator function `Φ(N + shift)`.
    pub fn phi_op(&self, shift: usize) -> DiagonalOp<T> {
        DiagonalOp::from_fn(self.dim, |k| self.phi[k + shift])
    }

    /// Largest `|Φ(n)|` over the cached range; the natural scale of
    /// residuals built from ladder bilinears.
    pub fn phi_scale(&self) -> T {
        self.phi.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn ladders(&self) -> Ladders<T> {
        let d = self.dim;
        let amp = |n: usize| Complex::from(self.phi[n].sqrt());
        let lower = DenseOp::from_fn(d, |i, j| {
            if j == i + 1 {
                amp(j)
            } else {
                Complex::new(T::zero(), T::zero())
            }
        });
        let raise = lower.adjoint();
        Ladders {
            lower,
            raise,
            number: DiagonalOp::number(d),
        }
    }
}

/// Ladder operators of `space`.
pub fn make_ladders<T: Real>(space: &FockRep<T>) -> Ladders<T> {
    space.ladders()
}

/// Max-norm of `op` restricted to the columns `0 … D-1-degree`.
pub fn interior_residual<T: Real>(op: &DenseOp<T>, ladder_degree: usize) -> Result<T> {
    let dim = op.dim();
    if ladder_degree + 1 >= dim {
        return Err(Error::DegreeTooLarge {
            degree: ladder_degree,
            dim,
        });
    }
    Ok(op.max_abs_columns(dim - ladder_degree))
}

/// [`interior_residual`] divided by `max(1, scale)`.
pub fn scaled_interior_residual<T: Real>(
    op: &DenseOp<T>,
    ladder_degree: usize,
    scale: T,
) -> Result<T> {
    Ok(interior_residual(op, ladder_degree)? / scale.abs().max(T::one()))
}
