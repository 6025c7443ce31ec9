//! Metric factors `η(N)` and pseudo-Hermiticity checks.
//!
//! All factors used here are powers `Q^{e(n)}` whose exponent is a quadratic
//! polynomial in `n` with rational coefficients. Similarity transforms
//! `η⁻¹·O·η` only ever need `Q^{e(j) - e(i)}`, so the exponent difference is
//! formed in exact integer arithmetic before a single exponentiation; no
//! factor `Q^{e(n)}` is materialized for large `n`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::interior_residual;
use crate::heisenberg::XPPair;
use crate::op::{DenseOp, DiagonalOp};
use crate::scalar::Real;
use crate::structure::DeformationParams;

/// Exponent `(a n² + b n) / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticExponent {
    pub a: i64,
    pub b: i64,
    pub den: i64,
}

impl QuadraticExponent {
    pub const fn new(a: i64, b: i64, den: i64) -> Self {
        Self { a, b, den }
    }

    /// Integer numerator `a n² + b n`.
    #[inline]
    pub fn numerator(&self, n: usize) -> i64 {
        let n = n as i64;
        self.a * n * n + self.b * n
    }

    pub fn value<T: Real>(&self, n: usize) -> T {
        T::from_int(self.numerator(n)) / T::from_int(self.den)
    }

    pub fn negated(&self) -> Self {
        Self::new(-self.a, -self.b, self.den)
    }

    /// `Q^{e(n)}`.
    pub fn power<T: Real>(&self, ratio: T, n: usize) -> T {
        (self.value::<T>(n) * ratio.ln()).exp()
    }

    /// The diagonal `Q^{e(N)}` on `dim` states.
    pub fn diagonal<T: Real>(&self, ratio: T, dim: usize) -> DiagonalOp<T> {
        DiagonalOp::from_fn(dim, |n| self.power(ratio, n))
    }

    /// `Q^{-e(N)} · op · Q^{e(N)}`.
    pub fn similarity<T: Real>(&self, op: &DenseOp<T>, ratio: T) -> DenseOp<T> {
        let ln_q = ratio.ln();
        let den = T::from_int(self.den);
        DenseOp::from_fn(op.dim(), |i, j| {
            let z = op.get(i, j);
            if z.re == T::zero() && z.im == T::zero() {
                return z;
            }
            let diff = self.numerator(j) - self.numerator(i);
            z.scale((T::from_int(diff) / den * ln_q).exp())
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EtaKind {
    /// `Q^{n(n+3)/2}`.
    EtaX,
    /// `Q^{n(3-n)/2}`.
    EtaP,
    /// `Q^{3n}`.
    EtaH,
    /// `Q^{3n/2}`.
    EtaTilde,
}

impl EtaKind {
    pub fn exponent(self) -> QuadraticExponent {
        match self {
            Self::EtaX => QuadraticExponent::new(1, 3, 2),
            Self::EtaP => QuadraticExponent::new(-1, 3, 2),
            Self::EtaH => QuadraticExponent::new(0, 6, 2),
            Self::EtaTilde => QuadraticExponent::new(0, 3, 2),
        }
    }

    /// Exponent `s(n)` of the one-step ratio `η(n+1)/η(n) = Q^{s(n)}`.
    fn step_exponent<T: Real>(self, n: usize) -> T {
        let n = T::from_index(n);
        match self {
            Self::EtaX => n + T::lit(2.0),
            Self::EtaP => T::one() - n,
            Self::EtaH => T::lit(3.0),
            Self::EtaTilde => T::lit(1.5),
        }
    }
}

/// A positive metric factor `η(N)` on a truncation of dimension `dim`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaFactor<T> {
    pub kind: EtaKind,
    ratio: T,
    dim: usize,
}

impl<T: Real> EtaFactor<T> {
    pub fn new(kind: EtaKind, params: &DeformationParams<T>, dim: usize) -> Self {
        Self {
            kind,
            ratio: params.ratio(),
            dim,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, n: usize) -> T {
        self.kind.exponent().power(self.ratio, n)
    }

    pub fn to_diagonal(&self) -> DiagonalOp<T> {
        self.kind.exponent().diagonal(self.ratio, self.dim)
    }

    /// `η⁻¹ · op · η`.
    pub fn conjugate(&self, op: &DenseOp<T>) -> Result<DenseOp<T>> {
        if op.dim() != self.dim {
            return Err(Error::DimensionMismatch(op.dim(), self.dim));
        }
        Ok(self.kind.exponent().similarity(op, self.ratio))
    }
}

/// Largest relative violation of the one-step recurrence
/// `η(n+1) = η(n)·Q^{s(n)}` for `n < horizon`, evaluated from the closed
/// form in log space.
pub fn eta_recurrence_check<T: Real>(
    kind: EtaKind,
    params: &DeformationParams<T>,
    horizon: usize,
) -> T {
    let ln_q = params.ratio().ln();
    let e = kind.exponent();
    let mut worst = T::zero();
    for n in 0..horizon {
        let lhs = e.value::<T>(n + 1) * ln_q;
        let rhs = e.value::<T>(n) * ln_q + kind.step_exponent::<T>(n) * ln_q;
        worst = worst.max((lhs - rhs).exp_m1().abs());
    }
    worst
}

/// Interior residual of `op† - η⁻¹·op·η`.
pub fn pseudo_adjoint_residual<T: Real>(
    op: &DenseOp<T>,
    eta: &EtaFactor<T>,
    ladder_degree: usize,
) -> Result<T> {
    let conj = eta.conjugate(op)?;
    interior_residual(&op.adjoint().try_sub(&conj)?, ladder_degree)
}

/// Interior residual of `op† - op`.
pub fn hermiticity_residual<T: Real>(op: &DenseOp<T>, ladder_degree: usize) -> Result<T> {
    interior_residual(&op.adjoint().try_sub(op)?, ladder_degree)
}

const TILDE_X: QuadraticExponent = QuadraticExponent::new(1, 0, 4);

/// `X̃ = Q^{-N²/4} X Q^{N²/4}`, `P̃ = Q^{N²/4} P Q^{-N²/4}`.
pub fn tilde_operators<T: Real>(pair: &XPPair<T>) -> (DenseOp<T>, DenseOp<T>) {
    let ratio = pair.params.ratio();
    (
        TILDE_X.similarity(&pair.x, ratio),
        TILDE_X.negated().similarity(&pair.p, ratio),
    )
}

/// `½(X̃² + P̃²)`.
pub fn tilde_hamiltonian<T: Real>(pair: &XPPair<T>) -> DenseOp<T> {
    let (xt, pt) = tilde_operators(pair);
    (&(&xt * &xt) + &(&pt * &pt)).scale(Complex::from(T::lit(0.5)))
}
