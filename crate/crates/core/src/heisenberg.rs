//! Position and momentum operators of the deformed Heisenberg algebra,
//! expressed through deformed ladder operators.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{interior_residual, FockRep};
use crate::op::{DenseOp, DiagonalOp};
use crate::scalar::Real;
use crate::structure::{hg_functions_pq, DeformationParams};

/// Coefficient functions of `X = f(N)a⁻ + g(N)a⁺`, `P = i(k(N)a⁺ - h(N)a⁻)`
/// in the single-parameter solution family, with `q` replaced by `Q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientQuadruple<T> {
    ratio: T,
}

impl<T: Real> CoefficientQuadruple<T> {
    fn power(&self, n: i64) -> T {
        self.ratio.powi(n as i32) * T::FRAC_1_SQRT_2()
    }

    pub fn f(&self, n: i64) -> T {
        self.power(n)
    }

    pub fn g(&self, n: i64) -> T {
        self.power(2 * n)
    }

    pub fn h(&self, n: i64) -> T {
        self.power(2 * n)
    }

    pub fn k(&self, n: i64) -> T {
        self.power(n)
    }

    /// Largest relative violation of
    /// `h(n+1)/h(n) = Q f(n+1)/f(n)` and `k(n-1)/k(n) = Q g(n-1)/g(n)`
    /// over `1 ≤ n ≤ horizon`.
    pub fn recurrence_residual(&self, horizon: usize) -> T {
        let q = self.ratio;
        let mut worst = T::zero();
        for n in 1..=horizon as i64 {
            let lhs = self.h(n + 1) / self.h(n);
            let rhs = q * self.f(n + 1) / self.f(n);
            worst = worst.max(((lhs - rhs) / rhs).abs());
            let lhs = self.k(n - 1) / self.k(n);
            let rhs = q * self.g(n - 1) / self.g(n);
            worst = worst.max(((lhs - rhs) / rhs).abs());
        }
        worst
    }
}

pub fn solve_coefficients<T: Real>(params: &DeformationParams<T>) -> CoefficientQuadruple<T> {
    CoefficientQuadruple {
        ratio: params.ratio(),
    }
}

/// Position and momentum matrices together with the data they were built from.
#[derive(Clone, Debug)]
pub struct XPPair<T> {
    pub x: DenseOp<T>,
    pub p: DenseOp<T>,
    pub params: DeformationParams<T>,
    pub rep: FockRep<T>,
}

fn ratio_power_op<T: Real>(dim: usize, ratio: T, step: i32) -> DiagonalOp<T> {
    DiagonalOp::from_fn(dim, |k| ratio.powi(step * k as i32))
}

fn structure_matches<T: Real>(rep: &FockRep<T>, params: &DeformationParams<T>) -> bool {
    match rep.structure().deformation() {
        Some(d) => d.q() == params.q() && d.p() == params.p(),
        None => false,
    }
}

/// `X = (Q^{2N} a⁺ + Q^N a⁻)/√2`, `P = i(Q^N a⁺ - Q^{2N} a⁻)/√2`.
pub fn build_xp<T: Real>(rep: &FockRep<T>, params: &DeformationParams<T>) -> Result<XPPair<T>> {
    if !structure_matches(rep, params) {
        return Err(Error::StructureMismatch);
    }
    let dim = rep.dim();
    let ladders = rep.ladders();
    let q1 = ratio_power_op(dim, params.ratio(), 1);
    let q2 = ratio_power_op(dim, params.ratio(), 2);
    let s = T::FRAC_1_SQRT_2();
    let x = (&(&q2 * &ladders.raise) + &(&q1 * &ladders.lower)).scale_real(s);
    let p = (&(&q1 * &ladders.raise) - &(&q2 * &ladders.lower)).scale(Complex::new(T::zero(), s));
    Ok(XPPair {
        x,
        p,
        params: *params,
        rep: rep.clone(),
    })
}

/// Recovers `a⁻ = d(Q^{-N} X + iP)` and `a⁺ = d(X - i Q^{-N} P)` with
/// `d = √2 / (1 + Q^{2N})`.
pub fn invert_to_ladders<T: Real>(pair: &XPPair<T>) -> (DenseOp<T>, DenseOp<T>) {
    let dim = pair.x.dim();
    let ratio = pair.params.ratio();
    let d = DiagonalOp::from_fn(dim, |k| T::SQRT_2() / (T::one() + ratio.powi(2 * k as i32)));
    let inv = ratio_power_op(dim, ratio, -1);
    let i = Complex::new(T::zero(), T::one());
    let lower = &d * &(&(&inv * &pair.x) + &pair.p.scale(i));
    let raise = &d * &(&pair.x - &(&inv * &pair.p).scale(i));
    (lower, raise)
}

/// Named residuals of the deformed Heisenberg and oscillator relations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HaResiduals {
    /// Interior residual of `qXP - pPX - i`.
    pub qp_commutator: f64,
    /// Interior residual of `pXP - qPX - i`, the ordering realized by the
    /// operators built in [`build_xp`].
    pub realized_commutator: f64,
    /// `max_n |H(n)Φ(n+1) - G(n)Φ(n) - 1|` over the truncation.
    pub hg_identity: f64,
}

fn commutator_residual<T: Real>(pair: &XPPair<T>, left: T, right: T) -> Result<T> {
    let xp = &pair.x * &pair.p;
    let px = &pair.p * &pair.x;
    let i = DenseOp::identity(pair.x.dim()).scale(Complex::new(T::zero(), T::one()));
    let op = &(&xp.scale_real(left) - &px.scale_real(right)) - &i;
    interior_residual(&op, 2)
}

pub fn verify_ha_residuals<T: Real>(pair: &XPPair<T>) -> Result<HaResiduals> {
    let (q, p) = (pair.params.q(), pair.params.p());
    let qp = commutator_residual(pair, q, p)?;
    let realized = commutator_residual(pair, p, q)?;
    let mut hg = T::zero();
    for n in 0..pair.rep.dim() {
        let (h, g) = hg_functions_pq(n, &pair.params);
        let r = h * pair.rep.phi(n + 1) - g * pair.rep.phi(n) - T::one();
        hg = hg.max(r.abs());
    }
    let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
    Ok(HaResiduals {
        qp_commutator: f(qp),
        realized_commutator: f(realized),
        hg_identity: f(hg),
    })
}
