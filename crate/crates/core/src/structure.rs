//! Deformation structure functions and deformed numbers.
//!
//! The nonstandard one-parameter structure function
//!
//! ```text
//! Φ_q(n) = 2 q^(-n) [n]_q (1 + q^(1-n)) / ((1 + q^(2n-2)) (1 + q^(2n)))
//! ```
//!
//! and its two-parameter parent `Φ_{q,p}` define the ladder amplitudes
//! `a⁺|n⟩ = √Φ(n+1) |n+1⟩`. Both have a removable singularity at `q = 1`
//! (resp. `q = p`), where the undeformed value is returned directly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{checked_powi, is_undeformed, Real, LIMIT_BAND};

/// Largest `n` covered by the positivity check run at construction.
pub const POSITIVITY_HORIZON: usize = 512;

/// The pair `(q, p)` and the ratio `Q = q / p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeformationParams<T> {
    q: T,
    p: T,
    ratio: T,
}

impl<T: Real> DeformationParams<T> {
    pub fn new(q: T, p: T) -> Result<Self> {
        if !(q > T::zero() && p > T::zero()) {
            return Err(Error::NonPositiveParams {
                q: q.to_f64().unwrap_or(f64::NAN),
                p: p.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { q, p, ratio: q / p })
    }

    /// One-parameter deformation (`p = 1`).
    pub fn q_only(q: T) -> Result<Self> {
        if !(q > T::zero()) {
            return Err(Error::NonPositiveQ(q.to_f64().unwrap_or(f64::NAN)));
        }
        Self::new(q, T::one())
    }

    #[inline]
    pub fn q(&self) -> T {
        self.q
    }

    #[inline]
    pub fn p(&self) -> T {
        self.p
    }

    /// `Q = q / p`.
    #[inline]
    pub fn ratio(&self) -> T {
        self.ratio
    }

    /// `q` and `p` coincide to within the limit band.
    pub fn is_degenerate(&self) -> bool {
        coincide(self.q, self.p)
    }
}

fn coincide<T: Real>(q: T, p: T) -> bool {
    (q - p).abs() < T::lit(LIMIT_BAND) * q.abs().max(p.abs())
}

fn out_of_range<T: Real>(n: usize, q: T) -> Error {
    Error::OutOfRange {
        n,
        span: (T::from_index(n) * q.ln())
            .abs()
            .to_f64()
            .unwrap_or(f64::INFINITY),
    }
}

fn guard_range<T: Real>(n: usize, q: T) -> Result<()> {
    if (T::from_index(n) * q.ln()).abs() > T::lit(T::EXP_RANGE) {
        Err(out_of_range(n, q))
    } else {
        Ok(())
    }
}

fn pow_in_range<T: Real>(n: usize, x: T, k: i64) -> Result<T> {
    checked_powi(x, k).ok_or_else(|| out_of_range(n, x))
}

/// `[m]_{q,p} = (q^m - p^m) / (q - p)`; `m q^(m-1)` when `q = p`.
pub fn qp_number<T: Real>(m: usize, q: T, p: T) -> T {
    if m == 0 {
        return T::zero();
    }
    let k = m as i32;
    if coincide(q, p) {
        return T::from_index(m) * q.powi(k - 1);
    }
    (q.powi(k) - p.powi(k)) / (q - p)
}

/// Arik–Coon bracket `[n]_q = (1 - q^n) / (1 - q)`; `n` at `q = 1`.
pub fn arik_coon<T: Real>(n: usize, q: T) -> T {
    if is_undeformed(q) {
        return T::from_index(n);
    }
    // expm1/ln1p keep full precision close to q = 1.
    let dq = q - T::one();
    (T::from_index(n) * dq.ln_1p()).exp_m1() / dq
}

/// Nonstandard one-parameter structure function `Φ_q(n)`.
pub fn phi_q<T: Real>(n: usize, q: T) -> Result<T> {
    if !(q > T::zero()) {
        return Err(Error::NonPositiveQ(q.to_f64().unwrap_or(f64::NAN)));
    }
    if n == 0 {
        return Ok(T::zero());
    }
    if is_undeformed(q) {
        return Ok(T::from_index(n));
    }
    guard_range(n, q)?;
    let k = n as i64;
    let one = T::one();
    let two = T::lit(2.0);
    let num = two * pow_in_range(n, q, -k)? * arik_coon(n, q) * (one + pow_in_range(n, q, 1 - k)?);
    let den = (one + pow_in_range(n, q, 2 * k - 2)?) * (one + pow_in_range(n, q, 2 * k)?);
    Ok(num / den)
}

/// Nonstandard two-parameter structure function `Φ_{q,p}(n)`.
///
/// Evaluated through `Q = q/p` as
/// `2 p⁻¹ Q⁻ⁿ (1 + Q^(1-n) [2n-1]_Q) / ((1 + Q^(2n-2)) (1 + Q^(2n)))`,
/// which is the same function as the `q^(-n) p^(5n-3)` form but keeps every
/// intermediate power bounded by `Q^(±2n)`.
pub fn phi_pq<T: Real>(n: usize, q: T, p: T) -> Result<T> {
    let params = DeformationParams::new(q, p)?;
    phi_pq_params(n, &params)
}

fn phi_pq_params<T: Real>(n: usize, params: &DeformationParams<T>) -> Result<T> {
    if n == 0 {
        return Ok(T::zero());
    }
    let one = T::one();
    let two = T::lit(2.0);
    if params.is_degenerate() {
        return Ok(T::from_index(n) / params.p);
    }
    let big_q = params.ratio;
    if is_undeformed(big_q) {
        return Ok(T::from_index(n) / params.p);
    }
    guard_range(n, big_q)?;
    let k = n as i64;
    // [2n-1]_{q,p} / (qp)^(n-1) = Q^(1-n) [2n-1]_Q
    let bracket = pow_in_range(n, big_q, 1 - k)? * arik_coon(2 * n - 1, big_q);
    let num = two * pow_in_range(n, big_q, -k)? * (one + bracket);
    let den = params.p
        * (one + pow_in_range(n, big_q, 2 * k - 2)?)
        * (one + pow_in_range(n, big_q, 2 * k)?);
    Ok(num / den)
}

/// Operator functions `H(N)`, `G(N)` of the one-parameter deformed
/// oscillator algebra `H(N) a⁻a⁺ - G(N) a⁺a⁻ = 1`.
pub fn hg_functions<T: Real>(n: usize, q: T) -> (T, T) {
    let half = T::lit(0.5);
    let one = T::one();
    let k = n as i32;
    let h = half * q.powi(2 * k + 1) * (one + q.powi(2 * k + 2));
    let g = half * q.powi(2 * k) * (one + q.powi(2 * k - 2));
    (h, g)
}

/// `H`, `G` for the two-parameter algebra: `p·H_Q(n)`, `p·G_Q(n)`.
pub fn hg_functions_pq<T: Real>(n: usize, params: &DeformationParams<T>) -> (T, T) {
    let (h, g) = hg_functions(n, params.ratio);
    (params.p * h, params.p * g)
}

/// `Φ(n)! = Φ(n) Φ(n-1) … Φ(1)`, with `Φ(0)! = 1`.
pub fn phi_factorial<T: Real>(n: usize, sf: &StructureFunction<T>) -> Result<T> {
    (1..=n).try_fold(T::one(), |acc, k| Ok(acc * sf.eval(k)?))
}

/// A named structure function `n ↦ Φ(n)`.
#[derive(Clone, Debug, PartialEq)]
pub enum StructureFunction<T> {
    /// `[n]_q`.
    ArikCoon { q: T },
    /// `Φ_q(n)`.
    NonstandardQ { q: T },
    /// `Φ_{q,p}(n)`.
    NonstandardPQ(DeformationParams<T>),
    /// `κ·Φ(n)` for a base structure function `Φ`.
    Scaled {
        base: Box<StructureFunction<T>>,
        kappa: T,
    },
}

impl<T: Real> StructureFunction<T> {
    pub fn arik_coon(q: T) -> Result<Self> {
        check_q(q)?;
        Self::ArikCoon { q }.validated()
    }

    pub fn nonstandard_q(q: T) -> Result<Self> {
        check_q(q)?;
        Self::NonstandardQ { q }.validated()
    }

    pub fn nonstandard_pq(params: DeformationParams<T>) -> Result<Self> {
        Self::NonstandardPQ(params).validated()
    }

    /// The undeformed oscillator `Φ(n) = n`.
    pub fn bosonic() -> Self {
        Self::NonstandardQ { q: T::one() }
    }

    pub fn scaled(base: Self, kappa: T) -> Result<Self> {
        if !(kappa > T::zero()) {
            return Err(Error::NonPositiveKappa(kappa.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self::Scaled {
            base: Box::new(base),
            kappa,
        })
    }

    pub fn eval(&self, n: usize) -> Result<T> {
        match self {
            Self::ArikCoon { q } => {
                if !is_undeformed(*q) {
                    guard_range(n, *q)?;
                }
                Ok(arik_coon(n, *q))
            }
            Self::NonstandardQ { q } => phi_q(n, *q),
            Self::NonstandardPQ(params) => phi_pq_params(n, params),
            Self::Scaled { base, kappa } => Ok(*kappa * base.eval(n)?),
        }
    }

    /// Deformation parameters of the nonstandard kinds.
    pub fn deformation(&self) -> Option<DeformationParams<T>> {
        match self {
            Self::NonstandardQ { q } => DeformationParams::q_only(*q).ok(),
            Self::NonstandardPQ(params) => Some(*params),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::ArikCoon { q } => format!("arik-coon(q={q})"),
            Self::NonstandardQ { q } => format!("nonstandard-q(q={q})"),
            Self::NonstandardPQ(p) => format!("nonstandard-pq(q={}, p={})", p.q, p.p),
            Self::Scaled { base, kappa } => format!("{kappa}*{}", base.name()),
        }
    }

    /// Checks `Φ(n) > 0` for `1 ≤ n ≤ horizon`, stopping early where
    /// evaluation leaves the representable range.
    pub fn check_positive(&self, horizon: usize) -> Result<()> {
        for n in 1..=horizon {
            match self.eval(n) {
                Ok(v) if v > T::zero() => {}
                Ok(v) => {
                    return Err(Error::NegativeStructureValue {
                        n,
                        value: v.to_f64().unwrap_or(f64::NAN),
                    })
                }
                Err(Error::OutOfRange { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        Ok(())
    }

    fn validated(self) -> Result<Self> {
        self.check_positive(POSITIVITY_HORIZON)?;
        Ok(self)
    }
}

fn check_q<T: Real>(q: T) -> Result<()> {
    if q > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositiveQ(q.to_f64().unwrap_or(f64::NAN)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1.0)
    }

    // Literal transcriptions of both displayed forms of the two-parameter
    // structure function, used as independent oracles.
    fn phi_pq_ratio_form(n: i32, q: f64, p: f64) -> f64 {
        let r = q / p;
        2.0 / p * r.powi(-n) / ((1.0 + r.powi(2 * n - 2)) * (1.0 + r.powi(2 * n)))
            * (1.0 + (r.powi(n) - r.powi(1 - n)) / (r - 1.0))
    }

    fn phi_pq_qp_form(n: i32, q: f64, p: f64) -> f64 {
        let bracket = (q.powi(2 * n - 1) - p.powi(2 * n - 1)) / (q - p);
        2.0 * q.powi(-n) * p.powi(5 * n - 3)
            / ((q.powi(2 * n - 2) + p.powi(2 * n - 2)) * (q.powi(2 * n) + p.powi(2 * n)))
            * (1.0 + bracket / (q * p).powi(n - 1))
    }

    #[test]
    fn qp_number_small_cases() {
        assert_eq!(qp_number(0, 1.3, 0.7), 0.0);
        assert_eq!(qp_number(1, 1.3, 0.7), 1.0);
        let (q, p) = (1.3_f64, 0.7_f64);
        assert!((qp_number(3, q, p) - (q * q + q * p + p * p)).abs() < 1e-14);
        // limit mode
        assert!((qp_number(4, 1.2, 1.2) - 4.0 * 1.2_f64.powi(3)).abs() < 1e-14);
    }

    #[test]
    fn qp_number_at_p_one_is_arik_coon() {
        for m in 0..30 {
            assert!(rel_err(qp_number(m, 1.1, 1.0), arik_coon(m, 1.1)) < 1e-12);
        }
    }

    #[test]
    fn phi_q_reference_values() {
        assert_eq!(phi_q(0, 1.7).unwrap(), 0.0);
        assert_eq!(phi_q(5, 1.0).unwrap(), 5.0);
        let q = 1.1_f64;
        let expected = 2.0 / (q * (1.0 + q * q));
        assert!((phi_q(1, q).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.822_706_705_059_646_3).abs() < 1e-15);
    }

    #[test]
    fn phi_q_rejects_non_positive_q() {
        assert_eq!(phi_q(3, 0.0), Err(Error::NonPositiveQ(0.0)));
        assert!(matches!(phi_q(3, -1.0), Err(Error::NonPositiveQ(_))));
    }

    #[test]
    fn phi_q_out_of_range() {
        assert!(matches!(phi_q(2000, 2.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn phi_pq_matches_both_displayed_forms() {
        for n in 1..=10 {
            let v = phi_pq(n as usize, 1.2, 0.8).unwrap();
            assert!(rel_err(v, phi_pq_ratio_form(n, 1.2, 0.8)) < 1e-12);
            assert!(rel_err(v, phi_pq_qp_form(n, 1.2, 0.8)) < 1e-12);
        }
        assert_eq!(phi_pq(0, 1.2, 0.8).unwrap(), 0.0);
    }

    #[test]
    fn phi_pq_reduces_to_phi_q_at_p_one() {
        for q in [0.59, 1.1, 2.0] {
            for n in 0..=50 {
                let a = phi_pq(n, q, 1.0).unwrap();
                let b = phi_q(n, q).unwrap();
                assert!(rel_err(a, b) < 1e-12, "q={q} n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn phi_pq_is_not_symmetric() {
        let a = phi_pq(2, 1.2_f64, 0.8).unwrap();
        let b = phi_pq(2, 0.8_f64, 1.2).unwrap();
        assert!((a - b).abs() > 1e-6);
    }

    #[test]
    fn hg_reference_values() {
        for n in 0..10 {
            assert_eq!(hg_functions(n, 1.0), (1.0, 1.0));
        }
        let (h0, _) = hg_functions(0, 1.1_f64);
        assert!((h0 - 0.5 * 1.1 * (1.0 + 1.21)).abs() < 1e-15);
        assert!((h0 - 1.2155).abs() < 1e-12);
        let q = 1.3_f64;
        for n in 2..40 {
            let (_, g) = hg_functions(n, q);
            let (h, _) = hg_functions(n - 2, q);
            assert!(rel_err(g, q.powi(3) * h) < 1e-13);
        }
    }

    #[test]
    fn hg_diagonal_identity() {
        for q in [0.59_f64, 1.1] {
            for n in 0..=200 {
                let (h, g) = hg_functions(n, q);
                let r = h * phi_q(n + 1, q).unwrap() - g * phi_q(n, q).unwrap() - 1.0;
                assert!(r.abs() < 1e-12, "q={q} n={n}: {r}");
            }
        }
    }

    #[test]
    fn hg_pq_diagonal_identity() {
        let params = DeformationParams::new(1.2_f64, 0.8).unwrap();
        for n in 0..=100 {
            let (h, g) = hg_functions_pq(n, &params);
            let r = h * phi_pq(n + 1, 1.2, 0.8).unwrap() - g * phi_pq(n, 1.2, 0.8).unwrap();
            assert!((r - 1.0).abs() < 1e-12, "n={n}: {r}");
        }
    }

    #[test]
    fn undeformed_limit_is_approached_linearly() {
        // Φ_q(n) = n - (3n² - n)(q - 1) + O((q - 1)²) around q = 1.
        for delta in [1e-7, -1e-7] {
            for n in 1..=100usize {
                let v = phi_q(n, 1.0 + delta).unwrap();
                let nf = n as f64;
                let slope = 3.0 * nf * nf - nf;
                assert!((v - nf + slope * delta).abs() < 1e-6 * nf, "n={n}: {v}");
            }
        }
        for n in 0..=100usize {
            assert_eq!(phi_q(n, 1.0).unwrap(), n as f64);
        }
    }

    #[test]
    fn factorial() {
        let bosonic = StructureFunction::<f64>::bosonic();
        assert_eq!(phi_factorial(0, &bosonic).unwrap(), 1.0);
        assert_eq!(phi_factorial(5, &bosonic).unwrap(), 120.0);
        let sf = StructureFunction::nonstandard_q(1.1).unwrap();
        assert_eq!(phi_factorial(1, &sf).unwrap(), sf.eval(1).unwrap());
    }

    #[test]
    fn structure_functions_vanish_at_zero() {
        let kinds = [
            StructureFunction::arik_coon(0.7).unwrap(),
            StructureFunction::nonstandard_q(1.4).unwrap(),
            StructureFunction::nonstandard_pq(DeformationParams::new(1.2, 0.8).unwrap()).unwrap(),
            StructureFunction::scaled(StructureFunction::nonstandard_q(0.8).unwrap(), 2.5).unwrap(),
        ];
        for sf in &kinds {
            assert_eq!(sf.eval(0).unwrap(), 0.0, "{}", sf.name());
        }
    }

    #[test]
    fn constructors_validate_parameters() {
        assert!(matches!(
            StructureFunction::nonstandard_q(-0.5),
            Err(Error::NonPositiveQ(_))
        ));
        assert!(matches!(
            DeformationParams::new(1.0, 0.0),
            Err(Error::NonPositiveParams { .. })
        ));
        let base = StructureFunction::nonstandard_q(1.1).unwrap();
        assert!(matches!(
            StructureFunction::scaled(base, -1.0),
            Err(Error::NonPositiveKappa(_))
        ));
    }

    #[test]
    fn single_precision_evaluates() {
        let v = phi_q::<f32>(1, 1.1).unwrap();
        assert!((v - 0.822_706_7).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn qp_number_is_symmetric(m in 0usize..40, q in 0.3f64..3.0, p in 0.3f64..3.0) {
            let a = qp_number(m, q, p);
            let b = qp_number(m, p, q);
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn scaled_is_exact_multiple(n in 0usize..100, q in 0.5f64..2.0, kappa in 0.1f64..5.0) {
            let base = StructureFunction::nonstandard_q(q).unwrap();
            let scaled = StructureFunction::scaled(base.clone(), kappa).unwrap();
            prop_assert_eq!(scaled.eval(n).unwrap(), kappa * base.eval(n).unwrap());
        }

        #[test]
        fn phi_q_positive_in_admissible_range(n in 1usize..=100, q in 0.474f64..2.11) {
            prop_assert!(phi_q(n, q).unwrap() > 0.0);
        }
    }
}
