//! Number-form, Hermitian and pseudo-Hermitian Hamiltonians.
//!
//! The deformed Hamiltonians are available in two independent shapes:
//! a weighted sum of `X²` and `P²` conjugated by powers of `Q`, and the
//! expanded quadratic form
//! `A(N)a⁺a⁺ + B(N)a⁻a⁻ + C(N)a⁺a⁻ + D(N)a⁻a⁺`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::FockRep;
use crate::heisenberg::XPPair;
use crate::op::{DenseOp, DiagonalOp};
use crate::pseudo::QuadraticExponent;
use crate::scalar::Real;
use crate::structure::DeformationParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SwansonVariant {
    Hermitian,
    PseudoHermitian,
}

/// Coefficients of `a⁺a⁺`, `a⁻a⁻`, `a⁺a⁻`, `a⁻a⁺` at a fixed `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SwansonCoefficients<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

fn half_power<T: Real>(q: T, twice_exponent: i64) -> T {
    (T::from_int(twice_exponent) * T::lit(0.5) * q.ln()).exp()
}

pub fn abcd<T: Real>(n: usize, q: T, variant: SwansonVariant) -> Result<SwansonCoefficients<T>> {
    if !(q > T::zero()) {
        return Err(Error::NonPositiveQ(q.to_f64().unwrap_or(f64::NAN)));
    }
    let quarter = T::lit(0.25);
    let root = q.sqrt();
    let minus = root - root.recip();
    let plus = root + root.recip();
    let six_n = 6 * n as i64;
    let c = quarter * half_power(q, six_n - 3) * plus;
    let d = quarter * half_power(q, six_n + 3) * plus;
    Ok(match variant {
        SwansonVariant::Hermitian => SwansonCoefficients {
            a: quarter * half_power(q, six_n - 6) * minus,
            b: quarter * half_power(q, six_n + 6) * minus,
            c,
            d,
        },
        SwansonVariant::PseudoHermitian => {
            let ab = quarter * half_power(q, six_n) * minus;
            SwansonCoefficients { a: ab, b: ab, c, d }
        }
    })
}

/// `A(N)a⁺a⁺ + B(N)a⁻a⁻ + C(N)a⁺a⁻ + D(N)a⁻a⁺` on the truncation of `rep`.
pub fn quadratic_form<T: Real>(
    rep: &FockRep<T>,
    coefficients: impl Fn(usize) -> Result<SwansonCoefficients<T>>,
) -> Result<DenseOp<T>> {
    let dim = rep.dim();
    let l = rep.ladders();
    let table = (0..dim).map(coefficients).collect::<Result<Vec<_>>>()?;
    let diag = |f: fn(&SwansonCoefficients<T>) -> T| DiagonalOp::new(table.iter().map(f).collect());
    let terms = [
        (diag(|c| c.a), &l.raise, &l.raise),
        (diag(|c| c.b), &l.lower, &l.lower),
        (diag(|c| c.c), &l.raise, &l.lower),
        (diag(|c| c.d), &l.lower, &l.raise),
    ];
    let mut h = DenseOp::zeros(dim);
    for (coef, left, right) in terms {
        h = &h + &(&coef * &(left * right));
    }
    Ok(h)
}

/// `½(a⁻a⁺ + a⁺a⁻)`.
pub fn build_h_number_form<T: Real>(rep: &FockRep<T>) -> DenseOp<T> {
    let l = rep.ladders();
    (&(&l.lower * &l.raise) + &(&l.raise * &l.lower)).scale(Complex::from(T::lit(0.5)))
}

/// `½(W_X⁻¹ X² W_X + W_P⁻¹ P² W_P)` with `W = Q^{e(N)}`.
pub fn sandwich_hamiltonian<T: Real>(
    pair: &XPPair<T>,
    x_weight: QuadraticExponent,
    p_weight: QuadraticExponent,
) -> DenseOp<T> {
    let ratio = pair.params.ratio();
    let x2 = x_weight.similarity(&(&pair.x * &pair.x), ratio);
    let p2 = p_weight.similarity(&(&pair.p * &pair.p), ratio);
    (&x2 + &p2).scale(Complex::from(T::lit(0.5)))
}

/// Weights `Q^{N(N+3)/4}` and `Q^{N(3-N)/4}` of the Hermitian Hamiltonian.
pub const HERMITIAN_WEIGHTS: (QuadraticExponent, QuadraticExponent) = (
    QuadraticExponent::new(1, 3, 4),
    QuadraticExponent::new(-1, 3, 4),
);

/// Weights `Q^{N(N-3)/4}` and `Q^{-N(N+3)/4}` of the pseudo-Hermitian Hamiltonian.
pub const PSEUDO_WEIGHTS: (QuadraticExponent, QuadraticExponent) = (
    QuadraticExponent::new(1, -3, 4),
    QuadraticExponent::new(-1, -3, 4),
);

pub fn hermitian_sandwich<T: Real>(pair: &XPPair<T>) -> DenseOp<T> {
    sandwich_hamiltonian(pair, HERMITIAN_WEIGHTS.0, HERMITIAN_WEIGHTS.1)
}

pub fn pseudo_sandwich<T: Real>(pair: &XPPair<T>) -> DenseOp<T> {
    sandwich_hamiltonian(pair, PSEUDO_WEIGHTS.0, PSEUDO_WEIGHTS.1)
}

/// Applies the exchange `X ↔ P` followed by `q → 1/q` to the weights of the
/// Hermitian sandwich and evaluates the result on `pair`.
pub fn exchanged_hermitian<T: Real>(pair: &XPPair<T>) -> DenseOp<T> {
    let (wx, wp) = HERMITIAN_WEIGHTS;
    // After X ↔ P the X² term carries the former P weight; inverting q
    // flips the sign of every exponent.
    sandwich_hamiltonian(pair, wp.negated(), wx.negated())
}

fn check_q_structure<T: Real>(rep: &FockRep<T>, q: T) -> Result<()> {
    let want = DeformationParams::q_only(q)?;
    match rep.structure().deformation() {
        Some(d) if d.q() == want.q() && d.p() == want.p() => Ok(()),
        _ => Err(Error::StructureMismatch),
    }
}

/// Hermitian Hamiltonian in quadratic form.
pub fn build_h_hermitian<T: Real>(rep: &FockRep<T>, q: T) -> Result<DenseOp<T>> {
    check_q_structure(rep, q)?;
    quadratic_form(rep, |n| abcd(n, q, SwansonVariant::Hermitian))
}

/// `η_H`-pseudo-Hermitian Hamiltonian in quadratic form.
pub fn build_h_pseudo<T: Real>(rep: &FockRep<T>, q: T) -> Result<DenseOp<T>> {
    check_q_structure(rep, q)?;
    quadratic_form(rep, |n| abcd(n, q, SwansonVariant::PseudoHermitian))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::interior_residual;
    use crate::heisenberg::build_xp;
    use crate::pseudo::{
        hermiticity_residual, pseudo_adjoint_residual, tilde_hamiltonian, EtaFactor, EtaKind,
    };
    use crate::structure::{phi_q, StructureFunction};
    use proptest::prelude::*;

    fn rep(q: f64, dim: usize) -> FockRep<f64> {
        FockRep::new(dim, StructureFunction::nonstandard_q(q).unwrap()).unwrap()
    }

    fn pair(q: f64, dim: usize) -> XPPair<f64> {
        build_xp(&rep(q, dim), &DeformationParams::q_only(q).unwrap()).unwrap()
    }

    fn abcd(n: usize, q: f64, variant: SwansonVariant) -> Result<SwansonCoefficients<f64>> {
        super::abcd(n, q, variant)
    }

    fn diag_n_plus_half(dim: usize) -> DenseOp<f64> {
        DiagonalOp::from_fn(dim, |n| n as f64 + 0.5).to_dense()
    }

    #[test]
    fn undeformed_coefficients() {
        for variant in [SwansonVariant::Hermitian, SwansonVariant::PseudoHermitian] {
            for n in 0..6 {
                let c = abcd(n, 1.0, variant).unwrap();
                assert_eq!((c.a, c.b), (0.0, 0.0));
                assert!((c.c - 0.5).abs() < 1e-15 && (c.d - 0.5).abs() < 1e-15);
            }
        }
        assert!(matches!(
            abcd(0, 0.0, SwansonVariant::Hermitian),
            Err(Error::NonPositiveQ(_))
        ));
    }

    #[test]
    fn hermitian_coefficient_ratios() {
        let c = abcd(0, 1.1, SwansonVariant::Hermitian).unwrap();
        assert!((c.b / c.a - 1.771_561).abs() < 1e-12);
        let c = abcd(3, 0.59, SwansonVariant::Hermitian).unwrap();
        assert!((c.d / c.c - 0.205_379).abs() < 1e-6);
        assert!((c.d / c.c - 0.59f64.powi(3)).abs() < 1e-14);
        for q in [0.59, 1.1, 1.9] {
            for n in 0..30 {
                let c = abcd(n, q, SwansonVariant::Hermitian).unwrap();
                let c2 = abcd(n + 2, q, SwansonVariant::Hermitian).unwrap();
                let c1 = abcd(n + 1, q, SwansonVariant::Hermitian).unwrap();
                assert!(((c.b - c2.a) / c.b).abs() < 1e-13);
                assert!(((c.d - c1.c) / c.d).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn pseudo_coefficient_relations() {
        for q in [0.59_f64, 1.1, 1.9] {
            for n in 0..20 {
                let c = abcd(n, q, SwansonVariant::PseudoHermitian).unwrap();
                assert_eq!(c.a, c.b);
                assert!(((c.d - q.powi(3) * c.c) / c.d).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn pseudo_quadratic_form_matches_sandwich() {
        for q in [0.59, 1.1, 1.9] {
            let pr = pair(q, 32);
            let coeff = build_h_pseudo(&pr.rep, q).unwrap();
            let r = interior_residual(&(&coeff - &pseudo_sandwich(&pr)), 2).unwrap();
            assert!(r <= 1e-10, "q={q}: {r}");
        }
    }

    #[test]
    fn printed_pseudo_d_coefficient_disagrees_with_sandwich() {
        // ¼ q^{3n+½}(q^{3/2} + q^{-3/2}) as displayed next to the expanded form.
        let q = 1.1_f64;
        let pr = pair(q, 16);
        let printed = |n: usize| {
            let mut c = abcd(n, q, SwansonVariant::PseudoHermitian).unwrap();
            c.d = 0.25 * q.powf(3.0 * n as f64 + 0.5) * (q.powf(1.5) + q.powf(-1.5));
            Ok(c)
        };
        let h = quadratic_form(&pr.rep, printed).unwrap();
        assert!(interior_residual(&(&h - &pseudo_sandwich(&pr)), 2).unwrap() > 1e-3);
    }

    #[test]
    fn number_form_diagonal() {
        let r = rep(1.1, 16);
        let h = build_h_number_form(&r);
        for n in 0..15 {
            assert!((h.get(n, n).re - 0.5 * (r.phi(n) + r.phi(n + 1))).abs() < 1e-14);
        }
        assert!((h.get(0, 0).re - 0.411_353_352_529_823_1).abs() < 1e-14);
        let bos = FockRep::new(10, StructureFunction::<f64>::bosonic()).unwrap();
        let diff = &build_h_number_form(&bos) - &diag_n_plus_half(10);
        assert!(interior_residual(&diff, 1).unwrap() < 1e-14);
    }

    #[test]
    fn number_form_matches_normal_ordered_display() {
        let q = 1.1_f64;
        let r = rep(q, 64);
        let l = r.ladders();
        let free = DiagonalOp::from_fn(64, |n| {
            let k = n as i32;
            q.powi(-2 * k - 1) / (1.0 + q.powi(2 * k + 2))
        });
        let coef = DiagonalOp::from_fn(64, |n| {
            let k = n as i32;
            0.5 * (1.0 + (1.0 + q.powi(2 * k - 2)) / (q * (1.0 + q.powi(2 * k + 2))))
        });
        let display = &free.to_dense() + &(&coef * &(&l.raise * &l.lower));
        let r = interior_residual(&(&display - &build_h_number_form(&r)), 1).unwrap();
        assert!(r <= 1e-10, "{r}");
    }

    #[test]
    fn hermitian_undeformed_is_oscillator() {
        let r = rep(1.0, 12);
        let h = build_h_hermitian(&r, 1.0).unwrap();
        assert!(interior_residual(&(&h - &diag_n_plus_half(12)), 1).unwrap() < 1e-14);
        let p = build_h_pseudo(&r, 1.0).unwrap();
        assert!(interior_residual(&(&p - &diag_n_plus_half(12)), 1).unwrap() < 1e-14);
    }

    #[test]
    fn hermitian_forms_agree() {
        for q in [0.59, 1.1, 1.9] {
            let pr = pair(q, 64);
            let coeff = build_h_hermitian(&pr.rep, q).unwrap();
            let r = interior_residual(&(&coeff - &hermitian_sandwich(&pr)), 2).unwrap();
            assert!(r <= 1e-10, "q={q}: {r}");
            let herm = hermiticity_residual(&coeff, 2).unwrap();
            assert!(herm <= 1e-10, "q={q}: {herm}");
        }
    }

    #[test]
    fn hermitian_diagonal_read_off() {
        let q = 1.3;
        let r = rep(q, 20);
        let h = build_h_hermitian(&r, q).unwrap();
        for n in 0..19 {
            let c = abcd(n, q, SwansonVariant::Hermitian).unwrap();
            let expected = c.c * phi_q(n, q).unwrap() + c.d * phi_q(n + 1, q).unwrap();
            assert!((h.get(n, n).re - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn pseudo_hamiltonian_metric() {
        let pr = pair(1.1, 64);
        let h = build_h_pseudo(&pr.rep, 1.1).unwrap();
        let eta = EtaFactor::new(EtaKind::EtaH, &pr.params, 64);
        assert!(pseudo_adjoint_residual(&h, &eta, 2).unwrap() <= 1e-10);
        let small = build_h_pseudo(&rep(1.1, 16), 1.1).unwrap();
        assert!(hermiticity_residual(&small, 2).unwrap() > 1e-3);
    }

    #[test]
    fn exchange_map_yields_pseudo_hamiltonian() {
        for q in [0.59, 1.1] {
            let pr = pair(q, 32);
            let r = interior_residual(&(&exchanged_hermitian(&pr) - &pseudo_sandwich(&pr)), 2);
            assert!(r.unwrap() <= 1e-10);
        }
    }

    #[test]
    fn tilde_form_of_pseudo_hamiltonian() {
        let pr = pair(1.1, 32);
        let h = build_h_pseudo(&pr.rep, 1.1).unwrap();
        let shifted = QuadraticExponent::new(0, 3, 4).similarity(&h, 1.1);
        let r = interior_residual(&(&tilde_hamiltonian(&pr) - &shifted), 2).unwrap();
        assert!(r <= 1e-10, "{r}");
    }

    #[test]
    fn structure_must_match() {
        let r = rep(1.1, 8);
        assert_eq!(build_h_hermitian(&r, 1.2), Err(Error::StructureMismatch));
        assert_eq!(build_h_pseudo(&r, 1.2), Err(Error::StructureMismatch));
    }

    #[test]
    fn continuity_at_the_undeformed_point() {
        for q in [1.0 + 1e-6, 1.0 - 1e-6] {
            let h = build_h_hermitian(&rep(q, 16), q).unwrap();
            assert!((&h - &diag_n_plus_half(16)).max_abs_columns(14) <= 1e-4);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn hermitian_for_real_positive_q(q in 0.3f64..3.0, big in proptest::bool::ANY) {
            let dim = if big { 64 } else { 16 };
            let h = build_h_hermitian(&rep(q, dim), q).unwrap();
            let scale = h.max_abs_columns(dim - 2).max(1.0);
            prop_assert!(hermiticity_residual(&h, 2).unwrap() / scale <= 1e-10);
        }
    }
}
