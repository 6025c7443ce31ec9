//! Generalized nonlinear Bogoliubov transformations between a
//! `Φ`-oscillator and a `χ`-oscillator, and the Hermitian Hamiltonian
//! re-expressed through the quasi-particle operators `c±`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{interior_residual, scaled_interior_residual, FockRep};
use crate::hamiltonian::{abcd, SwansonVariant};
use crate::op::{DenseOp, DiagonalOp};
use crate::scalar::Real;
use crate::structure::StructureFunction;

/// Transformation data: mixing parameter `ε`, source `Φ` and target `χ`.
#[derive(Clone, Debug)]
pub struct GnbtSpec<T> {
    epsilon: T,
    kappa: Option<T>,
    source: StructureFunction<T>,
    target: StructureFunction<T>,
}

fn check_epsilon<T: Real>(epsilon: T) -> Result<()> {
    if epsilon.abs() < T::one() {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(
            epsilon.to_f64().unwrap_or(f64::NAN),
        ))
    }
}

impl<T: Real> GnbtSpec<T> {
    /// `χ = κ·Φ`, for which `ζ ≡ κ^{-1/2}`.
    pub fn canonical(source: StructureFunction<T>, epsilon: T, kappa: T) -> Result<Self> {
        check_epsilon(epsilon)?;
        let target = StructureFunction::scaled(source.clone(), kappa)?;
        Ok(Self {
            epsilon,
            kappa: Some(kappa),
            source,
            target,
        })
    }

    /// Arbitrary target structure function.
    pub fn general(
        source: StructureFunction<T>,
        target: StructureFunction<T>,
        epsilon: T,
    ) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self {
            epsilon,
            kappa: None,
            source,
            target,
        })
    }

    #[inline]
    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    /// The multiplier `κ` of a canonical transformation.
    #[inline]
    pub fn kappa(&self) -> Option<T> {
        self.kappa
    }

    #[inline]
    pub fn is_canonical(&self) -> bool {
        self.kappa.is_some()
    }

    pub fn source(&self) -> &StructureFunction<T> {
        &self.source
    }

    pub fn target(&self) -> &StructureFunction<T> {
        &self.target
    }

    /// `1/√(1-ε²)`.
    pub fn norm(&self) -> T {
        (T::one() - self.epsilon * self.epsilon).sqrt().recip()
    }

    /// `ζ(n) = √(Φ(n)/χ(n))`; the vacuum value is fixed to `1` outside the
    /// canonical case, where both structure functions vanish.
    pub fn zeta(&self, n: usize) -> Result<T> {
        if let Some(kappa) = self.kappa {
            return Ok(kappa.sqrt().recip());
        }
        if n == 0 {
            return Ok(T::one());
        }
        let phi = self.source.eval(n)?;
        let chi = self.target.eval(n)?;
        if phi == T::zero() || chi == T::zero() {
            return Err(Error::ZeroStructureValue { n });
        }
        Ok((phi / chi).sqrt())
    }

    pub fn g1(&self, n: usize) -> Result<T> {
        Ok(self.epsilon * self.norm() / self.zeta(n)?)
    }

    pub fn g2(&self, n: usize) -> Result<T> {
        Ok(self.norm() / self.zeta(n + 1)?)
    }

    /// `g₃(n) = g₂(n-1)`, defined for `n ≥ 1`.
    pub fn g3(&self, n: usize) -> Result<T> {
        self.g2(n - 1)
    }

    /// `g₄(n) = g₁(n+1)`.
    pub fn g4(&self, n: usize) -> Result<T> {
        self.g1(n + 1)
    }

    fn zeta_op(&self, dim: usize, shift: usize) -> Result<DiagonalOp<T>> {
        DiagonalOp::try_from_fn(dim, |k| self.zeta(k + shift))
    }
}

fn check_source<T: Real>(rep: &FockRep<T>, spec: &GnbtSpec<T>) -> Result<()> {
    if rep.structure() == spec.source() {
        Ok(())
    } else {
        Err(Error::StructureMismatch)
    }
}

/// `c⁻ = (ε ζ⁻¹(N) a⁺ + ζ⁻¹(N+1) a⁻)/√(1-ε²)` and
/// `c⁺ = (ζ⁻¹(N) a⁺ + ε ζ⁻¹(N+1) a⁻)/√(1-ε²)`.
pub fn build_c_ops<T: Real>(
    rep: &FockRep<T>,
    spec: &GnbtSpec<T>,
) -> Result<(DenseOp<T>, DenseOp<T>)> {
    check_source(rep, spec)?;
    let dim = rep.dim();
    let l = rep.ladders();
    let z0 = spec.zeta_op(dim, 0)?.recip();
    let z1 = spec.zeta_op(dim, 1)?.recip();
    let raise = &z0 * &l.raise;
    let lower = &z1 * &l.lower;
    let (eps, s) = (spec.epsilon(), spec.norm());
    let c_minus = (&raise.scale_real(eps) + &lower).scale_real(s);
    let c_plus = (&raise + &lower.scale_real(eps)).scale_real(s);
    Ok((c_minus, c_plus))
}

/// `a⁻ = ζ(N+1)(c⁻ - εc⁺)/√(1-ε²)`, `a⁺ = ζ(N)(c⁺ - εc⁻)/√(1-ε²)`.
pub fn invert_gnbt<T: Real>(
    c_minus: &DenseOp<T>,
    c_plus: &DenseOp<T>,
    spec: &GnbtSpec<T>,
) -> Result<(DenseOp<T>, DenseOp<T>)> {
    let dim = c_minus.dim();
    let (eps, s) = (spec.epsilon(), spec.norm());
    let z0 = spec.zeta_op(dim, 0)?.scale(s);
    let z1 = spec.zeta_op(dim, 1)?.scale(s);
    let lower = &z1 * &c_minus.try_sub(&c_plus.scale_real(eps))?;
    let raise = &z0 * &c_plus.try_sub(&c_minus.scale_real(eps))?;
    Ok((lower, raise))
}

/// `(det Â, det Â⁻¹) = (1/(ζ(n)ζ(n+1)), ζ(n)ζ(n+1))`.
pub fn determinants<T: Real>(spec: &GnbtSpec<T>, n: usize) -> Result<(T, T)> {
    let prod = spec.zeta(n)? * spec.zeta(n + 1)?;
    Ok((prod.recip(), prod))
}

/// Coefficients of the Hamiltonian after substituting the inverse transformation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rstu<T> {
    pub r: T,
    pub s: T,
    pub t: T,
    pub u: T,
}

pub fn rstu<T: Real>(n: usize, q: T, spec: &GnbtSpec<T>) -> Result<Rstu<T>> {
    let c = abcd(n, q, SwansonVariant::Hermitian)?;
    let (z0, z1) = (spec.zeta(n)?, spec.zeta(n + 1)?);
    let e = spec.epsilon();
    Ok(Rstu {
        r: c.a * z0 - e * c.d * z1,
        s: e * c.b * z1 - c.c * z0,
        t: e * c.a * z0 - c.d * z1,
        u: c.b * z1 - e * c.c * z0,
    })
}

/// `-√κ (S(n)Φ(n) + T(n)Φ(n+1))` for a canonical transformation.
pub fn recombined_energy<T: Real>(n: usize, q: T, spec: &GnbtSpec<T>) -> Result<T> {
    let kappa = spec.kappa().ok_or(Error::NonCanonicalSpec)?;
    let c = rstu(n, q, spec)?;
    let phi0 = spec.source().eval(n)?;
    let phi1 = spec.source().eval(n + 1)?;
    Ok(-kappa.sqrt() * (c.s * phi0 + c.t * phi1))
}

struct Sectors<T> {
    pairing: DenseOp<T>,
    number: DenseOp<T>,
}

fn hamiltonian_sectors<T: Real>(rep: &FockRep<T>, q: T, spec: &GnbtSpec<T>) -> Result<Sectors<T>> {
    let dim = rep.dim();
    let (cm, cp) = build_c_ops(rep, spec)?;
    let coeffs = (0..dim)
        .map(|n| rstu(n, q, spec))
        .collect::<Result<Vec<_>>>()?;
    let diag = |f: fn(&Rstu<T>) -> T| DiagonalOp::new(coeffs.iter().map(f).collect());
    let (r, s, t, u) = (diag(|c| c.r), diag(|c| c.s), diag(|c| c.t), diag(|c| c.u));
    let zt0 = spec.zeta_op(dim, 0)?;
    let zt1 = spec.zeta_op(dim, 1)?;
    let e = spec.epsilon();
    let norm2 = spec.norm() * spec.norm();
    // c^α ζ(N + k) c^β
    let sandwich = |left: &DenseOp<T>, z: &DiagonalOp<T>, right: &DenseOp<T>| &(left * z) * right;

    let pairing = [
        (&r, T::one(), sandwich(&cp, &zt0, &cp)),
        (&s, e, sandwich(&cp, &zt1, &cp)),
        (&t, e, sandwich(&cm, &zt0, &cm)),
        (&u, T::one(), sandwich(&cm, &zt1, &cm)),
    ];
    let number = [
        (&r, -e, sandwich(&cp, &zt0, &cm)),
        (&s, -T::one(), sandwich(&cp, &zt1, &cm)),
        (&t, -T::one(), sandwich(&cm, &zt0, &cp)),
        (&u, -e, sandwich(&cm, &zt1, &cp)),
    ];
    let accumulate = |terms: [(&DiagonalOp<T>, T, DenseOp<T>); 4]| {
        let mut acc = DenseOp::zeros(dim);
        for (coef, weight, op) in terms {
            acc = &acc + &(coef * &op).scale_real(weight * norm2);
        }
        acc
    };
    Ok(Sectors {
        pairing: accumulate(pairing),
        number: accumulate(number),
    })
}

/// The Hermitian Hamiltonian written through `c±`.
pub fn transformed_hamiltonian<T: Real>(
    rep: &FockRep<T>,
    q: T,
    spec: &GnbtSpec<T>,
) -> Result<DenseOp<T>> {
    let sectors = hamiltonian_sectors(rep, q, spec)?;
    Ok(&sectors.pairing + &sectors.number)
}

/// Interior residual of `[c⁻, c⁺] - (χ(N+1) - χ(N))`, relative to the
/// largest `χ` on the truncation.
pub fn commutator_preservation<T: Real>(rep: &FockRep<T>, spec: &GnbtSpec<T>) -> Result<T> {
    let (cm, cp) = build_c_ops(rep, spec)?;
    let dim = rep.dim();
    let chi = (0..=dim)
        .map(|n| spec.target().eval(n))
        .collect::<Result<Vec<_>>>()?;
    let diff = DiagonalOp::from_fn(dim, |k| chi[k + 1] - chi[k]).to_dense();
    let scale = chi.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    scaled_interior_residual(&cm.commutator(&cp)?.try_sub(&diff)?, 2, scale)
}

/// Shape of the sequence `x(n) = ζ(n-1)/ζ(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum XPattern {
    Constant(f64),
    Alternating,
    Irregular,
}

/// Scalar constraint combinations at one Fock index `n ≥ 1`, each divided
/// by `ζ` at the index where it is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstraintRow {
    pub n: usize,
    pub x: f64,
    pub y: f64,
    /// `x(n+1)R(n+1) + εS(n+1)`.
    pub raise_upper: f64,
    /// `R(n-1) + εy(n-1)S(n-1)`.
    pub raise_lower: f64,
    /// `ε(U(n+1) + εx(n+1)T(n+1))`.
    pub lower_upper: f64,
    /// `εT(n-1) + y(n-1)U(n-1)`.
    pub lower_lower: f64,
}

impl ConstraintRow {
    pub fn max_abs(&self) -> f64 {
        [
            self.raise_upper,
            self.raise_lower,
            self.lower_upper,
            self.lower_lower,
        ]
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Diagnostic evaluation of the two operator constraints that remove the
/// `c⁺…c⁺` and `c⁻…c⁻` terms. Nothing here is asserted to vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintTable {
    pub epsilon: f64,
    pub kappa: Option<f64>,
    pub rows: Vec<ConstraintRow>,
    pub x_pattern: XPattern,
    /// `max |x(n)y(n) - 1|`.
    pub reciprocity: f64,
    /// `max |x(n) - x(n+2)|`.
    pub period_two: f64,
    /// Interior residual of the `c⁺…c⁺` and `c⁻…c⁻` part of the transformed
    /// Hamiltonian.
    pub sector_residual: f64,
    /// Off-diagonal interior residual of `c⁺c⁻ - χ(N)`, relative to `max χ`.
    pub bilinear_residual: f64,
}

impl ConstraintTable {
    pub fn max_combination(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.max_abs()))
    }
}

fn to_f64<T: Real>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn classify(xs: &[f64]) -> XPattern {
    let Some(&first) = xs.first() else {
        return XPattern::Irregular;
    };
    let tol = 1e-12 * first.abs().max(1.0);
    if xs.iter().all(|x| (x - first).abs() <= tol) {
        return XPattern::Constant(first);
    }
    let alternating = xs
        .iter()
        .enumerate()
        .all(|(k, x)| (x - if k % 2 == 0 { first } else { -first }).abs() <= tol);
    if alternating {
        XPattern::Alternating
    } else {
        XPattern::Irregular
    }
}

pub fn constraint_residuals<T: Real>(
    q: T,
    spec: &GnbtSpec<T>,
    horizon: usize,
) -> Result<ConstraintTable> {
    let e = spec.epsilon();
    if e == T::zero() {
        return Err(Error::ZeroEpsilon);
    }
    let x = |n: usize| -> Result<T> { Ok(spec.zeta(n - 1)? / spec.zeta(n)?) };
    let y = |n: usize| -> Result<T> { Ok(spec.zeta(n + 2)? / spec.zeta(n + 1)?) };

    let mut rows = Vec::with_capacity(horizon);
    let mut xs = Vec::with_capacity(horizon + 2);
    let mut reciprocity = T::zero();
    for n in 1..=horizon {
        let (hi, lo) = (rstu(n + 1, q, spec)?, rstu(n - 1, q, spec)?);
        let (z_hi, z_lo) = (spec.zeta(n + 1)?, spec.zeta(n - 1)?);
        let (x_hi, y_lo) = (x(n + 1)?, y(n - 1)?);
        let (xn, yn) = (x(n)?, y(n)?);
        reciprocity = reciprocity.max((xn * yn - T::one()).abs());
        xs.push(to_f64(xn));
        rows.push(ConstraintRow {
            n,
            x: to_f64(xn),
            y: to_f64(yn),
            raise_upper: to_f64((x_hi * hi.r + e * hi.s) / z_hi),
            raise_lower: to_f64((lo.r + e * y_lo * lo.s) / z_lo),
            lower_upper: to_f64(e * (hi.u + e * x_hi * hi.t) / z_hi),
            lower_lower: to_f64((e * lo.t + y_lo * lo.u) / z_lo),
        });
    }
    for n in horizon + 1..=horizon + 2 {
        xs.push(to_f64(x(n)?));
    }
    let period_two = xs
        .windows(3)
        .fold(0.0_f64, |m, w| m.max((w[0] - w[2]).abs()));
    xs.truncate(horizon);

    let rep = FockRep::new(horizon + 3, spec.source().clone())?;
    let sectors = hamiltonian_sectors(&rep, q, spec)?;
    let sector_residual = interior_residual(&sectors.pairing, 2)?;

    let (cm, cp) = build_c_ops(&rep, spec)?;
    let bilinear = &cp * &cm;
    let chi_scale = (0..=rep.dim())
        .map(|n| spec.target().eval(n).map(|v| v.abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(T::zero(), T::max);
    let off_diagonal = DenseOp::from_fn(rep.dim(), |i, j| {
        if i == j {
            Complex::new(T::zero(), T::zero())
        } else {
            bilinear.get(i, j)
        }
    });
    let bilinear_residual = scaled_interior_residual(&off_diagonal, 2, chi_scale)?;

    Ok(ConstraintTable {
        epsilon: to_f64(e),
        kappa: spec.kappa().map(to_f64),
        rows,
        x_pattern: classify(&xs),
        reciprocity: to_f64(reciprocity),
        period_two,
        sector_residual: to_f64(sector_residual),
        bilinear_residual: to_f64(bilinear_residual),
    })
}

/// Diagonal Hamiltonian of free quasi-particles:
/// `-κ^{-1/2}(S(n)χ(n) + T(n)χ(n+1))` for `0 ≤ n ≤ nmax`.
pub fn quasi_free_hamiltonian<T: Real>(
    q: T,
    spec: &GnbtSpec<T>,
    nmax: usize,
) -> Result<DiagonalOp<T>> {
    let kappa = spec.kappa().ok_or(Error::NonCanonicalSpec)?;
    let scale = kappa.sqrt().recip();
    DiagonalOp::try_from_fn(nmax + 1, |n| {
        let c = rstu(n, q, spec)?;
        let chi0 = spec.target().eval(n)?;
        let chi1 = spec.target().eval(n + 1)?;
        Ok(-scale * (c.s * chi0 + c.t * chi1))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_h_hermitian, build_h_number_form};
    use proptest::prelude::*;

    fn nonstandard(q: f64) -> StructureFunction<f64> {
        StructureFunction::nonstandard_q(q).unwrap()
    }

    fn canonical(q: f64, eps: f64, kappa: f64) -> GnbtSpec<f64> {
        GnbtSpec::canonical(nonstandard(q), eps, kappa).unwrap()
    }

    fn rep(q: f64, dim: usize) -> FockRep<f64> {
        FockRep::new(dim, nonstandard(q)).unwrap()
    }

    fn epsilon_case_a(q: f64) -> f64 {
        q.powf(-1.5) * (q - 1.0) * (q.powi(6) + 1.0) / ((q + 1.0) * (q.powi(3) + 1.0))
    }

    #[test]
    fn epsilon_must_be_inside_unit_interval() {
        for eps in [1.0, -1.0, 1.5] {
            assert!(matches!(
                GnbtSpec::canonical(nonstandard(1.1), eps, 1.0),
                Err(Error::EpsilonOutOfRange(_))
            ));
        }
        assert!(matches!(
            GnbtSpec::canonical(nonstandard(1.1), 0.2, 0.0),
            Err(Error::NonPositiveKappa(_))
        ));
    }

    #[test]
    fn diagonal_transformation_at_zero_mixing() {
        let spec = GnbtSpec::general(
            nonstandard(1.1),
            StructureFunction::arik_coon(1.1).unwrap(),
            0.0,
        )
        .unwrap();
        let r = rep(1.1, 12);
        let l = r.ladders();
        let (cm, cp) = build_c_ops(&r, &spec).unwrap();
        let z0 = DiagonalOp::try_from_fn(12, |k| spec.zeta(k))
            .unwrap()
            .recip();
        let z1 = DiagonalOp::try_from_fn(12, |k| spec.zeta(k + 1))
            .unwrap()
            .recip();
        assert!((&cp - &(&z0 * &l.raise)).max_abs() < 1e-15);
        assert!((&cm - &(&z1 * &l.lower)).max_abs() < 1e-15);
    }

    #[test]
    fn bosonic_commutator_is_identity() {
        let spec = GnbtSpec::canonical(StructureFunction::bosonic(), 0.3, 1.0).unwrap();
        let r = FockRep::new(32, StructureFunction::bosonic()).unwrap();
        let (cm, cp) = build_c_ops(&r, &spec).unwrap();
        let res = &cm.commutator(&cp).unwrap() - &DenseOp::identity(32);
        assert!(interior_residual(&res, 2).unwrap() <= 1e-12);
    }

    #[test]
    fn commutator_is_preserved() {
        let cases = [
            canonical(0.59, -0.4918, 1.0),
            canonical(1.1, 0.3, 2.5),
            GnbtSpec::general(
                nonstandard(1.1),
                StructureFunction::arik_coon(1.1).unwrap(),
                0.2,
            )
            .unwrap(),
        ];
        for spec in &cases {
            let r = FockRep::new(64, spec.source().clone()).unwrap();
            let res = commutator_preservation(&r, spec).unwrap();
            assert!(res <= 1e-10, "{}: {res}", spec.target().name());
        }
    }

    #[test]
    fn creation_is_adjoint_of_annihilation() {
        let spec = GnbtSpec::general(
            nonstandard(0.8),
            StructureFunction::arik_coon(0.8).unwrap(),
            -0.6,
        )
        .unwrap();
        let (cm, cp) = build_c_ops(&rep(0.8, 20), &spec).unwrap();
        assert_eq!(cm.adjoint(), cp);
    }

    #[test]
    fn round_trip_recovers_ladders() {
        let cases = [
            (canonical(1.1, 0.3, 1.0), 1.1),
            (canonical(0.59, -0.49, 2.5), 0.59),
            (
                GnbtSpec::general(
                    nonstandard(1.1),
                    StructureFunction::arik_coon(1.1).unwrap(),
                    0.2,
                )
                .unwrap(),
                1.1,
            ),
            (canonical(1.0, 0.0, 1.0), 1.0),
        ];
        for (spec, q) in &cases {
            let r = rep(*q, 32);
            let l = r.ladders();
            let (cm, cp) = build_c_ops(&r, spec).unwrap();
            let (lower, raise) = invert_gnbt(&cm, &cp, spec).unwrap();
            let err = (&lower - &l.lower)
                .max_abs()
                .max((&raise - &l.raise).max_abs());
            assert!(err / l.lower.max_abs().max(1.0) <= 1e-12, "q={q}: {err}");
        }
    }

    #[test]
    fn determinants_are_reciprocal() {
        let spec = GnbtSpec::general(
            nonstandard(1.3),
            StructureFunction::arik_coon(1.3).unwrap(),
            0.4,
        )
        .unwrap();
        for n in 0..30 {
            let (d, d_inv) = determinants(&spec, n).unwrap();
            assert!((d * d_inv - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn coefficient_ratio_is_epsilon() {
        let spec = GnbtSpec::general(
            nonstandard(1.2),
            StructureFunction::arik_coon(1.2).unwrap(),
            0.35,
        )
        .unwrap();
        for n in 0..=100 {
            let ratio = spec.g1(n + 1).unwrap() / spec.g2(n).unwrap();
            assert!((ratio - 0.35).abs() < 1e-12);
        }
        for n in 1..20 {
            assert_eq!(spec.g3(n).unwrap(), spec.g2(n - 1).unwrap());
            assert_eq!(spec.g4(n).unwrap(), spec.g1(n + 1).unwrap());
        }
    }

    #[test]
    fn undeformed_coefficients() {
        for eps in [0.3, -0.7] {
            let spec = canonical(1.0, eps, 1.0);
            for n in 0..5 {
                let c = rstu(n, 1.0, &spec).unwrap();
                assert!((c.r + eps / 2.0).abs() < 1e-15 && (c.u + eps / 2.0).abs() < 1e-15);
                assert!((c.s + 0.5).abs() < 1e-15 && (c.t + 0.5).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn ground_state_recombination() {
        let q = 1.1_f64;
        let eps = epsilon_case_a(q);
        let spec = canonical(q, eps, 1.0);
        let root = q.sqrt();
        let w = q.powf(1.5) * (root + 1.0 / root) - eps * q.powi(-3) * (root - 1.0 / root);
        let phi1 = crate::structure::phi_q(1, q).unwrap();
        let e0 = recombined_energy(0, q, &spec).unwrap();
        assert!((e0 - w * phi1 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn transformed_hamiltonian_is_unchanged() {
        let cases = [
            (canonical(1.1, epsilon_case_a(1.1), 1.0), 1.1),
            (canonical(0.59, -0.26, 2.5), 0.59),
            (canonical(1.1, 0.0, 1.0), 1.1),
            (
                GnbtSpec::general(
                    nonstandard(1.1),
                    StructureFunction::arik_coon(1.1).unwrap(),
                    0.2,
                )
                .unwrap(),
                1.1,
            ),
        ];
        for (spec, q) in &cases {
            let r = rep(*q, 32);
            let h = build_h_hermitian(&r, *q).unwrap();
            let ht = transformed_hamiltonian(&r, *q, spec).unwrap();
            let diff = (&ht - &h).max_abs();
            assert!(diff <= 1e-10, "q={q}: {diff}");
        }
    }

    #[test]
    fn undeformed_transformed_hamiltonian_is_number_form() {
        let r = rep(1.0, 16);
        let h = build_h_number_form(&r);
        for eps in [0.4, -0.25] {
            let ht = transformed_hamiltonian(&r, 1.0, &canonical(1.0, eps, 1.0)).unwrap();
            assert!((&ht - &h).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn constraint_table_for_canonical_specs() {
        let q = 1.1;
        let spec = canonical(q, epsilon_case_a(q), 1.0);
        let table = constraint_residuals(q, &spec, 20).unwrap();
        assert_eq!(table.rows.len(), 20);
        for row in &table.rows {
            assert_eq!((row.x, row.y), (1.0, 1.0));
        }
        assert_eq!(table.x_pattern, XPattern::Constant(1.0));
        assert_eq!(table.reciprocity, 0.0);
        assert_eq!(table.period_two, 0.0);
        assert!(table.max_combination().is_finite());
        assert!(table.sector_residual.is_finite());
    }

    #[test]
    fn kappa_cancels_from_constraints() {
        let q = 0.59;
        let a = constraint_residuals(q, &canonical(q, -0.263, 1.0), 30).unwrap();
        let b = constraint_residuals(q, &canonical(q, -0.263, 2.5), 30).unwrap();
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert!((ra.max_abs() - rb.max_abs()).abs() <= 1e-12);
            assert!((ra.raise_upper - rb.raise_upper).abs() <= 1e-12);
            assert!((ra.lower_lower - rb.lower_lower).abs() <= 1e-12);
        }
    }

    #[test]
    fn zero_mixing_is_rejected_by_constraints() {
        let spec = canonical(1.1, 0.0, 1.0);
        assert_eq!(constraint_residuals(1.1, &spec, 5), Err(Error::ZeroEpsilon));
    }

    #[test]
    fn quasi_free_energies() {
        let spec = canonical(1.0, 0.3, 1.0);
        let h = quasi_free_hamiltonian(1.0, &spec, 10).unwrap();
        for (n, v) in h.values().iter().enumerate() {
            assert!((v - (n as f64 + 0.5)).abs() < 1e-14);
        }
        let general = GnbtSpec::general(
            nonstandard(1.1),
            StructureFunction::arik_coon(1.1).unwrap(),
            0.2,
        )
        .unwrap();
        assert_eq!(
            quasi_free_hamiltonian(1.1, &general, 3).unwrap_err(),
            Error::NonCanonicalSpec
        );
    }

    #[test]
    fn alternating_pattern_is_recognized() {
        assert_eq!(classify(&[0.5, -0.5, 0.5, -0.5]), XPattern::Alternating);
        assert_eq!(classify(&[0.5, 0.7, 0.5]), XPattern::Irregular);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn round_trip_is_identity(q in 0.5f64..2.0, eps in -0.95f64..0.95, kappa in 0.2f64..4.0) {
            let spec = canonical(q, eps, kappa);
            let r = rep(q, 24);
            let l = r.ladders();
            let (cm, cp) = build_c_ops(&r, &spec).unwrap();
            let (lower, raise) = invert_gnbt(&cm, &cp, &spec).unwrap();
            let err = (&lower - &l.lower).max_abs().max((&raise - &l.raise).max_abs());
            prop_assert!(err / l.lower.max_abs().max(1.0) <= 1e-12);
        }

        #[test]
        fn commutator_preserved_for_any_canonical_spec(
            q in 0.5f64..2.0, eps in -0.9f64..0.9, kappa in 0.2f64..4.0,
        ) {
            let spec = canonical(q, eps, kappa);
            prop_assert!(commutator_preservation(&rep(q, 32), &spec).unwrap() <= 1e-10);
        }
    }
}
