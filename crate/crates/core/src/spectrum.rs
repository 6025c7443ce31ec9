//! Closed-form spectrum of the diagonalized Hamiltonian, the mixing
//! parameter branches and the admissible interval of `q`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{abcd, SwansonVariant};
use crate::scalar::{is_undeformed, Real};
use crate::structure::phi_q;

/// Iteration cap of [`bisect`].
pub const BISECTION_ITERATIONS: usize = 200;

/// Default absolute tolerance of [`admissible_interval`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Largest excitation number accepted by [`spectrum_table`].
pub const MAX_TABLE_N: usize = 512;

/// Which solution of the diagonalization conditions fixes `ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SpectrumBranch {
    #[serde(rename = "caseA")]
    CaseA,
    #[serde(rename = "caseBPlus")]
    CaseBPlus,
    #[serde(rename = "caseBMinus")]
    CaseBMinus,
}

impl SpectrumBranch {
    pub const ALL: [SpectrumBranch; 3] = [Self::CaseA, Self::CaseBPlus, Self::CaseBMinus];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::CaseA => "caseA",
            Self::CaseBPlus => "caseBPlus",
            Self::CaseBMinus => "caseBMinus",
        }
    }
}

impl fmt::Display for SpectrumBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpectrumBranch {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|b| b.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown branch `{s}` (expected caseA, caseBPlus or caseBMinus)")
            })
    }
}

/// Which terms of `E_n` are kept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum TermFilter {
    #[default]
    Full,
    /// Only the `V_q Φ(n)` term.
    E1Only,
    /// Only the `W_q Φ(n+1)` term.
    E2Only,
}

impl fmt::Display for TermFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Full => "full",
            Self::E1Only => "e1",
            Self::E2Only => "e2",
        })
    }
}

fn check_q<T: Real>(q: T) -> Result<()> {
    if q > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositiveQ(q.to_f64().unwrap_or(f64::NAN)))
    }
}

fn outside<T: Real>(q: T, branch: SpectrumBranch) -> Error {
    Error::OutsideAdmissibleRegion {
        q: q.to_f64().unwrap_or(f64::NAN),
        branch: branch.to_string(),
    }
}

/// `ε_q = q^{-3/2}(q-1)(q⁶+1)/((q+1)(q³+1))` and `r_q = 1/ε_q`.
///
/// Inside the undeformed band `ε_q = 0` and `r_q = +∞`.
pub fn r_and_epsilon_case_a<T: Real>(q: T) -> Result<(T, T)> {
    check_q(q)?;
    if is_undeformed(q) {
        return Ok((T::infinity(), T::zero()));
    }
    let one = T::one();
    let eps =
        q.powf(T::lit(-1.5)) * (q - one) * (q.powi(6) + one) / ((q + one) * (q.powi(3) + one));
    Ok((eps.recip(), eps))
}

/// `(A(n)+B(n))/(C(n)+D(n))` from the Hermitian coefficients.
pub fn epsilon_from_coefficients<T: Real>(n: usize, q: T) -> Result<T> {
    let c = abcd(n, q, SwansonVariant::Hermitian)?;
    Ok((c.a + c.b) / (c.c + c.d))
}

/// Both roots `(ε̃⁺, ε̃⁻) = r_q ± √(r_q² - 1)` of `ε̃² - 2r_q ε̃ + 1 = 0`,
/// defined where `|r_q| > 1`. The root of small magnitude is taken as the
/// reciprocal of the large one to avoid cancellation.
pub fn case_b_roots<T: Real>(q: T) -> Option<(T, T)> {
    let (r, _) = r_and_epsilon_case_a(q).ok()?;
    let one = T::one();
    if !r.is_finite() || r.abs() <= one {
        return None;
    }
    let s = (r * r - one).sqrt();
    if r > one {
        let large = r + s;
        Some((large, large.recip()))
    } else {
        let large = r - s;
        Some((large.recip(), large))
    }
}

/// The case B mixing parameter inside `(-1, 1)`: `ε̃⁺` for `r_q < -1`,
/// `ε̃⁻` for `r_q > 1`.
pub fn epsilon_case_b<T: Real>(q: T, branch: SpectrumBranch) -> Result<T> {
    let roots = case_b_roots(q);
    let one = T::one();
    let picked = match (branch, roots) {
        (SpectrumBranch::CaseBPlus, Some((plus, _))) => plus,
        (SpectrumBranch::CaseBMinus, Some((_, minus))) => minus,
        _ => return Err(outside(q, branch)),
    };
    if picked.abs() < one {
        Ok(picked)
    } else {
        Err(outside(q, branch))
    }
}

/// Mixing parameter of `branch` at `q`.
pub fn epsilon_for<T: Real>(q: T, branch: SpectrumBranch) -> Result<T> {
    match branch {
        SpectrumBranch::CaseA => {
            let (_, eps) = r_and_epsilon_case_a(q)?;
            if eps.abs() < T::one() {
                Ok(eps)
            } else {
                Err(outside(q, branch))
            }
        }
        _ => epsilon_case_b(q, branch),
    }
}

pub fn vw_coefficients<T: Real>(q: T, eps: T) -> (T, T) {
    let root = q.sqrt();
    let plus = root + root.recip();
    let minus = root - root.recip();
    let v = q.powf(T::lit(-1.5)) * plus - eps * q.powi(3) * minus;
    let w = q.powf(T::lit(1.5)) * plus - eps * q.powi(-3) * minus;
    (v, w)
}

/// `q^{3n} x`, evaluated in log space so neither factor over- or underflows.
fn weighted<T: Real>(n: usize, q: T, x: T) -> T {
    if x == T::zero() {
        return T::zero();
    }
    let log = T::from_index(3 * n) * q.ln() + x.abs().ln();
    x.signum() * log.exp()
}

/// `E_n = q^{3n}/4 (V_q Φ_q(n) + W_q Φ_q(n+1))`.
pub fn energy<T: Real>(n: usize, q: T, branch: SpectrumBranch) -> Result<T> {
    energy_with(n, q, branch, TermFilter::Full)
}

pub fn energy_with<T: Real>(
    n: usize,
    q: T,
    branch: SpectrumBranch,
    filter: TermFilter,
) -> Result<T> {
    if filter != TermFilter::Full && branch != SpectrumBranch::CaseA {
        return Err(Error::TermFilterRequiresCaseA(filter.to_string()));
    }
    let eps = epsilon_for(q, branch)?;
    let half = T::lit(0.5);
    if is_undeformed(q) {
        let (e1, e2) = (T::from_index(n) * half, T::from_index(n + 1) * half);
        return Ok(match filter {
            TermFilter::Full => e1 + e2,
            TermFilter::E1Only => e1,
            TermFilter::E2Only => e2,
        });
    }
    let (v, w) = vw_coefficients(q, eps);
    let quarter = T::lit(0.25);
    let e1 = || -> Result<T> { Ok(quarter * weighted(n, q, v * phi_q(n, q)?)) };
    let e2 = || -> Result<T> { Ok(quarter * weighted(n, q, w * phi_q(n + 1, q)?)) };
    match filter {
        TermFilter::Full => Ok(e1()? + e2()?),
        TermFilter::E1Only => e1(),
        TermFilter::E2Only => e2(),
    }
}

/// `E₀ = W_q/(2q(1+q²))`.
pub fn ground_state_energy<T: Real>(q: T, branch: SpectrumBranch) -> Result<T> {
    let eps = epsilon_for(q, branch)?;
    let (_, w) = vw_coefficients(q, eps);
    Ok(w / (T::lit(2.0) * q * (T::one() + q * q)))
}

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol` or after [`BISECTION_ITERATIONS`] steps.
pub fn bisect<T: Real>(f: impl Fn(T) -> T, lo: T, hi: T, tol: T) -> Result<T> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if !(fa.signum() * fb.signum() < T::zero()) {
        return Err(Error::BracketFailure {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }
    let two = T::lit(2.0);
    for _ in 0..BISECTION_ITERATIONS {
        let mid = (a + b) / two;
        if b - a <= tol || mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok((a + b) / two)
}

fn epsilon_raw<T: Real>(q: T) -> T {
    r_and_epsilon_case_a(q).map(|(_, e)| e).unwrap_or(T::nan())
}

/// The two solutions of `|ε_q| = 1`, bracketed on `(0.01, 1)` and `(1, 10)`.
pub fn admissible_interval<T: Real>(tol: T) -> Result<(T, T)> {
    let one = T::one();
    let low = bisect(|q| epsilon_raw(q) + one, T::lit(0.01), one, tol)?;
    let high = bisect(|q| epsilon_raw(q) - one, one, T::lit(10.0), tol)?;
    Ok((low, high))
}

/// Interval of `q` on which `branch` is real and inside `(-1, 1)`.
pub fn branch_range<T: Real>(branch: SpectrumBranch, tol: T) -> Result<(T, T)> {
    let (low, high) = admissible_interval(tol)?;
    Ok(match branch {
        SpectrumBranch::CaseA => (low, high),
        SpectrumBranch::CaseBPlus => (low, T::one()),
        SpectrumBranch::CaseBMinus => (T::one(), high),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumRow<T> {
    pub n: usize,
    pub phi_n: T,
    pub phi_n1: T,
    pub energy: T,
}

/// Shape of the energy sequence of a table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicitySummary {
    /// Indices `n` at which the sign of `E(n+1) - E(n)` differs from the
    /// sign of `E(n) - E(n-1)`.
    pub sign_changes: Vec<usize>,
    pub monotonic: bool,
    /// The two levels with the smallest separation, and that separation.
    pub closest_pair: Option<(usize, usize, f64)>,
}

impl MonotonicitySummary {
    pub fn from_energies(energies: &[f64]) -> Self {
        let diffs: Vec<f64> = energies.windows(2).map(|w| w[1] - w[0]).collect();
        let sign_changes: Vec<usize> = diffs
            .windows(2)
            .enumerate()
            .filter(|(_, d)| d[0] != 0.0 && d[1] != 0.0 && d[0].signum() != d[1].signum())
            .map(|(k, _)| k + 1)
            .collect();
        let mut closest_pair: Option<(usize, usize, f64)> = None;
        for i in 0..energies.len() {
            for j in i + 1..energies.len() {
                let gap = (energies[j] - energies[i]).abs();
                if closest_pair.is_none_or(|(_, _, g)| gap < g) {
                    closest_pair = Some((i, j, gap));
                }
            }
        }
        Self {
            monotonic: sign_changes.is_empty(),
            sign_changes,
            closest_pair,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumTable<T> {
    pub q: T,
    pub branch: SpectrumBranch,
    pub kappa: T,
    pub epsilon: T,
    pub rows: Vec<SpectrumRow<T>>,
    pub monotonicity: MonotonicitySummary,
}

pub fn spectrum_table<T: Real>(
    q: T,
    branch: SpectrumBranch,
    nmax: usize,
) -> Result<SpectrumTable<T>> {
    spectrum_table_with(q, branch, TermFilter::Full, nmax)
}

/// [`spectrum_table`] with the energy column restricted by `filter`.
pub fn spectrum_table_with<T: Real>(
    q: T,
    branch: SpectrumBranch,
    filter: TermFilter,
    nmax: usize,
) -> Result<SpectrumTable<T>> {
    let epsilon = epsilon_for(q, branch)?;
    let nmax = nmax.min(MAX_TABLE_N);
    let rows = (0..=nmax)
        .map(|n| {
            Ok(SpectrumRow {
                n,
                phi_n: phi_q(n, q)?,
                phi_n1: phi_q(n + 1, q)?,
                energy: energy_with(n, q, branch, filter)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let energies: Vec<f64> = rows
        .iter()
        .map(|r| r.energy.to_f64().unwrap_or(f64::NAN))
        .collect();
    Ok(SpectrumTable {
        q,
        branch,
        kappa: T::one(),
        epsilon,
        rows,
        monotonicity: MonotonicitySummary::from_energies(&energies),
    })
}

/// Branches that are valid at `q`.
pub fn valid_branches<T: Real>(q: T) -> Vec<SpectrumBranch> {
    SpectrumBranch::ALL
        .into_iter()
        .filter(|&b| epsilon_for(q, b).is_ok())
        .collect()
}
