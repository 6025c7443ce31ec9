//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Largest `|k ln x|` for which a power `x^k` is evaluated without an
    /// out-of-range error.
    const EXP_RANGE: f64;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_index(n: usize) -> Self {
        Self::from_usize(n).expect("index representable in scalar type")
    }

    #[inline]
    fn from_int(k: i64) -> Self {
        Self::from_i64(k).expect("integer representable in scalar type")
    }
}

impl Real for f32 {
    const EXP_RANGE: f64 = 40.0;
}

impl Real for f64 {
    const EXP_RANGE: f64 = 300.0;
}

/// Relative width of the removable-singularity band around `q = 1` (or `q = p`).
pub const LIMIT_BAND: f64 = 1e-9;

/// `true` when `q` sits inside the band where the undeformed limit is used.
#[inline]
pub fn is_undeformed<T: Real>(q: T) -> bool {
    (q - T::one()).abs() < T::lit(LIMIT_BAND)
}

/// Integer power with a guard on the size of `k ln x`.
pub(crate) fn checked_powi<T: Real>(x: T, k: i64) -> Option<T> {
    if k == 0 {
        return Some(T::one());
    }
    let span = (T::from_int(k) * x.ln()).abs();
    if span > T::lit(T::EXP_RANGE) {
        return None;
    }
    let v = match i32::try_from(k) {
        Ok(k) => x.powi(k),
        Err(_) => (T::from_int(k) * x.ln()).exp(),
    };
    v.is_finite().then_some(v)
}
