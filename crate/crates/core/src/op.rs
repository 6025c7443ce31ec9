//! Dense complex operators and diagonal operator functions on a truncated
//! Fock space.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Square complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOp<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> DenseOp<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.data[row * self.dim + col] = value;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        self.map(|z| z * factor)
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.map(|z| z.scale(factor))
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Elementwise combination of two operators of equal dimension.
    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>,
    ) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn try_matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = vec![Complex::zero(); n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let dst = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let src = &other.data[k * n..(k + 1) * n];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = *d + a * b;
                }
            }
        }
        Ok(Self { dim: n, data: out })
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_matmul(other)?.try_sub(&other.try_matmul(self)?)
    }

    /// Maximum modulus over all entries.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Maximum modulus over the leading `cols` columns.
    pub fn max_abs_columns(&self, cols: usize) -> T {
        let mut m = T::zero();
        for i in 0..self.dim {
            for j in 0..cols.min(self.dim) {
                m = m.max(self.get(i, j).norm());
            }
        }
        m
    }

    /// Largest `|Im z|` over all entries.
    pub fn max_imag(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.im.abs()))
    }

    /// Largest `|Re z|` over all entries.
    pub fn max_real(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.re.abs()))
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(self.dim, other.dim))
        }
    }
}

impl<T: Real> Add for &DenseOp<T> {
    type Output = DenseOp<T>;
    fn add(self, rhs: Self) -> DenseOp<T> {
        self.try_add(rhs)
            .expect("dimension mismatch in operator sum")
    }
}

impl<T: Real> Sub for &DenseOp<T> {
    type Output = DenseOp<T>;
    fn sub(self, rhs: Self) -> DenseOp<T> {
        self.try_sub(rhs)
            .expect("dimension mismatch in operator difference")
    }
}

impl<T: Real> Mul for &DenseOp<T> {
    type Output = DenseOp<T>;
    fn mul(self, rhs: Self) -> DenseOp<T> {
        self.try_matmul(rhs)
            .expect("dimension mismatch in operator product")
    }
}

impl<T: Real> Neg for &DenseOp<T> {
    type Output = DenseOp<T>;
    fn neg(self) -> DenseOp<T> {
        self.map(|z| -z)
    }
}

impl<T: Real> Add for DenseOp<T> {
    type Output = DenseOp<T>;
    fn add(self, rhs: Self) -> DenseOp<T> {
        &self + &rhs
    }
}

impl<T: Real> Sub for DenseOp<T> {
    type Output = DenseOp<T>;
    fn sub(self, rhs: Self) -> DenseOp<T> {
        &self - &rhs
    }
}

impl<T: Real> Mul for DenseOp<T> {
    type Output = DenseOp<T>;
    fn mul(self, rhs: Self) -> DenseOp<T> {
        &self * &rhs
    }
}

/// Operator function `f(N)`: entry `k` holds `f(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalOp<T> {
    values: Vec<T>,
}

impl<T: Real> DiagonalOp<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> T) -> Self {
        Self {
            values: (0..dim).map(f).collect(),
        }
    }

    pub fn try_from_fn<E>(dim: usize, f: impl FnMut(usize) -> Result<T, E>) -> Result<Self, E> {
        Ok(Self {
            values: (0..dim).map(f).collect::<Result<_, _>>()?,
        })
    }

    /// The number operator `N`.
    pub fn number(dim: usize) -> Self {
        Self::from_fn(dim, T::from_index)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn value(&self, n: usize) -> T {
        self.values[n]
    }

    pub fn to_dense(&self) -> DenseOp<T> {
        DenseOp::from_fn(self.dim(), |i, j| {
            if i == j {
                Complex::from(self.values[i])
            } else {
                Complex::zero()
            }
        })
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn recip(&self) -> Self {
        self.map(T::recip)
    }

    pub fn scale(&self, factor: T) -> Self {
        self.map(|v| v * factor)
    }

    /// `self * op`: scales row `k` by `f(k)`.
    pub fn apply_left(&self, op: &DenseOp<T>) -> DenseOp<T> {
        assert_eq!(
            self.dim(),
            op.dim(),
            "dimension mismatch in diagonal product"
        );
        DenseOp::from_fn(op.dim(), |i, j| op.get(i, j).scale(self.values[i]))
    }

    /// `op * self`: scales column `k` by `f(k)`.
    pub fn apply_right(&self, op: &DenseOp<T>) -> DenseOp<T> {
        assert_eq!(
            self.dim(),
            op.dim(),
            "dimension mismatch in diagonal product"
        );
        DenseOp::from_fn(op.dim(), |i, j| op.get(i, j).scale(self.values[j]))
    }
}

impl<T: Real> Mul<&DenseOp<T>> for &DiagonalOp<T> {
    type Output = DenseOp<T>;
    fn mul(self, rhs: &DenseOp<T>) -> DenseOp<T> {
        self.apply_left(rhs)
    }
}

impl<T: Real> Mul<&DiagonalOp<T>> for &DenseOp<T> {
    type Output = DenseOp<T>;
    fn mul(self, rhs: &DiagonalOp<T>) -> DenseOp<T> {
        rhs.apply_right(self)
    }
}

impl<T: Real> Mul for &DiagonalOp<T> {
    type Output = DiagonalOp<T>;
    fn mul(self, rhs: Self) -> DiagonalOp<T> {
        assert_eq!(
            self.dim(),
            rhs.dim(),
            "dimension mismatch in diagonal product"
        );
        DiagonalOp::new(
            self.values
                .iter()
                .zip(&rhs.values)
                .map(|(&a, &b)| a * b)
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(dim: usize) -> DenseOp<f64> {
        DenseOp::from_fn(dim, |i, j| {
            Complex::new((i + 2 * j) as f64, i as f64 - j as f64)
        })
    }

    #[test]
    fn adjoint_is_involution() {
        let m = sample(5);
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn identity_is_neutral() {
        let m = sample(4);
        assert_eq!(&m * &DenseOp::identity(4), m);
        assert_eq!(&DenseOp::identity(4) * &m, m);
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let err = sample(4).try_matmul(&sample(5)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch(4, 5));
    }

    #[test]
    fn diagonal_products_scale_rows_and_columns() {
        let m = sample(4);
        let d = DiagonalOp::from_fn(4, |k| (k + 1) as f64);
        assert_eq!(&d * &m, &d.to_dense() * &m);
        assert_eq!(&m * &d, &m * &d.to_dense());
    }

    #[test]
    fn diagonal_ops_commute() {
        let a = DiagonalOp::from_fn(6, |k| (k as f64).sin());
        let b = DiagonalOp::from_fn(6, |k| (k as f64 + 0.5).exp());
        assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn commutator_of_self_vanishes() {
        let m = sample(5);
        assert_eq!(m.commutator(&m).unwrap().max_abs(), 0.0);
    }
}
