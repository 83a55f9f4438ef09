use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::exactnum::{GaussianRational, Rational};

/// Scalar field used by [`DenseMatrix`](crate::matrices::DenseMatrix) and
/// [`ToeplitzMatrix`](crate::toeplitz::ToeplitzMatrix): either exact
/// ([`GaussianRational`], [`Rational`]) or machine complex ([`Complex64`]).
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact and `is_zero` is a decision, not a guess.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `None` when `rhs` is (exactly) zero.
    fn checked_div(&self, rhs: &Self) -> Option<Self>;
    /// Modulus as a float, used for pivoting and deviation reports.
    fn magnitude(&self) -> f64;
    fn from_gaussian(g: &GaussianRational) -> Self;
    fn to_complex(&self) -> Complex64;

    fn from_i64(v: i64) -> Self {
        Self::from_gaussian(&GaussianRational::from_int(v))
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        GaussianRational::checked_div(self, rhs).ok()
    }
    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        g.clone()
    }
    fn to_complex(&self) -> Complex64 {
        GaussianRational::to_complex(self)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        Rational::checked_div(self, rhs).ok()
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
    /// Drops the imaginary part.
    fn from_gaussian(g: &GaussianRational) -> Self {
        g.re.clone()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if Scalar::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn from_gaussian(g: &GaussianRational) -> Self {
        g.to_complex()
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}
