use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, NumAssign, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::Neg;

/// Coefficient field for polynomials.
///
/// Every scalar round-trips through an exact rational pair `(re, im)`, which is
/// how basis conversions stay free of cancellation error.
pub trait Scalar:
    Clone + Debug + PartialEq + Num + NumAssign + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;
    fn from_f64(v: f64) -> Self;
    fn to_c64(&self) -> Complex<f64>;
    fn modulus(&self) -> f64;
    fn conj(&self) -> Self;
    /// Coefficients at or below this magnitude are trimmed from the top.
    fn trim_tolerance() -> f64;
    fn to_exact(&self) -> (BigRational, BigRational);
    /// Imaginary parts are dropped for real fields.
    fn from_exact(re: &BigRational, im: &BigRational) -> Self;

    fn is_negligible(&self) -> bool {
        if Self::trim_tolerance() == 0.0 {
            self.is_zero()
        } else {
            self.modulus() <= Self::trim_tolerance()
        }
    }
}

fn rational_from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite coefficient")
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_c64(&self) -> Complex<f64> {
        Complex::new(*self, 0.0)
    }
    fn modulus(&self) -> f64 {
        self.abs()
    }
    fn conj(&self) -> Self {
        *self
    }
    fn trim_tolerance() -> f64 {
        1e-12
    }
    fn to_exact(&self) -> (BigRational, BigRational) {
        (rational_from_f64(*self), BigRational::zero())
    }
    fn from_exact(re: &BigRational, _im: &BigRational) -> Self {
        rational_to_f64(re)
    }
}

impl Scalar for f32 {
    fn from_i64(v: i64) -> Self {
        v as f32
    }
    fn from_f64(v: f64) -> Self {
        v as f32
    }
    fn to_c64(&self) -> Complex<f64> {
        Complex::new(*self as f64, 0.0)
    }
    fn modulus(&self) -> f64 {
        self.abs() as f64
    }
    fn conj(&self) -> Self {
        *self
    }
    fn trim_tolerance() -> f64 {
        1e-6
    }
    fn to_exact(&self) -> (BigRational, BigRational) {
        (rational_from_f64(*self as f64), BigRational::zero())
    }
    fn from_exact(re: &BigRational, _im: &BigRational) -> Self {
        rational_to_f64(re) as f32
    }
}

impl Scalar for Complex<f64> {
    fn from_i64(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }
    fn from_f64(v: f64) -> Self {
        Complex::new(v, 0.0)
    }
    fn to_c64(&self) -> Complex<f64> {
        *self
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn trim_tolerance() -> f64 {
        1e-12
    }
    fn to_exact(&self) -> (BigRational, BigRational) {
        (rational_from_f64(self.re), rational_from_f64(self.im))
    }
    fn from_exact(re: &BigRational, im: &BigRational) -> Self {
        Complex::new(rational_to_f64(re), rational_to_f64(im))
    }
}

impl Scalar for Complex<f32> {
    fn from_i64(v: i64) -> Self {
        Complex::new(v as f32, 0.0)
    }
    fn from_f64(v: f64) -> Self {
        Complex::new(v as f32, 0.0)
    }
    fn to_c64(&self) -> Complex<f64> {
        Complex::new(self.re as f64, self.im as f64)
    }
    fn modulus(&self) -> f64 {
        self.norm() as f64
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn trim_tolerance() -> f64 {
        1e-6
    }
    fn to_exact(&self) -> (BigRational, BigRational) {
        (rational_from_f64(self.re as f64), rational_from_f64(self.im as f64))
    }
    fn from_exact(re: &BigRational, im: &BigRational) -> Self {
        Complex::new(rational_to_f64(re) as f32, rational_to_f64(im) as f32)
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Self {
        rational_from_f64(v)
    }
    fn to_c64(&self) -> Complex<f64> {
        Complex::new(rational_to_f64(self), 0.0)
    }
    fn modulus(&self) -> f64 {
        rational_to_f64(self).abs()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn trim_tolerance() -> f64 {
        0.0
    }
    fn to_exact(&self) -> (BigRational, BigRational) {
        (self.clone(), BigRational::zero())
    }
    fn from_exact(re: &BigRational, _im: &BigRational) -> Self {
        re.clone()
    }
}

/// Exact rational from a small integer.
pub fn rational(n: i64) -> BigRational {
    <BigRational as Scalar>::from_i64(n)
}
