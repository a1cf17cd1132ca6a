//! Polynomials in the monomial and Chebyshev bases.

mod bounds;
mod chebyshev;
mod norm;

pub use bounds::{
    chebyshev_coeff_1norm, chebyshev_coeff_bound, chebyshev_coefficient,
    chebyshev_coefficient_exact, constituent_norm_bounds, ParityCheck,
};
pub use chebyshev::{chebyshev_t, chebyshev_table, ChebyshevSeries};
pub use norm::{sup_norm_by, sup_norm_grid};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    Indefinite,
}

impl Parity {
    /// Parity of the integer `n`.
    pub fn of(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_definite(self) -> bool {
        self != Parity::Indefinite
    }
}

/// Dense polynomial `sum_n a_n x^n`, stored low order first with the top
/// coefficient trimmed. The zero polynomial keeps a single zero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T: Scalar> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_negligible()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        if coeffs.len() == 1 && coeffs[0].is_negligible() {
            coeffs[0] = T::zero();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![T::zero()] }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![T::zero(); n + 1];
        c[n] = T::one();
        Polynomial { coeffs: c }
    }

    pub fn from_f64(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_f64(c)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `x^n`, zero past the degree.
    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_negligible()
    }

    pub fn leading(&self) -> T {
        self.coeffs[self.degree()].clone()
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    pub fn eval_real(&self, x: f64) -> Complex64 {
        self.eval_c64(Complex64::new(x, 0.0))
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c.clone() * T::from_i64(n as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_complex(&self) -> Polynomial<Complex64> {
        self.map(|c| c.to_c64())
    }

    /// Real parts of the coefficients.
    pub fn real_part(&self) -> Polynomial<f64> {
        self.map(|c| c.to_c64().re)
    }

    pub fn imag_part(&self) -> Polynomial<f64> {
        self.map(|c| c.to_c64().im)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.to_c64().im.abs() <= T::trim_tolerance())
    }

    pub fn parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for (n, c) in self.coeffs.iter().enumerate() {
            if !c.is_negligible() {
                if n % 2 == 0 {
                    even = true;
                } else {
                    odd = true;
                }
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Indefinite,
        }
    }

    /// `(even part, odd part)`.
    pub fn parity_parts(&self) -> (Self, Self) {
        let pick = |want: usize| {
            Self::new(
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, c)| if n % 2 == want { c.clone() } else { T::zero() })
                    .collect(),
            )
        };
        (pick(0), pick(1))
    }

    /// `P = low + x^k * high` with `deg low < k`. Never fails; `high` is zero
    /// when `k > deg P`.
    pub fn split_at(&self, k: usize) -> (Self, Self) {
        let cut = k.min(self.coeffs.len());
        let low = Self::new(self.coeffs[..cut].to_vec());
        let high = Self::new(self.coeffs[cut..].to_vec());
        (low, high)
    }

    /// Constituent split `P = P_<k + x^k P_>=k` for `1 <= k <= deg P`.
    pub fn split_constituents(&self, k: usize) -> Result<(Self, Self)> {
        if k == 0 {
            return Err(Error::InvalidInput("split point k must be at least 1".into()));
        }
        if k > self.degree() {
            return Err(Error::NothingToParallelize { k, degree: self.degree() });
        }
        Ok(self.split_at(k))
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![T::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(c)
    }

    /// Sup-norm of `|P|` on `[-1, 1]`.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm_on(-1.0, 1.0)
    }

    pub fn sup_norm_on(&self, a: f64, b: f64) -> f64 {
        let c: Vec<Complex64> = self.coeffs.iter().map(|c| c.to_c64()).collect();
        sup_norm_by(
            |x| {
                let mut acc = Complex64::new(0.0, 0.0);
                for ci in c.iter().rev() {
                    acc = acc * x + ci;
                }
                acc.norm()
            },
            a,
            b,
            self.degree(),
        )
    }

    /// Sum of coefficient moduli.
    pub fn coeff_one_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.modulus()).sum()
    }
}

impl Polynomial<f64> {
    /// `|P(x)|^2` as a real polynomial, for real-coefficient `P`.
    pub fn squared(&self) -> Self {
        self * self
    }
}

impl Polynomial<Complex64> {
    /// `|P(x)|^2` on the real line, as a real polynomial.
    pub fn abs_squared(&self) -> Polynomial<f64> {
        (self * &self.conj()).real_part()
    }
}

fn add_coeffs<T: Scalar>(a: &[T], b: &[T], sign: bool) -> Vec<T> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(T::zero);
            let y = b.get(i).cloned().unwrap_or_else(T::zero);
            if sign {
                x + y
            } else {
                x - y
            }
        })
        .collect()
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        Polynomial::new(add_coeffs(&self.coeffs, &rhs.coeffs, true))
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        Polynomial::new(add_coeffs(&self.coeffs, &rhs.coeffs, false))
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<T: Scalar> $tr for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $f(self, rhs: Self) -> Polynomial<T> {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        -&self
    }
}
