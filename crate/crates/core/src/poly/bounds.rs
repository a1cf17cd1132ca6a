use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

/// How to treat a parity mismatch between `d` and `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityCheck {
    /// Mismatch is an error.
    Strict,
    /// Mismatch yields zero.
    Lenient,
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Exact coefficient of `x^n` in `T_d`, or `None` when it vanishes.
pub fn chebyshev_coefficient_exact(d: usize, n: usize) -> Option<BigInt> {
    if n > d || (d - n) % 2 != 0 {
        return None;
    }
    if d == 0 {
        return Some(BigInt::one());
    }
    let (d, n) = (d as u64, n as u64);
    let m = (d - n) / 2;
    let num = BigInt::from(d) * factorial((d + n) / 2 - 1) * (BigInt::one() << n);
    let den = BigInt::from(2) * factorial(m) * factorial(n);
    let (q, r) = num.div_rem(&den);
    debug_assert!(r == BigInt::from(0));
    Some(if m % 2 == 1 { -q } else { q })
}

/// Coefficient of `x^n` in `T_d` as a float.
pub fn chebyshev_coefficient(d: usize, n: usize, check: ParityCheck) -> Result<f64> {
    match chebyshev_coefficient_exact(d, n) {
        Some(v) => Ok(v.to_f64().unwrap_or(f64::INFINITY)),
        None if check == ParityCheck::Lenient => Ok(0.0),
        None if n > d => Err(Error::InvalidInput(format!(
            "x^{n} does not occur in T_{d}"
        ))),
        None => Err(Error::Parity(format!(
            "T_{d} has no x^{n} term: d and n differ in parity"
        ))),
    }
}

/// `(d + n)^n / n!`, an upper bound on `|[x^n] T_d|`.
pub fn chebyshev_coeff_bound(d: usize, n: usize) -> f64 {
    let base = (d + n) as f64;
    (1..=n).fold(1.0, |acc, i| acc * base / i as f64)
}

/// `sum_j |[x^{2j}] T_{2n}|`, equal to `|T_{2n}(i)|`.
pub fn chebyshev_coeff_1norm(n: usize) -> f64 {
    let r = std::f64::consts::SQRT_2;
    let e = 2 * n as i32;
    0.5 * (1.0 + r).powi(e) + 0.5 * (1.0 - r).powi(e)
}

/// Upper bounds on `(||P_<k||, ||P_>=k||)` for any degree-`d` polynomial with
/// sup-norm at most one on `[-1, 1]`.
pub fn constituent_norm_bounds(d: usize, k: usize) -> (f64, f64) {
    let low: f64 = (0..k.min(d + 1)).map(|n| chebyshev_coeff_bound(d, n)).sum();
    let high_sq: f64 = (k..=d)
        .map(|n| chebyshev_coeff_bound(n, k).powi(2))
        .sum();
    (low, std::f64::consts::SQRT_2 * high_sq.sqrt())
}
