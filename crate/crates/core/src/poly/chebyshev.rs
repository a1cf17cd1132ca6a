use super::{norm::sup_norm_by, Parity, Polynomial};
use crate::scalar::Scalar;
use num_rational::BigRational;
use num_traits::Zero;

/// `sum_n c_n T_n(x)` with no halving of `c_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries<T: Scalar> {
    coeffs: Vec<T>,
}

impl<T: Scalar> ChebyshevSeries<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        // Same trimming rule as the monomial basis.
        ChebyshevSeries { coeffs: Polynomial::new(coeffs).into_coeffs() }
    }

    /// The single term `T_n`.
    pub fn basis(n: usize) -> Self {
        let mut c = vec![T::zero(); n + 1];
        c[n] = T::one();
        ChebyshevSeries { coeffs: c }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_negligible()
    }

    pub fn parity(&self) -> Parity {
        // T_n has the parity of n.
        Polynomial::new(self.coeffs.clone()).parity()
    }

    /// `(even part, odd part)`.
    pub fn parity_parts(&self) -> (Self, Self) {
        let (e, o) = Polynomial::new(self.coeffs.clone()).parity_parts();
        (Self::new(e.into_coeffs()), Self::new(o.into_coeffs()))
    }

    /// Clenshaw recurrence.
    pub fn eval(&self, x: &T) -> T {
        let two_x = x.clone() * T::from_i64(2);
        let mut b1 = T::zero();
        let mut b2 = T::zero();
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = c.clone() + two_x.clone() * b1.clone() - b2.clone();
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0].clone() + x.clone() * b1 - b2
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Monomial form, computed exactly and rounded once.
    pub fn to_monomial(&self) -> Polynomial<T> {
        exact_map(&self.coeffs, cheb_to_mono)
    }

    /// Monomial form computed in `T` itself.
    pub fn to_monomial_native(&self) -> Polynomial<T> {
        Polynomial::new(cheb_to_mono(&self.coeffs))
    }
}

impl ChebyshevSeries<f64> {
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.eval(&x)
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm_by(|x| self.eval(&x).abs(), -1.0, 1.0, self.degree())
    }
}

impl<T: Scalar> Polynomial<T> {
    /// Chebyshev-basis form, computed exactly and rounded once.
    pub fn to_chebyshev(&self) -> ChebyshevSeries<T> {
        ChebyshevSeries::new(exact_map(self.coeffs(), mono_to_cheb).into_coeffs())
    }

    /// Chebyshev-basis form computed in `T` itself.
    pub fn to_chebyshev_native(&self) -> ChebyshevSeries<T> {
        ChebyshevSeries::new(mono_to_cheb(self.coeffs()))
    }

    pub fn from_chebyshev(series: &ChebyshevSeries<T>) -> Self {
        series.to_monomial()
    }
}

/// Applies a linear basis map over exact rationals, real and imaginary parts
/// separately.
fn exact_map<T: Scalar>(
    coeffs: &[T],
    f: fn(&[BigRational]) -> Vec<BigRational>,
) -> Polynomial<T> {
    let (re, im): (Vec<_>, Vec<_>) = coeffs.iter().map(|c| c.to_exact()).unzip();
    let re = f(&re);
    let im = if im.iter().all(|v| v.is_zero()) {
        vec![BigRational::zero(); re.len()]
    } else {
        f(&im)
    };
    Polynomial::new(re.iter().zip(&im).map(|(r, i)| T::from_exact(r, i)).collect())
}

fn cheb_to_mono<T: Scalar>(c: &[T]) -> Vec<T> {
    let n = c.len();
    let mut out = vec![T::zero(); n];
    let mut prev: Vec<T> = vec![T::one()];
    let mut cur: Vec<T> = vec![T::zero(), T::one()];
    for (m, cm) in c.iter().enumerate() {
        let t = match m {
            0 => &prev,
            _ => &cur,
        };
        if !cm.is_zero() {
            for (i, ti) in t.iter().enumerate() {
                out[i] += cm.clone() * ti.clone();
            }
        }
        if m >= 1 {
            // T_{m+1} = 2x T_m - T_{m-1}
            let mut next = vec![T::zero(); cur.len() + 1];
            for (i, ti) in cur.iter().enumerate() {
                next[i + 1] += ti.clone() * T::from_i64(2);
            }
            for (i, pi) in prev.iter().enumerate() {
                next[i] -= pi.clone();
            }
            prev = std::mem::replace(&mut cur, next);
        }
    }
    out
}

fn mono_to_cheb<T: Scalar>(a: &[T]) -> Vec<T> {
    let n = a.len();
    let mut out = vec![T::zero(); n];
    let half = T::one() / T::from_i64(2);
    // Chebyshev coefficients of x^m.
    let mut e: Vec<T> = vec![T::one()];
    for (m, am) in a.iter().enumerate() {
        if m > 0 {
            let mut next = vec![T::zero(); e.len() + 1];
            for (j, ej) in e.iter().enumerate() {
                if ej.is_zero() {
                    continue;
                }
                if j == 0 {
                    next[1] += ej.clone();
                } else {
                    let h = ej.clone() * half.clone();
                    next[j + 1] += h.clone();
                    next[j - 1] += h;
                }
            }
            e = next;
        }
        if !am.is_zero() {
            for (j, ej) in e.iter().enumerate() {
                out[j] += am.clone() * ej.clone();
            }
        }
    }
    out
}

/// `T_n` in the monomial basis, by the three-term recurrence.
pub fn chebyshev_t<T: Scalar>(n: usize) -> Polynomial<T> {
    chebyshev_table::<T>(n).pop().expect("non-empty table")
}

/// `[T_0, ..., T_n]` in the monomial basis.
pub fn chebyshev_table<T: Scalar>(n: usize) -> Vec<Polynomial<T>> {
    let mut out = vec![Polynomial::<T>::one()];
    if n == 0 {
        return out;
    }
    out.push(Polynomial::monomial(1));
    let two_x = Polynomial::new(vec![T::zero(), T::from_i64(2)]);
    for m in 1..n {
        let next = &(&two_x * &out[m]) - &out[m - 1];
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use crate::ExactPoly;

    #[test]
    fn t4_and_x4() {
        let t4 = chebyshev_t::<f64>(4);
        assert_eq!(t4.coeffs(), &[1.0, 0.0, -8.0, 0.0, 8.0]);
        let x4 = Polynomial::<f64>::monomial(4).to_chebyshev();
        assert_eq!(x4.coeffs(), &[0.375, 0.0, 0.5, 0.0, 0.125]);
    }

    #[test]
    fn exact_round_trip() {
        let p = ExactPoly::new(vec![rational(3), rational(-1), rational(0), rational(7)]);
        let back = p.to_chebyshev().to_monomial();
        assert_eq!(back, p);
    }

    #[test]
    fn clenshaw_matches_monomial() {
        let s = ChebyshevSeries::<f64>::new(vec![0.1, -0.4, 0.3, 0.25]);
        let m = s.to_monomial();
        for i in 0..21 {
            let x = -1.0 + 0.1 * i as f64;
            assert!((s.eval(&x) - m.eval(&x)).abs() < 1e-14);
        }
    }
}
