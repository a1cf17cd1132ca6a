use num_bigint::BigInt;
use pqsp_core::poly::*;
use pqsp_core::{ExactPoly, RealPoly, RealSeries, Scalar};
use proptest::prelude::*;

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| -1.0 + 2.0 * i as f64 / (n - 1) as f64)
}

#[test]
fn eval_examples() {
    assert_eq!(RealPoly::from_f64(&[1.0, 0.0, -2.0]).eval(&0.0), 1.0);
    assert_eq!(RealPoly::from_f64(&[1.0, 0.0, -8.0, 0.0, 8.0]).eval(&1.0), 1.0);
    assert_eq!(RealPoly::from_f64(&[0.0, 1.0, 1.0, 1.0]).eval(&0.5), 0.875);
}

#[test]
fn sup_norm_examples() {
    let t6 = chebyshev_t::<f64>(6);
    assert!((t6.sup_norm() - 1.0).abs() < 1e-8);
    assert!((RealPoly::monomial(1).sup_norm() - 1.0).abs() < 1e-12);
    assert!((RealPoly::from_f64(&[1.0, 0.0, -2.0]).sup_norm() - 1.0).abs() < 1e-12);
    // x - x^3 peaks at 1/sqrt(3) strictly inside the interval.
    let p = RealPoly::from_f64(&[0.0, 1.0, 0.0, -1.0]);
    let want = 2.0 / (3.0 * 3f64.sqrt());
    assert!((p.sup_norm() - want).abs() < 1e-8 * want);
    assert!((p.sup_norm_on(0.0, 0.3) - (0.3 - 0.027)).abs() < 1e-9);
}

#[test]
fn basis_conversion_examples() {
    let t2 = RealPoly::from_f64(&[-1.0, 0.0, 2.0]).to_chebyshev();
    assert_eq!(t2.coeffs(), &[0.0, 0.0, 1.0]);
    let t4 = RealSeries::basis(4).to_monomial();
    assert_eq!(t4.coeffs(), &[1.0, 0.0, -8.0, 0.0, 8.0]);
}

#[test]
fn exact_conversion_has_no_rounding() {
    let p: ExactPoly = chebyshev_t(20);
    let back = Polynomial::from_chebyshev(&p.to_chebyshev());
    assert_eq!(p, back);
    assert_eq!(p.to_chebyshev(), ChebyshevSeries::basis(20));
}

#[test]
fn split_examples() {
    let (lo, hi) = RealPoly::from_f64(&[1.0, 1.0, 1.0, 1.0]).split_constituents(2).unwrap();
    assert_eq!((lo.coeffs(), hi.coeffs()), (&[1.0, 1.0][..], &[1.0, 1.0][..]));
    let (lo, hi) = RealPoly::monomial(5).split_constituents(2).unwrap();
    assert!(lo.is_zero());
    assert_eq!(hi, RealPoly::monomial(3));
    let (_, hi) = chebyshev_t::<f64>(6).split_constituents(2).unwrap();
    assert_eq!(hi.coeffs(), &[18.0, 0.0, -48.0, 0.0, 32.0]);
    assert!(RealPoly::monomial(3).split_constituents(4).is_err());
    assert!(RealPoly::monomial(3).split_constituents(0).is_err());
}

#[test]
fn parity_examples() {
    let (e, o) = RealPoly::from_f64(&[1.0, 2.0, 3.0, 4.0]).parity_parts();
    assert_eq!(e.coeffs(), &[1.0, 0.0, 3.0]);
    assert_eq!(o.coeffs(), &[0.0, 2.0, 0.0, 4.0]);
    let (e, o) = chebyshev_t::<f64>(5).parity_parts();
    assert!(e.is_zero());
    assert_eq!(o, chebyshev_t(5));
    assert_eq!(chebyshev_t::<f64>(5).parity(), Parity::Odd);
    assert_eq!(RealPoly::from_f64(&[1.0, 1.0]).parity(), Parity::Indefinite);
}

#[test]
fn coefficient_examples() {
    assert_eq!(chebyshev_coefficient(4, 2, ParityCheck::Strict).unwrap(), -8.0);
    assert_eq!(chebyshev_coefficient(1, 1, ParityCheck::Strict).unwrap(), 1.0);
    assert_eq!(chebyshev_coefficient(2, 0, ParityCheck::Strict).unwrap(), -1.0);
    assert!(chebyshev_coefficient(4, 1, ParityCheck::Strict).is_err());
    assert_eq!(chebyshev_coefficient(4, 1, ParityCheck::Lenient).unwrap(), 0.0);
    assert_eq!(chebyshev_coeff_bound(4, 2), 18.0);
    assert_eq!(chebyshev_coeff_bound(9, 0), 1.0);
    assert!((chebyshev_coeff_bound(6, 6) - 4147.2).abs() < 1e-9);
    assert_eq!(chebyshev_coeff_1norm(0), 1.0);
    assert!((chebyshev_coeff_1norm(1) - 3.0).abs() < 1e-12);
    assert!((chebyshev_coeff_1norm(3) - 99.0).abs() < 1e-10);
    assert_eq!(constituent_norm_bounds(4, 1).0, 1.0);
    assert_eq!(constituent_norm_bounds(10, 2).0, 12.0);
}

#[test]
fn closed_form_coefficients_match_recurrence_exactly() {
    let table = chebyshev_table::<num_rational::BigRational>(40);
    for (d, t) in table.iter().enumerate() {
        for n in 0..=d + 1 {
            let want = t.coeff(n);
            let got = chebyshev_coefficient_exact(d, n).unwrap_or_else(|| BigInt::from(0));
            assert_eq!(want, num_rational::BigRational::from_integer(got), "d = {d}, n = {n}");
        }
    }
}

#[test]
fn chebyshev_coefficients_of_bounded_polynomials() {
    // For sup-norm one, |c_n| is bounded by 4/pi and no better: x(3 - x^2)/2
    // is monotone on [-1, 1] with sup-norm one, yet c_1 = 9/8.
    let p = RealPoly::from_f64(&[0.0, 1.5, 0.0, -0.5]);
    assert!((p.sup_norm() - 1.0).abs() < 1e-12);
    let c = p.to_chebyshev();
    assert_eq!(c.coeff(1), 1.125);
    assert!(c.coeff(1) <= 4.0 / std::f64::consts::PI);
}

#[test]
fn f32_polynomials_share_the_generic_path() {
    let p = Polynomial::<f32>::new(vec![1.0, 0.0, -2.0]);
    assert_eq!(p.to_chebyshev().coeffs(), &[0.0, 0.0, -1.0]);
    assert_eq!(Polynomial::from_chebyshev(&p.to_chebyshev()), p);
    assert!(<f32 as Scalar>::from_f64(1e-7).is_negligible());
}

fn coeffs(max_deg: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, 1..=max_deg + 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_round_trip(c in coeffs(64)) {
        let p = RealPoly::new(c);
        let back = RealPoly::from_chebyshev(&p.to_chebyshev());
        let scale = p.coeff_one_norm().max(1.0);
        for x in grid(200) {
            prop_assert!((p.eval(&x) - back.eval(&x)).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn constituent_identity(c in coeffs(30), xs in prop::collection::vec(-1.0..1.0f64, 100)) {
        let p = RealPoly::new(c);
        for k in 1..=p.degree() {
            let (lo, hi) = p.split_constituents(k).unwrap();
            for &x in &xs {
                let r = lo.eval(&x) + x.powi(k as i32) * hi.eval(&x);
                prop_assert!((p.eval(&x) - r).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn clenshaw_agrees_with_monomial_form(c in coeffs(40), x in -1.0..1.0f64) {
        let s = RealSeries::new(c);
        let m = s.to_monomial();
        // Horner on the monomial form loses digits in proportion to its 1-norm.
        let scale = m.coeff_one_norm().max(1.0);
        prop_assert!((s.eval(&x) - m.eval(&x)).abs() <= 1e-13 * scale);
    }

    #[test]
    fn constituent_bounds_certify(c in coeffs(20)) {
        let p = RealPoly::new(c);
        prop_assume!(p.degree() >= 1);
        let p = p.scale(&(1.0 / p.sup_norm()));
        let d = p.degree();
        for k in 1..=d {
            let (lo, hi) = p.split_constituents(k).unwrap();
            let (bl, bh) = constituent_norm_bounds(d, k);
            prop_assert!(lo.sup_norm() <= bl * (1.0 + 1e-9));
            prop_assert!(hi.sup_norm() <= bh * (1.0 + 1e-9));
        }
    }

    #[test]
    fn chebyshev_coefficients_within_four_over_pi(c in coeffs(20)) {
        let p = RealPoly::new(c);
        let p = p.scale(&(1.0 / p.sup_norm()));
        for v in p.to_chebyshev().coeffs() {
            prop_assert!(v.abs() <= 4.0 / std::f64::consts::PI + 1e-9);
        }
    }

    #[test]
    fn parity_parts_sum_back(c in coeffs(20)) {
        let p = RealPoly::new(c);
        let (e, o) = p.parity_parts();
        prop_assert_eq!(&e + &o, p);
        prop_assert_ne!(e.parity(), Parity::Odd);
    }
}
