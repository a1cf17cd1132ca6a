use pqsp_core::factor::*;
use pqsp_core::poly::{chebyshev_coeff_1norm, chebyshev_t, Polynomial};
use pqsp_core::{Complex64, Error, Poly, RealPoly};
use proptest::prelude::{any, prop, prop_assert, proptest, ProptestConfig};
use proptest::strategy::Strategy as Gen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn sorted_real(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn roots_of_simple_polynomials() {
    let r = find_roots(&Poly::from_f64(&[-1.0, 0.0, 1.0])).unwrap();
    assert_eq!(r.roots.len(), 2);
    let re = sorted_real(r.roots.iter().map(|z| z.value.re).collect());
    assert!((re[0] + 1.0).abs() < 1e-12 && (re[1] - 1.0).abs() < 1e-12);
    assert!(r.roots.iter().all(|z| z.multiplicity == 1));

    let r = find_roots(&Poly::from_f64(&[1.0, 0.0, 2.0, 0.0, 1.0])).unwrap();
    assert_eq!(r.roots.len(), 2);
    assert_eq!(r.total_multiplicity(), 4);
    for z in &r.roots {
        assert_eq!(z.multiplicity, 2);
        assert!((z.value.im.abs() - 1.0).abs() < 1e-7 && z.value.re.abs() < 1e-7);
    }
}

#[test]
fn roots_of_t4_are_chebyshev_nodes() {
    let r = find_roots(&chebyshev_t::<f64>(4).to_complex()).unwrap();
    let got = sorted_real(r.roots.iter().map(|z| z.value.re).collect());
    let want = sorted_real(
        (1..=4).map(|m| ((2 * m - 1) as f64 * std::f64::consts::PI / 8.0).cos()).collect(),
    );
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-12);
    }
}

#[test]
fn root_set_reconstructs_source() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in [5, 12, 30] {
        let c: Vec<Complex64> =
            (0..=d).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        let p = Poly::new(c);
        let r = find_roots(&p).unwrap();
        assert_eq!(r.total_multiplicity(), d);
        let q = r.reconstruct();
        for i in 0..50 {
            let x = Complex64::new(-1.0 + i as f64 / 25.0, 0.0);
            let want = p.eval(&x);
            assert!((q.eval(&x) - want).norm() <= 1e-6 * (1.0 + want.norm()));
        }
    }
}

#[test]
fn factor_examples() {
    let plan = factorize_nonneg(&RealPoly::monomial(2), 1, Strategy::RoundRobin).unwrap();
    assert_eq!(plan.factors.len(), 1);
    assert!((&plan.factors[0] - &Poly::monomial(1)).coeff_one_norm() < 1e-12);
    assert!((plan.k_constant - 1.0).abs() < 1e-12);

    let r = RealPoly::from_f64(&[1.0, 0.0, 2.0, 0.0, 1.0]);
    let plan = factorize_nonneg(&r, 2, Strategy::RoundRobin).unwrap();
    let x_minus_i = Poly::new(vec![-I, Complex64::new(1.0, 0.0)]);
    for f in &plan.factors {
        assert_eq!(f.degree(), 1);
        assert!((f - &x_minus_i).coeff_one_norm() < 1e-6);
    }
    let res = verify_factorization(&plan, &r);
    assert!(res < 1e-10, "{res}");
}

#[test]
fn factor_errors() {
    let odd = RealPoly::from_f64(&[0.0, 1.0, 0.0, 1.0]);
    assert!(matches!(factorize_nonneg(&odd, 1, Strategy::RoundRobin), Err(Error::OddDegree(3))));
    let negative = RealPoly::from_f64(&[-0.5, 0.0, 1.0]);
    assert!(matches!(
        factorize_nonneg(&negative, 1, Strategy::RoundRobin),
        Err(Error::NotNonNegative { .. })
    ));
    let x4 = RealPoly::monomial(4);
    assert!(matches!(
        factorize_nonneg(&x4, 3, Strategy::RoundRobin),
        Err(Error::TooManyThreads { threads: 3, half_degree: 2 })
    ));
    let padded = factorize_nonneg_padded(&RealPoly::monomial(2), 2, Strategy::RoundRobin).unwrap();
    assert_eq!(padded.factors.len(), 2);
    assert!(verify_factorization(&padded, &RealPoly::monomial(2)) < 1e-12);
}

#[test]
fn interleaving_beats_contiguous_on_t8_squared() {
    let r = chebyshev_t::<f64>(8).squared();
    let rr = factorize_nonneg(&r, 2, Strategy::RoundRobin).unwrap();
    let ct = factorize_nonneg(&r, 2, Strategy::Contiguous).unwrap();
    assert!(verify_factorization(&rr, &r) < 1e-6);
    assert!(verify_factorization(&ct, &r) < 1e-6);
    assert!(rr.k_constant * 4.0 < ct.k_constant, "{} vs {}", rr.k_constant, ct.k_constant);
    // prod |R_j|^2 = T_8^2 reaches one, so K^2 >= 1.
    assert!(rr.k_constant.powi(2) >= 1.0 - 1e-9);
}

#[test]
fn factorization_constant_and_rescaling() {
    let plan = factorize_nonneg(&RealPoly::from_f64(&[0.0, 0.0, 4.0]), 1, Strategy::RoundRobin).unwrap();
    assert!((factorization_constant(&plan) - 2.0).abs() < 1e-12);
    let scaled = rescale_factors(&plan).unwrap();
    assert!((&scaled.factors[0] - &Poly::monomial(1)).coeff_one_norm() < 1e-12);
    assert!((scaled.attenuation - 4.0).abs() < 1e-12);
    assert_eq!(scaled.k_constant, 1.0);
    let again = rescale_factors(&scaled).unwrap();
    assert_eq!(again.attenuation, scaled.attenuation);

    // (x - i) has sup-norm sqrt(2) at the endpoints.
    let r = RealPoly::from_f64(&[1.0, 0.0, 1.0]);
    let plan = factorize_nonneg(&r, 1, Strategy::RoundRobin).unwrap();
    assert!((plan.k_constant - 2f64.sqrt()).abs() < 1e-9);
    assert!((rescale_factors(&plan).unwrap().attenuation - 2.0).abs() < 1e-9);

    let zero = FactorizationPlan { norms: vec![0.0], ..plan };
    assert!(matches!(rescale_factors(&zero), Err(Error::DegenerateFactor { index: 0 })));
}

#[test]
fn corrupted_plan_is_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let q = RealPoly::new((0..=6).map(|_| rng.random_range(-1.0..1.0)).collect());
    let r = q.squared();
    let mut plan = factorize_nonneg(&r, 3, Strategy::RoundRobin).unwrap();
    assert!(verify_factorization(&plan, &r) < 1e-6);
    let roots = find_roots(&plan.factors[0]).unwrap();
    let mut moved = Polynomial::constant(plan.factors[0].leading());
    for (i, z) in roots.roots.iter().enumerate() {
        let v = if i == 0 { z.value + 0.1 } else { z.value };
        moved = &moved * &Poly::new(vec![-v, Complex64::new(1.0, 0.0)]).pow(z.multiplicity);
    }
    plan.factors[0] = moved;
    assert!(verify_factorization(&plan, &r) > 1e-3);
}

#[test]
fn worked_t6_decomposition() {
    let t6 = chebyshev_t::<f64>(6);
    let list = chebyshev_parallel_terms(&t6, 2, 8).unwrap();
    let find = |a, b| list.ctilde.iter().find(|c| c.a == a && c.b == b).map(|c| c.value);
    assert_eq!(find(1, 1), Some(2.0));
    assert_eq!(find(0, 1), Some(-1.0));
    assert_eq!(list.ctilde.len(), 2);
    for i in 0..500 {
        let x = -1.0 + 2.0 * i as f64 / 499.0;
        assert!((list.eval(x) - t6.eval(&x)).abs() < 1e-12);
        assert!((list.eval_ctilde(x) - t6.eval(&x)).abs() < 1e-12);
    }
}

#[test]
fn basis_element_passes_through() {
    for k in 1..=5 {
        let t = chebyshev_t::<f64>(2 * k);
        let list = chebyshev_parallel_terms(&t, k, 3 * k).unwrap();
        assert_eq!(list.ctilde.len(), 1);
        assert_eq!((list.ctilde[0].a, list.ctilde[0].b, list.ctilde[0].value), (1, 0, 1.0));
    }
}

#[test]
fn term_count_for_three_threads() {
    // d = 30 with k = 3 is parity-mismatched; d = 29 has the same index ranges.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c: Vec<f64> = (0..=26).map(|i| if i % 2 == 0 { rng.random_range(-1.0..1.0) } else { 0.0 }).collect();
    let high = RealPoly::new(c);
    assert!(matches!(chebyshev_parallel_terms(&high, 3, 30), Err(Error::Parity(_))));
    let list = chebyshev_parallel_terms(&high, 3, 29).unwrap();
    assert!(list.terms.len() <= (27 / 6 + 1) * 3 * (3 + 1) * 2);
}

#[test]
fn term_list_parity_errors() {
    assert!(matches!(chebyshev_parallel_terms(&RealPoly::monomial(2), 2, 5), Err(Error::Parity(_))));
    assert!(matches!(chebyshev_parallel_terms(&RealPoly::monomial(1), 1, 4), Err(Error::Parity(_))));
    assert!(chebyshev_parallel_terms(&RealPoly::monomial(4), 2, 4).is_err());
}

fn nonneg_poly() -> impl Gen<Value = RealPoly> {
    prop::collection::vec(-1.0..1.0f64, 2..=16).prop_map(|c| {
        let mut c = c;
        let n = c.len() - 1;
        c[n] += if c[n] >= 0.0 { 0.25 } else { -0.25 };
        RealPoly::new(c).squared()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn factorization_reconstructs_with_degree_cap(r in nonneg_poly()) {
        let d = r.degree();
        for k in 1..=d / 2 {
            let plan = factorize_nonneg(&r, k, Strategy::RoundRobin).unwrap();
            prop_assert!(verify_factorization(&plan, &r) <= 1e-6);
            prop_assert!(plan.factors.iter().all(|f| f.degree() <= d.div_ceil(2 * k)));
            let prod: f64 = plan.norms.iter().product();
            prop_assert!((plan.k_constant - prod).abs() <= 1e-10 * prod);
        }
    }

    #[test]
    fn roots_closed_under_conjugation(r in nonneg_poly()) {
        let set = find_roots(&r.to_complex()).unwrap();
        for z in &set.roots {
            let partner = set.roots.iter().any(|w| {
                (w.value - z.value.conj()).norm() <= 1e-7 * z.value.norm().max(1.0) * 1e2
                    && w.multiplicity == z.multiplicity
            });
            prop_assert!(partner, "{:?} has no conjugate partner", z);
        }
    }

    #[test]
    fn term_list_reconstructs_high_part(
        k in 2usize..=5,
        extra in 0usize..=6,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = k + 2 * extra + 2 * rng.random_range(0..=((40 - k) / 2 - extra).min(10));
        let m = d - k;
        let c: Vec<f64> = (0..=m).map(|i| if i % 2 == 0 { rng.random_range(-1.0..1.0) } else { 0.0 }).collect();
        let high = RealPoly::new(c);
        let n = high.sup_norm();
        let high = high.scale(&(1.0 / n));
        let list = chebyshev_parallel_terms(&high, k, d).unwrap();
        for i in 0..500 {
            let x = -1.0 + 2.0 * i as f64 / 499.0;
            prop_assert!((list.eval(x) - high.eval(&x)).abs() <= 1e-9);
        }
        let big_a = (d - k) / (2 * k);
        let cert = 2.0 * ((big_a + 1) as f64).powi(2) * k as f64 * chebyshev_coeff_1norm(k) * 3.0;
        prop_assert!(list.one_norm <= cert);
        for t in &list.terms {
            prop_assert!(t.a <= big_a && t.b < k && t.j <= k && t.l <= 1);
        }
    }
}

#[test]
fn balanced_norm_rarely_loses_to_contiguous() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut wins = 0;
    for _ in 0..40 {
        let q = RealPoly::new((0..=8).map(|_| rng.random_range(-1.0..1.0)).collect());
        let r = q.squared();
        let b = factorize_nonneg(&r, 2, Strategy::BalancedNorm).unwrap();
        let c = factorize_nonneg(&r, 2, Strategy::Contiguous).unwrap();
        if b.k_constant <= c.k_constant * (1.0 + 1e-9) {
            wins += 1;
        }
    }
    assert!(wins >= 36, "{wins}/40");
}
