use pqsp_core::poly::chebyshev_t;
use pqsp_core::qsp::{Convention, QspPhases};
use pqsp_core::sim::*;
use pqsp_core::{Complex64, Error, Poly, RealPoly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn diag(p: &[f64]) -> DensityMatrix {
    DensityMatrix::from_diagonal(p).unwrap()
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `P(M)` by Horner on matrices, independent of any eigendecomposition.
fn matrix_poly(p: &Poly, m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut acc = CMatrix::zeros(n, n);
    for a in p.coeffs().iter().rev() {
        acc = &acc * m + CMatrix::identity(n, n) * *a;
    }
    acc
}

fn tr(m: &CMatrix) -> Complex64 {
    m.trace()
}

/// `tr(rho^k prod_j |P_j(rho)|^2)` by matrix products.
fn z_oracle(factors: &[Poly], rho: &CMatrix) -> f64 {
    let n = rho.nrows();
    let mut m = CMatrix::identity(n, n);
    for f in factors {
        let pm = matrix_poly(f, rho);
        m = m * rho * &pm.adjoint() * &pm;
    }
    tr(&m).re
}

fn random_factor(rng: &mut impl Rng, max_deg: usize) -> Poly {
    let d = rng.random_range(0..=max_deg);
    let p = Poly::new((0..=d).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect());
    let n = p.sup_norm();
    p.scale(&c(1.0 / n))
}

#[test]
fn density_validation() {
    assert!(DensityMatrix::from_diagonal(&[0.5, 0.6]).is_err());
    assert!(DensityMatrix::from_diagonal(&[1.2, -0.2]).is_err());
    let m = CMatrix::from_row_slice(2, 2, &[c(0.5), Complex64::new(0.0, 0.1), c(0.0), c(0.5)]);
    assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState(_))));
    let r = DensityMatrix::random(4, 2, 1).unwrap();
    assert_eq!(r.rank(1e-10), 2);
    let back = DensityMatrix::from_rows(&r.to_rows()).unwrap();
    assert!(max_abs(&(back.matrix() - r.matrix())) < 1e-15);
}

#[test]
fn purification_examples() {
    let p = purify(&DensityMatrix::pure(&[c(1.0), c(0.0)]).unwrap());
    let s = p.state();
    assert!((s[0].norm() - 1.0).abs() < 1e-12);
    let mm = purify(&DensityMatrix::maximally_mixed(2).unwrap());
    let s = mm.state();
    let weights: Vec<f64> = s.iter().map(|z| z.norm_sqr()).collect();
    assert!(weights.iter().filter(|w| (*w - 0.5).abs() < 1e-12).count() == 2);
    for rho in [diag(&[0.75, 0.25]), DensityMatrix::random(4, 4, 9).unwrap()] {
        let p = purify(&rho);
        assert!(max_abs(&(p.reduced_state() - rho.matrix())) < 1e-12);
        assert!(unitarity_error(&p.unitary) < 1e-10);
    }
}

#[test]
fn density_block_encoding() {
    let pure = DensityMatrix::pure(&[c(1.0), c(0.0)]).unwrap();
    for rho in [pure, diag(&[0.75, 0.25]), DensityMatrix::random(4, 3, 2).unwrap()] {
        let enc = block_encode_density(&purify(&rho));
        assert!(enc.unitarity_error() < 1e-10);
        assert!(max_abs(&(enc.block() - rho.matrix())) < 1e-10);
    }
}

#[test]
fn dilation_examples() {
    let i2 = CMatrix::identity(2, 2);
    let u = oracle_block_encode(&i2).unwrap().unitary;
    let mut want = CMatrix::zeros(4, 4);
    want.view_mut((0, 0), (2, 2)).copy_from(&i2);
    want.view_mut((2, 2), (2, 2)).copy_from(&(-&i2));
    assert!(max_abs(&(u - want)) < 1e-12);
    let u = oracle_block_encode(&CMatrix::zeros(2, 2)).unwrap().unitary;
    let mut want = CMatrix::zeros(4, 4);
    want.view_mut((0, 2), (2, 2)).copy_from(&i2);
    want.view_mut((2, 0), (2, 2)).copy_from(&i2);
    assert!(max_abs(&(u - want)) < 1e-12);
    let rho = diag(&[0.75, 0.25]);
    let t2 = rho.apply(|x| c(2.0 * x * x - 1.0));
    let enc = oracle_block_encode(&t2).unwrap();
    assert!((enc.block()[(0, 0)] - c(0.125)).norm() < 1e-12);
    assert!((enc.block()[(1, 1)] - c(-0.875)).norm() < 1e-12);
    assert!(matches!(oracle_block_encode(&(i2 * c(1.01))), Err(Error::NotContraction(_))));
}

#[test]
fn qsp_on_block_encodings() {
    let rho = diag(&[0.75, 0.25]);
    let enc = block_encode_density(&purify(&rho));
    let x = apply_qsp(&QspPhases::new(vec![0.0, 0.0], Convention::Wx00).unwrap(), &enc);
    assert!(max_abs(&(x.block() - rho.matrix())) < 1e-10);
    let t2 = apply_qsp(&QspPhases::new(vec![0.0; 3], Convention::Wx00).unwrap(), &enc);
    assert!((t2.block()[(0, 0)] - c(0.125)).norm() < 1e-10);
    assert!((t2.block()[(1, 1)] - c(-0.875)).norm() < 1e-10);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = CMatrix::from_fn(4, 4, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let h = (&h + h.adjoint()) * c(0.5);
    let a = &h * c(0.99 / h.norm());
    let enc = oracle_block_encode(&a).unwrap();
    let t4 = apply_qsp(&QspPhases::new(vec![0.0; 5], Convention::Wx00).unwrap(), &enc);
    let want = matrix_poly(&chebyshev_t::<f64>(4).to_complex(), &a);
    assert!(max_abs(&(t4.block() - want)) < 1e-8);
    assert!(t4.unitarity_error() < 1e-10);
}

#[test]
fn hadamard_and_qsp_tests() {
    let mut s = ShotSampler::new(1);
    let rho = diag(&[0.75, 0.25]);
    let id = oracle_block_encode(&CMatrix::identity(2, 2)).unwrap();
    let t = hadamard_test(&id, &rho, Shots::Exact, Part::Real, &mut s).unwrap();
    assert_eq!((t.probability, t.value), (1.0, 1.0));
    let enc = block_encode_density(&purify(&rho));
    let t = hadamard_test(&enc, &rho, Shots::Exact, Part::Real, &mut s).unwrap();
    assert!((t.value - 0.625).abs() < 1e-12);
    let t = hadamard_test(&enc, &rho, Shots::Exact, Part::Imaginary, &mut s).unwrap();
    assert!(t.value.abs() < 1e-12);
    assert!(Shots::sampled(0).is_err());

    assert!((qsp_test(&id, &rho, Shots::Exact, &mut s).unwrap().probability - 1.0).abs() < 1e-12);
    assert!((qsp_test(&enc, &rho, Shots::Exact, &mut s).unwrap().probability - 0.4375).abs() < 1e-12);
    let zero = oracle_block_encode(&CMatrix::zeros(2, 2)).unwrap();
    assert!(qsp_test(&zero, &rho, Shots::Exact, &mut s).unwrap().probability.abs() < 1e-12);

    let t = hadamard_test(&enc, &rho, Shots::Sampled(40_000), Part::Real, &mut s).unwrap();
    assert!((t.value - 0.625).abs() < 5.0 * t.std_error);
    assert_eq!(t.shots, 40_000);
}

#[test]
fn swap_examples() {
    let mut s = ShotSampler::new(2);
    let zero = DensityMatrix::pure(&[c(1.0), c(0.0)]).unwrap();
    let one = DensityMatrix::pure(&[c(0.0), c(1.0)]).unwrap();
    let g = |st: &[&DensityMatrix], s: &mut ShotSampler| {
        let m: Vec<&CMatrix> = st.iter().map(|r| r.matrix()).collect();
        generalized_swap_expectation(&m, Shots::Exact, s).unwrap().value
    };
    assert!((g(&[&zero, &zero], &mut s) - 1.0).abs() < 1e-12);
    assert!(g(&[&zero, &one], &mut s).abs() < 1e-12);
    let rho = diag(&[0.75, 0.25]);
    assert!((g(&[&rho, &rho, &rho], &mut s) - 0.4375).abs() < 1e-12);
    let big = DensityMatrix::maximally_mixed(3).unwrap();
    assert!(generalized_swap_expectation(&[rho.matrix(), big.matrix()], Shots::Exact, &mut s).is_err());
}

#[test]
fn parallel_examples() {
    let mut s = ShotSampler::new(3);
    let rho = DensityMatrix::random(3, 3, 5).unwrap();
    let ones = vec![RealPoly::one(), RealPoly::one()];
    let e = parallel_qsp_run(&ones, &rho, ParallelOptions::default(), &mut s).unwrap();
    let want = tr(&(rho.matrix() * rho.matrix())).re;
    assert!((e.value - want).abs() < 1e-12);

    let rho = diag(&[0.75, 0.25]);
    let xs = vec![RealPoly::monomial(1), RealPoly::monomial(1)];
    for mode in [SimMode::Direct, SimMode::Circuit] {
        let opts = ParallelOptions { mode, ..Default::default() };
        let e = parallel_qsp_run(&xs, &rho, opts, &mut s).unwrap();
        assert!((e.value - 0.17822265625).abs() < 1e-12, "{mode:?}");
    }
    let opts = ParallelOptions { mode: SimMode::Circuit, route: EncodingRoute::Qsp { tol: 1e-10 }, ..Default::default() };
    let e = parallel_qsp_run(&xs, &rho, opts, &mut s).unwrap();
    assert!((e.value - 0.17822265625).abs() < 1e-10);

    let big = vec![RealPoly::monomial(1).scale(&2.0)];
    assert!(matches!(
        parallel_qsp_run(&big, &rho, ParallelOptions::default(), &mut s),
        Err(Error::NeedsRescale { index: 0, .. })
    ));
    let pure = DensityMatrix::pure(&[c(1.0), c(0.0)]).unwrap();
    let kills = vec![RealPoly::from_f64(&[1.0, -1.0]).scale(&0.5)];
    assert!(matches!(
        parallel_qsp_run(&kills, &pure, ParallelOptions::default(), &mut s),
        Err(Error::PostSelectionImpossible)
    ));
}

#[test]
fn depth_report_examples() {
    let sq = vec![RealPoly::monomial(2), RealPoly::monomial(2)];
    assert_eq!(query_depth_report(&sq), QueryDepth { depth: 2, width: 2 });
    let mixed = vec![RealPoly::from_f64(&[0.1, 0.2, 0.0, 0.3]); 3];
    assert_eq!(query_depth_report(&mixed), QueryDepth { depth: 6, width: 3 });
}

#[test]
fn sampling_is_unbiased_and_scales() {
    let rho = DensityMatrix::random(2, 2, 8).unwrap();
    let f = vec![RealPoly::monomial(1), RealPoly::from_f64(&[0.3, 0.0, 0.5])];
    let exact = parallel_qsp_run(&f, &rho, ParallelOptions::default(), &mut ShotSampler::new(0)).unwrap().value;
    let mut sampler = ShotSampler::new(21);
    let reps = 200;
    let opts = |n| ParallelOptions { shots: Shots::Sampled(n), ..Default::default() };
    let runs: Vec<ParallelEstimate> =
        (0..reps).map(|_| parallel_qsp_run(&f, &rho, opts(10_000), &mut sampler).unwrap()).collect();
    let mean = runs.iter().map(|r| r.value).sum::<f64>() / reps as f64;
    let se_mean = runs.iter().map(|r| r.std_error).sum::<f64>() / reps as f64 / (reps as f64).sqrt();
    assert!((mean - exact).abs() <= 5.0 * se_mean);
    let lo = parallel_qsp_run(&f, &rho, opts(1_000), &mut sampler).unwrap().std_error;
    let hi = parallel_qsp_run(&f, &rho, opts(100_000), &mut sampler).unwrap().std_error;
    let ratio = lo / hi;
    assert!((7.0..=14.0).contains(&ratio), "{ratio}");
}

#[test]
fn identical_seeds_are_bit_identical() {
    let rho = DensityMatrix::random(3, 2, 6).unwrap();
    let f = vec![RealPoly::monomial(1); 2];
    let opts = ParallelOptions { shots: Shots::Sampled(5_000), ..Default::default() };
    let a = parallel_qsp_run(&f, &rho, opts, &mut ShotSampler::new(77)).unwrap();
    let b = parallel_qsp_run(&f, &rho, opts, &mut ShotSampler::new(77)).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    let c = parallel_qsp_run(&f, &rho, opts, &mut ShotSampler::new(78)).unwrap();
    assert_ne!(a.value.to_bits(), c.value.to_bits());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn swap_identity(d in 1usize..=8, k in 1usize..=5, seed in any::<u64>()) {
        let rho = DensityMatrix::random(d, d, seed).unwrap();
        let m = vec![rho.matrix(); k];
        let got = generalized_swap_expectation(&m, Shots::Exact, &mut ShotSampler::new(0)).unwrap().value;
        let want = tr(&(0..k).fold(CMatrix::identity(d, d), |acc, _| acc * rho.matrix())).re;
        prop_assert!((got - want).abs() <= 1e-10);
    }

    #[test]
    fn block_encodings_are_exact(d in prop::sample::select(vec![2usize, 4, 8]), seed in any::<u64>()) {
        let rho = DensityMatrix::random(d, d, seed).unwrap();
        let enc = block_encode_density(&purify(&rho));
        prop_assert!(max_abs(&(enc.block() - rho.matrix())) <= 1e-10);
        prop_assert!(enc.unitarity_error() <= 1e-10);
        let m = rho.apply(|x| Complex64::new(x.cos(), x.sin()) * 0.9);
        let enc = oracle_block_encode(&m).unwrap();
        prop_assert!(max_abs(&(enc.block() - &m)) <= 1e-10);
        prop_assert!(enc.unitarity_error() <= 1e-10);
    }

    #[test]
    fn direct_mode_matches_matrix_oracle(d in 1usize..=4, k in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = DensityMatrix::random(d, rng.random_range(1..=d), seed).unwrap();
        let factors: Vec<Poly> = (0..k).map(|_| random_factor(&mut rng, 5)).collect();
        let z = parallel_qsp_run(&factors, &rho, ParallelOptions::default(), &mut ShotSampler::new(0));
        let want = z_oracle(&factors, rho.matrix());
        match z {
            Ok(e) => prop_assert!((e.value - want).abs() <= 1e-8),
            Err(Error::PostSelectionImpossible) => prop_assert!(want.abs() <= 1e-12),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn circuit_mode_agrees(d in 2usize..=4, k in 2usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = DensityMatrix::random(d, d, seed).unwrap();
        let factors: Vec<Poly> = (0..k).map(|_| random_factor(&mut rng, 3)).collect();
        let a = parallel_qsp_probabilities(&factors, &rho, SimMode::Direct, EncodingRoute::Oracle).unwrap();
        let b = parallel_qsp_probabilities(&factors, &rho, SimMode::Circuit, EncodingRoute::Oracle).unwrap();
        prop_assert!((a.value() - b.value()).abs() <= 1e-8);
        prop_assert!((a.success() - b.success()).abs() <= 1e-8);
    }

    #[test]
    fn qsp_route_matches_oracle_route(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = DensityMatrix::random(2, 2, seed).unwrap();
        let f: Vec<RealPoly> = (0..2)
            .map(|_| {
                let p = RealPoly::from_f64(&[0.0, rng.random_range(-1.0..1.0), 0.0, rng.random_range(-1.0..1.0)]);
                let n = p.sup_norm();
                p.scale(&(0.9 / n))
            })
            .collect();
        let a = parallel_qsp_probabilities(&f, &rho, SimMode::Circuit, EncodingRoute::Oracle).unwrap();
        let b = parallel_qsp_probabilities(&f, &rho, SimMode::Circuit, EncodingRoute::Qsp { tol: 1e-10 }).unwrap();
        prop_assert!((a.value() - b.value()).abs() <= 1e-8);
    }
}

#[test]
fn random_states_are_valid() {
    for seed in 0..20 {
        let r = DensityMatrix::random(5, 3, seed).unwrap();
        let m = r.matrix();
        assert!(max_abs(&(m - m.adjoint())) < 1e-12);
        assert!((tr(m).re - 1.0).abs() < 1e-12);
        assert!(r.eigenvalues().iter().all(|&l| l >= 0.0));
    }
}
