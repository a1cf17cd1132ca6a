//! Self-check suites behind `pqsp validate`: identities that must hold to
//! numerical precision on a working build.

use crate::error::{Error, Result};
use crate::factor::{chebyshev_parallel_terms, factorize_nonneg, verify_factorization, Strategy};
use crate::poly::{
    chebyshev_coeff_1norm, chebyshev_coeff_bound, chebyshev_coefficient, chebyshev_table,
    constituent_norm_bounds, ParityCheck, Polynomial,
};
use crate::sim::{
    generalized_swap_expectation, parallel_qsp_probabilities, DensityMatrix, EncodingRoute, Shots,
    ShotSampler, SimMode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Swap,
    Modes,
    Factor,
    Terms,
    Bounds,
    Chebyshev,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Swap, Suite::Modes, Suite::Factor, Suite::Terms, Suite::Bounds, Suite::Chebyshev];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Swap => "swap",
            Suite::Modes => "modes",
            Suite::Factor => "factor",
            Suite::Terms => "terms",
            Suite::Bounds => "bounds",
            Suite::Chebyshev => "chebyshev",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidateOptions {
    pub dims: Vec<usize>,
    pub ks: Vec<usize>,
    pub seed: u64,
    /// Perturb every measured quantity by `1e-6`; a negative control that must
    /// make the suites fail.
    #[serde(default)]
    pub inject_fault: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { dims: vec![2, 4, 8], ks: vec![2, 3, 4, 5], seed: 0, inject_fault: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub error: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl ValidationSummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Ctx<'a> {
    opts: &'a ValidateOptions,
    rng: ChaCha8Rng,
    checks: Vec<Check>,
}

impl Ctx<'_> {
    fn fault(&self) -> f64 {
        if self.opts.inject_fault {
            1e-6
        } else {
            0.0
        }
    }

    fn record(&mut self, suite: Suite, name: String, error: f64, tolerance: f64) {
        let error = error + self.fault();
        self.checks.push(Check { suite, name, passed: error <= tolerance, error, tolerance });
    }

    fn random_state(&mut self, dim: usize) -> Result<DensityMatrix> {
        let seed = self.rng.random();
        DensityMatrix::random(dim, dim, seed)
    }

    fn random_real(&mut self, degree: usize) -> Polynomial<f64> {
        let mut c: Vec<f64> = (0..=degree).map(|_| self.rng.random_range(-1.0..1.0)).collect();
        c[degree] += if c[degree] >= 0.0 { 0.5 } else { -0.5 };
        Polynomial::new(c)
    }
}

pub fn run_suites(suites: &[Suite], opts: &ValidateOptions) -> Result<ValidationSummary> {
    let mut ctx = Ctx { opts, rng: ChaCha8Rng::seed_from_u64(opts.seed), checks: Vec::new() };
    for &s in suites {
        match s {
            Suite::Swap => swap(&mut ctx)?,
            Suite::Modes => modes(&mut ctx)?,
            Suite::Factor => factor(&mut ctx)?,
            Suite::Terms => terms(&mut ctx)?,
            Suite::Bounds => bounds(&mut ctx),
            Suite::Chebyshev => chebyshev(&mut ctx)?,
        }
    }
    let failed = ctx.checks.iter().filter(|c| !c.passed).count();
    Ok(ValidationSummary { passed: ctx.checks.len() - failed, failed, checks: ctx.checks })
}

fn swap(ctx: &mut Ctx) -> Result<()> {
    let mut sampler = ShotSampler::new(ctx.opts.seed);
    for &d in &ctx.opts.dims.clone() {
        for &k in &ctx.opts.ks.clone() {
            let rho = ctx.random_state(d)?;
            let states = vec![rho.matrix(); k];
            let got = generalized_swap_expectation(&states, Shots::Exact, &mut sampler)?.value;
            let want = rho.spectral_trace(|x| x.powi(k as i32).into()).re;
            ctx.record(Suite::Swap, format!("tr(rho^{k}), D = {d}"), (got - want).abs(), 1e-10);
        }
    }
    Ok(())
}

fn modes(ctx: &mut Ctx) -> Result<()> {
    for d in 2..=4 {
        for k in 2..=3 {
            let rho = ctx.random_state(d)?;
            let factors: Vec<Polynomial<f64>> = (0..k)
                .map(|_| {
                    let deg = ctx.rng.random_range(0..=3);
                    let p = ctx.random_real(deg);
                    let n = p.sup_norm();
                    p.scale(&(1.0 / n))
                })
                .collect();
            let a = parallel_qsp_probabilities(&factors, &rho, SimMode::Direct, EncodingRoute::Oracle)?;
            let b = parallel_qsp_probabilities(&factors, &rho, SimMode::Circuit, EncodingRoute::Oracle)?;
            ctx.record(Suite::Modes, format!("direct vs circuit, D = {d}, k = {k}"), (a.value() - b.value()).abs(), 1e-8);
        }
    }
    Ok(())
}

fn factor(ctx: &mut Ctx) -> Result<()> {
    for half in [2usize, 3, 4, 6] {
        let q = ctx.random_real(half);
        let r = q.squared();
        let d = r.degree();
        for k in 1..=d / 2 {
            let plan = factorize_nonneg(&r, k, Strategy::RoundRobin)?;
            ctx.record(Suite::Factor, format!("reconstruct |q|^2, d = {d}, k = {k}"), verify_factorization(&plan, &r), 1e-6);
            let cap = d.div_ceil(2 * k);
            let excess = plan.max_factor_degree().saturating_sub(cap) as f64;
            ctx.record(Suite::Factor, format!("degree cap {cap}, d = {d}, k = {k}"), excess, 0.0);
        }
    }
    Ok(())
}

fn terms(ctx: &mut Ctx) -> Result<()> {
    for k in 2..=5 {
        for d in [k + 4, k + 10] {
            // Even P_>=k of degree d - k, from an even random polynomial.
            let m = (d - k) / 2;
            let c: Vec<f64> = (0..=2 * m)
                .map(|i| if i % 2 == 0 { ctx.rng.random_range(-1.0..1.0) } else { 0.0 })
                .collect();
            let high = Polynomial::new(c);
            let list = chebyshev_parallel_terms(&high, k, d)?;
            let err = (0..=200)
                .map(|i| {
                    let x = -1.0 + 2.0 * i as f64 / 200.0;
                    (list.eval(x) - high.eval(&x)).abs()
                })
                .fold(0.0, f64::max);
            ctx.record(Suite::Terms, format!("term list reconstructs P_high, d = {d}, k = {k}"), err, 1e-9);
        }
    }
    Ok(())
}

fn bounds(ctx: &mut Ctx) {
    for d in [4usize, 8, 12] {
        let p = ctx.random_real(d);
        let p = p.scale(&(1.0 / p.sup_norm()));
        for k in 1..=d {
            let (low, high) = p.split_at(k);
            let (bl, bh) = constituent_norm_bounds(d, k);
            let excess = (low.sup_norm() - bl).max(high.sup_norm() - bh).max(0.0);
            ctx.record(Suite::Bounds, format!("constituent norms, d = {d}, k = {k}"), excess, 0.0);
        }
    }
}

fn chebyshev(ctx: &mut Ctx) -> Result<()> {
    let table = chebyshev_table::<f64>(30);
    let mut worst: f64 = 0.0;
    let mut over: f64 = 0.0;
    for (d, t) in table.iter().enumerate() {
        for n in 0..=d {
            let c = chebyshev_coefficient(d, n, ParityCheck::Lenient)?;
            worst = worst.max((c - t.coeff(n)).abs() / c.abs().max(1.0));
            over = over.max(c.abs() - chebyshev_coeff_bound(d, n));
        }
    }
    ctx.record(Suite::Chebyshev, "coefficient formula vs recurrence, d <= 30".into(), worst, 1e-12);
    ctx.record(Suite::Chebyshev, "coefficient bound (d+n)^n/n!, d <= 30".into(), over.max(0.0), 0.0);
    for n in 1..=15 {
        let direct: f64 = table[2 * n].coeffs().iter().map(|c| c.abs()).sum();
        let closed = chebyshev_coeff_1norm(n);
        ctx.record(Suite::Chebyshev, format!("coefficient 1-norm of T_{}", 2 * n), (closed - direct).abs() / direct, 1e-9);
    }
    Ok(())
}
