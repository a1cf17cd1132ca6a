//! Splitting non-negative polynomials into low-degree factors, and the
//! Chebyshev-product decomposition of a constituent polynomial.

mod roots;
mod terms;

pub use roots::{find_roots, Root, RootSet};
pub use terms::{
    chebyshev_parallel_terms, chebyshev_parallel_terms_series, CTilde, ParallelTerm,
    ParallelTermList,
};

use crate::error::{Error, Result};
use crate::poly::{sup_norm_grid, Polynomial};
use num_complex::Complex64;
use roots::raw_roots;

/// How half-roots are dealt into the `k` factor groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Sorted by real part, dealt cyclically.
    #[default]
    RoundRobin,
    /// Sorted by real part, cut into consecutive runs.
    Contiguous,
    /// Greedy assignment minimizing the product of factor sup-norms.
    BalancedNorm,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "round_robin" | "round-robin" => Ok(Strategy::RoundRobin),
            "contiguous" => Ok(Strategy::Contiguous),
            "balanced_norm" | "balanced-norm" => Ok(Strategy::BalancedNorm),
            other => Err(Error::InvalidInput(format!("unknown strategy '{other}'"))),
        }
    }
}

/// `k` factors `R_j` such that `attenuation * prod_j |R_j|^2` reproduces the
/// source polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationPlan {
    pub k: usize,
    pub source_degree: usize,
    pub strategy: Strategy,
    pub factors: Vec<Polynomial<Complex64>>,
    /// Sup-norm of each factor on `[-1, 1]`.
    pub norms: Vec<f64>,
    /// Product of the factor norms.
    pub k_constant: f64,
    /// Factor by which `prod |R_j|^2` has been scaled down; one for a fresh plan.
    pub attenuation: f64,
}

impl FactorizationPlan {
    pub fn max_factor_degree(&self) -> usize {
        self.factors.iter().map(|f| f.degree()).max().unwrap_or(0)
    }

    /// The same polynomial with every factor multiplied by `s` and the
    /// attenuation divided by `s^{2k}`.
    pub fn scaled_by(&self, s: f64) -> FactorizationPlan {
        let mut out = self.clone();
        let c = Complex64::new(s, 0.0);
        for f in &mut out.factors {
            *f = f.scale(&c);
        }
        for n in &mut out.norms {
            *n *= s.abs();
        }
        out.k_constant *= s.abs().powi(self.k as i32);
        out.attenuation /= s.powi(2 * self.k as i32);
        out
    }

    /// `attenuation * prod_j |R_j(x)|^2`.
    pub fn reconstruct_at(&self, x: f64) -> f64 {
        self.attenuation
            * self
                .factors
                .iter()
                .map(|f| f.eval_real(x).norm_sqr())
                .product::<f64>()
    }
}

/// Factor a polynomial that is non-negative on the real line into `k` factors
/// of degree at most `ceil(d / 2k)`. Requires `1 <= k <= d / 2`.
pub fn factorize_nonneg(r: &Polynomial<f64>, k: usize, strategy: Strategy) -> Result<FactorizationPlan> {
    build_plan(r, k, strategy, false)
}

/// As [`factorize_nonneg`], but `k` may exceed `d / 2`: the surplus factors are
/// constants. Degree zero is allowed.
pub fn factorize_nonneg_padded(
    r: &Polynomial<f64>,
    k: usize,
    strategy: Strategy,
) -> Result<FactorizationPlan> {
    build_plan(r, k, strategy, true)
}

fn build_plan(
    r: &Polynomial<f64>,
    k: usize,
    strategy: Strategy,
    allow_empty: bool,
) -> Result<FactorizationPlan> {
    if k == 0 {
        return Err(Error::InvalidInput("number of factors k must be at least 1".into()));
    }
    if r.is_zero() {
        return Err(Error::InvalidInput("cannot factor the zero polynomial".into()));
    }
    let d = r.degree();
    if d % 2 == 1 {
        return Err(Error::OddDegree(d));
    }
    if d / 2 < k && !allow_empty {
        return Err(Error::TooManyThreads { threads: k, half_degree: d / 2 });
    }
    let lead = r.leading();
    if lead < 0.0 {
        let (_, at) = grid_minimum(r, &[]);
        return Err(Error::NotNonNegative { min: r.eval(&at).min(lead), at });
    }
    let half = half_roots(r)?;
    let sizes = group_sizes(d / 2, k);
    let groups = match strategy {
        Strategy::RoundRobin => round_robin(&half, &sizes),
        Strategy::Contiguous => contiguous(&half, &sizes),
        Strategy::BalancedNorm => balanced(&half, &sizes),
    };
    let scale = lead.powf(1.0 / (2.0 * k as f64));
    let factors: Vec<Polynomial<Complex64>> = groups
        .iter()
        .map(|g| from_roots(g, Complex64::new(scale, 0.0)))
        .collect();
    let norms: Vec<f64> = factors.iter().map(|f| f.sup_norm()).collect();
    let k_constant = norms.iter().product();
    Ok(FactorizationPlan {
        k,
        source_degree: d,
        strategy,
        factors,
        norms,
        k_constant,
        attenuation: 1.0,
    })
}

/// Group sizes: the first `m mod k` groups get `floor(m / k) + 1` roots.
pub fn group_sizes(m: usize, k: usize) -> Vec<usize> {
    (0..k).map(|g| m / k + usize::from(g < m % k)).collect()
}

fn from_roots(roots: &[Complex64], scale: Complex64) -> Polynomial<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    roots.iter().fold(Polynomial::constant(scale), |acc, &z| {
        &acc * &Polynomial::new(vec![-z, one])
    })
}

fn local_scale(r: &Polynomial<f64>, x: f64) -> f64 {
    r.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c.abs() * x.abs().powi(n as i32))
        .sum()
}

fn grid_minimum(r: &Polynomial<f64>, extra: &[f64]) -> (f64, f64) {
    let lead = r.leading().abs();
    let bound = 1.0
        + r.coeffs()[..r.degree()]
            .iter()
            .map(|c| c.abs() / lead)
            .fold(0.0, f64::max);
    let n = 4000;
    let mut pts: Vec<f64> = (0..=n)
        .map(|i| -bound + 2.0 * bound * i as f64 / n as f64)
        .collect();
    pts.extend((0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64));
    pts.extend_from_slice(extra);
    let mut worst = (f64::INFINITY, 0.0);
    for x in pts {
        // Relative to the rounding scale at x.
        let v = r.eval(&x) / local_scale(r, x).max(f64::MIN_POSITIVE);
        if v < worst.0 {
            worst = (v, x);
        }
    }
    worst
}

/// One representative per conjugate pair and one per pair of real roots.
fn half_roots(r: &Polynomial<f64>) -> Result<Vec<Complex64>> {
    let d = r.degree();
    if d == 0 {
        return Ok(Vec::new());
    }
    let (roots, _) = raw_roots(&r.to_complex())?;
    let mut real: Vec<f64> = Vec::new();
    let mut upper = Vec::new();
    let mut lower = 0usize;
    for z in roots {
        if z.im.abs() <= 1e-6 * z.norm().max(1.0) {
            real.push(z.re);
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower += 1;
        }
    }
    real.sort_by(f64::total_cmp);
    let mids: Vec<f64> = real.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let (min, at) = grid_minimum(r, &mids);
    if min < -1e-9 || real.len() % 2 == 1 {
        return Err(Error::NotNonNegative { min: r.eval(&at), at });
    }
    if upper.len() != lower {
        return Err(Error::RootFinding { worst_residual: f64::NAN });
    }
    let mut half = average_clusters(r, upper);
    half.extend(
        real.chunks(2)
            .map(|p| Complex64::new(0.5 * (p[0] + p[1]), 0.0)),
    );
    half.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    debug_assert_eq!(half.len(), d / 2);
    Ok(half)
}

/// Replace each cluster of nearly equal roots with copies of one refined
/// value: the root of `r^{(m-1)}` near the cluster mean, where it is simple.
fn average_clusters(r: &Polynomial<f64>, roots: Vec<Complex64>) -> Vec<Complex64> {
    let rc = r.to_complex();
    let mut out = roots.clone();
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let tol = 1e-5 * roots[i].norm().max(1.0);
        let members: Vec<usize> = (i..roots.len())
            .filter(|&j| !used[j] && (roots[j] - roots[i]).norm() <= tol)
            .collect();
        let mean = members.iter().map(|&j| roots[j]).sum::<Complex64>() / members.len() as f64;
        let z = if members.len() > 1 { refine_multiple(&rc, mean, members.len()) } else { mean };
        for j in members {
            used[j] = true;
            out[j] = z;
        }
    }
    out
}

/// Newton on `r^{(m-1)}`, where a root of multiplicity `m` is simple; the
/// result is kept only if it stays near `z0`.
fn refine_multiple(r: &Polynomial<Complex64>, z0: Complex64, m: usize) -> Complex64 {
    let mut g = r.clone();
    for _ in 0..m - 1 {
        g = g.derivative();
    }
    let dg = g.derivative();
    let mut z = z0;
    for _ in 0..30 {
        let d = dg.eval(&z);
        if d.norm() == 0.0 {
            break;
        }
        let step = g.eval(&z) / d;
        z -= step;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    if (z - z0).norm() <= 1e-5 * z0.norm().max(1.0) {
        z
    } else {
        z0
    }
}

fn round_robin(roots: &[Complex64], sizes: &[usize]) -> Vec<Vec<Complex64>> {
    let k = sizes.len();
    let mut groups = vec![Vec::new(); k];
    for (i, &z) in roots.iter().enumerate() {
        groups[i % k].push(z);
    }
    groups
}

fn contiguous(roots: &[Complex64], sizes: &[usize]) -> Vec<Vec<Complex64>> {
    let mut groups = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &s in sizes {
        groups.push(roots[start..start + s].to_vec());
        start += s;
    }
    groups
}

const GREEDY_GRID: usize = 257;

fn grid_nodes() -> Vec<f64> {
    (0..GREEDY_GRID)
        .map(|i| (std::f64::consts::PI * (i as f64 + 0.5) / GREEDY_GRID as f64).cos())
        .chain([-1.0, 1.0])
        .collect()
}

fn grid_product_norm(groups: &[Vec<Complex64>], xs: &[f64]) -> f64 {
    groups
        .iter()
        .map(|g| {
            xs.iter()
                .map(|&x| g.iter().map(|z| (Complex64::new(x, 0.0) - z).norm()).product::<f64>())
                .fold(0.0, f64::max)
        })
        .product()
}

fn balanced(roots: &[Complex64], sizes: &[usize]) -> Vec<Vec<Complex64>> {
    let xs = grid_nodes();
    let k = sizes.len();
    let mut groups: Vec<Vec<Complex64>> = vec![Vec::new(); k];
    let mut vals: Vec<Vec<f64>> = vec![vec![1.0; xs.len()]; k];
    for &z in roots {
        let mut best: Option<(usize, f64)> = None;
        for g in 0..k {
            if groups[g].len() >= sizes[g] {
                continue;
            }
            let before = vals[g].iter().cloned().fold(0.0, f64::max);
            let after = vals[g]
                .iter()
                .zip(&xs)
                .map(|(v, &x)| v * (Complex64::new(x, 0.0) - z).norm())
                .fold(0.0, f64::max);
            let ratio = after / before;
            if best.is_none_or(|(_, r)| ratio < r) {
                best = Some((g, ratio));
            }
        }
        let (g, _) = best.expect("group sizes sum to the root count");
        groups[g].push(z);
        for (v, &x) in vals[g].iter_mut().zip(&xs) {
            *v *= (Complex64::new(x, 0.0) - z).norm();
        }
    }
    // Pairwise swaps while they help.
    let mut cost = grid_product_norm(&groups, &xs);
    for _ in 0..4 {
        let mut improved = false;
        for g in 0..k {
            for h in g + 1..k {
                for i in 0..groups[g].len() {
                    for j in 0..groups[h].len() {
                        let (a, b) = (groups[g][i], groups[h][j]);
                        groups[g][i] = b;
                        groups[h][j] = a;
                        let c = grid_product_norm(&groups, &xs);
                        if c < cost * (1.0 - 1e-12) {
                            cost = c;
                            improved = true;
                        } else {
                            groups[g][i] = a;
                            groups[h][j] = b;
                        }
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    // Never worse than the simple deals.
    let mut best = (cost, groups);
    for alt in [round_robin(roots, sizes), contiguous(roots, sizes)] {
        let c = grid_product_norm(&alt, &xs);
        if c < best.0 {
            best = (c, alt);
        }
    }
    best.1
}

/// Normalize every factor to unit sup-norm; the removed scale moves into
/// `attenuation`.
pub fn rescale_factors(plan: &FactorizationPlan) -> Result<FactorizationPlan> {
    let mut out = plan.clone();
    let mut removed = 1.0;
    for (i, (f, &n)) in plan.factors.iter().zip(&plan.norms).enumerate() {
        if !(n > 0.0) {
            return Err(Error::DegenerateFactor { index: i });
        }
        out.factors[i] = f.scale(&Complex64::new(1.0 / n, 0.0));
        out.norms[i] = 1.0;
        removed *= n * n;
    }
    out.k_constant = 1.0;
    out.attenuation = plan.attenuation * removed;
    Ok(out)
}

/// Worst relative reconstruction error over 500 points of `[-1, 1]`.
pub fn verify_factorization(plan: &FactorizationPlan, source: &Polynomial<f64>) -> f64 {
    (0..500)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / 499.0;
            let s = source.eval(&x);
            (plan.reconstruct_at(x) - s).abs() / (1.0 + s.abs())
        })
        .fold(0.0, f64::max)
}

/// Recomputes the product of factor sup-norms.
pub fn factorization_constant(plan: &FactorizationPlan) -> f64 {
    plan.factors.iter().map(|f| f.sup_norm()).product()
}

/// Product of grid sup-norms, for comparing strategies cheaply.
pub fn grid_constant(plan: &FactorizationPlan) -> f64 {
    plan.factors
        .iter()
        .map(|f| sup_norm_grid(|x| f.eval_real(x).norm(), -1.0, 1.0, 512))
        .product()
}
