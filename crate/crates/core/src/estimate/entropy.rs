use super::approx::fit_odd_approximant;
use super::cost::{predict_cost, CostModel, CostRoute};
use super::importance::{Parallel, TermEstimator};
use super::trace::{estimate_chebyshev_series, low_component_power, monomial_assembled, run_components, Assembled, Component};
use super::{Breakdown, EstimationReport, EstimatorConfig, Property};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::sim::{parallel_qsp_probabilities, DensityMatrix, Shots};

/// Natural or base-two logarithms for entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    fn convert(self, nats: f64) -> f64 {
        match self {
            LogBase::Natural => nats,
            LogBase::Two => nats / std::f64::consts::LN_2,
        }
    }
}

/// Approximation settings for the non-integer entropies.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxBudget {
    /// Lower end of the fitting interval; defaults to the smallest non-zero
    /// eigenvalue, capped at one half.
    #[serde(default)]
    pub delta: Option<f64>,
    /// Rank bound; spreads the error budget over `rank` eigenvalues instead of
    /// the dimension.
    #[serde(default)]
    pub rank: Option<usize>,
}

/// Factors for `tr(rho^n)` on `k` threads: monomials `x^e` whose exponents
/// split `floor((n - k) / 2)` as evenly as possible, plus one bare thread when
/// `n - k` is odd. For `n <= k` this is `n` bare threads.
pub fn power_factors(n: usize, k: usize) -> Vec<Polynomial<f64>> {
    if n <= k {
        return vec![Polynomial::one(); n.max(1)];
    }
    let m = n - k;
    let h = m / 2;
    let mut out: Vec<Polynomial<f64>> = (0..k)
        .map(|j| Polynomial::monomial(h / k + usize::from(j < h % k)))
        .collect();
    if m % 2 == 1 {
        out.push(Polynomial::one());
    }
    out
}

/// `ln(s) / (1 - alpha)`.
pub fn renyi_from_trace(s: f64, alpha: f64) -> f64 {
    s.ln() / (1.0 - alpha)
}

fn entropy_from_trace(s: f64, se: f64, alpha: f64, base: LogBase, notes: &mut Vec<String>) -> (f64, f64) {
    let s_pos = if s > 0.0 {
        s
    } else {
        notes.push(format!("trace estimate {s:.3e} is not positive; clamped before the logarithm"));
        f64::MIN_POSITIVE.max(se.max(1e-300))
    };
    let value = renyi_from_trace(s_pos, alpha);
    let err = se / (s_pos * (alpha - 1.0).abs());
    (base.convert(value), base.convert(err))
}

const PILOT_SHOTS: u64 = 1000;

/// Renyi entropy `S_alpha = ln tr(rho^alpha) / (1 - alpha)` for integer
/// `alpha >= 2`. With `auto_shots`, a pilot run sizes the main run.
pub fn renyi_integer(
    rho: &DensityMatrix,
    alpha: usize,
    k: usize,
    cfg: &EstimatorConfig,
    auto_shots: bool,
    base: LogBase,
) -> Result<EstimationReport> {
    if alpha < 2 {
        return Err(Error::InvalidInput(format!("integer order alpha = {alpha} must be at least 2")));
    }
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let mut sampler = cfg.sampler();
    let mut notes = Vec::new();
    let (comp, depth, realized, width) = if alpha <= k {
        notes.push(format!("k = {k} >= alpha = {alpha}: single-thread QSP fallback"));
        let comp = low_component_power(alpha - 1, rho, &mut sampler)?;
        (comp, alpha - 1, alpha - 1, 1)
    } else {
        let factors = power_factors(alpha, k);
        let probs = parallel_qsp_probabilities(&factors, rho, cfg.mode, cfg.route)?;
        let realized = factors.iter().map(|f| f.degree()).max().unwrap_or(0);
        let width = factors.len();
        let comp = Component {
            label: "power".into(),
            coeffs: vec![1.0],
            terms: vec![Box::new(Parallel { probs, scale: 1.0 }) as Box<dyn TermEstimator>],
            weight: 1.0,
            threads: width,
        };
        (comp, (alpha - k) / 2 / k + 1, realized, width)
    };
    let comps = vec![comp];
    let mut shots = cfg.shots;
    let mut pilot_used = 0;
    if auto_shots && shots != Shots::Exact {
        let pilot = run_components(&comps, Shots::Sampled(PILOT_SHOTS), &mut sampler)?;
        pilot_used = pilot.shots;
        let s_guess = pilot.value.max(pilot.std_error).max(1e-6);
        let model = CostModel {
            epsilon: cfg.epsilon,
            s_alpha: Some(s_guess),
            alpha: Some(alpha as f64),
            ..Default::default()
        };
        let n = predict_cost(&model, CostRoute::RenyiInteger)?;
        notes.push(format!("pilot of {PILOT_SHOTS} shots gave s = {:.6}; main run uses {n} shots", pilot.value));
        shots = Shots::Sampled(n);
    }
    let mut totals = run_components(&comps, shots, &mut sampler)?;
    totals.shots += pilot_used;
    let s = totals.value;
    let model = CostModel {
        epsilon: cfg.epsilon,
        s_alpha: Some(s.max(1e-12)),
        alpha: Some(alpha as f64),
        ..Default::default()
    };
    let predicted = predict_cost(&model, CostRoute::RenyiInteger)?;
    let se = totals.std_error;
    let (value, err) = entropy_from_trace(s, se, alpha as f64, base, &mut notes);
    let mut report = Assembled {
        property: Property::Renyi,
        method: "renyi_integer",
        constant: 0.0,
        totals,
        predicted,
        depth,
        realized,
        width,
        breakdown: Breakdown::default(),
        notes,
    }
    .into_report(cfg);
    report.value = value;
    report.std_error = err;
    Ok(report)
}

fn resolve_delta(rho: &DensityMatrix, budget: &ApproxBudget, notes: &mut Vec<String>) -> Result<f64> {
    let lam = rho.min_nonzero_eigenvalue(1e-12).unwrap_or(1.0);
    match budget.delta {
        Some(d) if !(d > 0.0 && d < 1.0) => {
            Err(Error::InvalidInput(format!("delta = {d} must lie in (0, 1)")))
        }
        Some(d) => {
            if d > lam {
                notes.push(format!(
                    "delta = {d} exceeds the smallest non-zero eigenvalue {lam:.3e}; the error certificate does not cover it"
                ));
            }
            Ok(d)
        }
        None => Ok(lam.min(0.5)),
    }
}

fn effective_rank(rho: &DensityMatrix, budget: &ApproxBudget) -> Result<usize> {
    match budget.rank {
        Some(r) if r == 0 || r > rho.dim() => {
            Err(Error::InvalidInput(format!("rank bound {r} must lie in 1..={}", rho.dim())))
        }
        Some(r) => Ok(r),
        None => Ok(rho.dim()),
    }
}

/// Runs the Chebyshev estimator on an odd approximant of `f`, rescaled into the
/// unit ball first if needed. Returns the report for `tr f(rho)`.
fn approximant_trace(
    f: impl Fn(f64) -> f64,
    rho: &DensityMatrix,
    k: usize,
    cfg: &EstimatorConfig,
    delta: f64,
    target: f64,
    notes: &mut Vec<String>,
) -> Result<(EstimationReport, super::approx::Approximant, f64)> {
    let approx = fit_odd_approximant(f, delta, target, 200)?;
    let norm = approx.certificate.sup_norm;
    let scale = norm.max(1.0);
    if scale > 1.0 {
        notes.push(format!("approximant sup-norm {norm:.6} > 1; estimated after rescaling"));
    }
    let series = approx.series.scale(&(1.0 / scale));
    let d = series.degree();
    let kk = k.min(d);
    if kk < k {
        notes.push(format!("k reduced to {kk}, the approximant degree"));
    }
    let report = estimate_chebyshev_series(&series, rho, kk, cfg)?;
    Ok((report, approx, scale))
}

/// Renyi entropy of non-integer order `alpha > 0` via an odd polynomial
/// approximant of `|x|^alpha`.
pub fn renyi_noninteger(
    rho: &DensityMatrix,
    alpha: f64,
    k: usize,
    cfg: &EstimatorConfig,
    budget: ApproxBudget,
    base: LogBase,
) -> Result<EstimationReport> {
    if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("Renyi order alpha = {alpha} must be positive and not 1")));
    }
    let mut notes = Vec::new();
    let delta = resolve_delta(rho, &budget, &mut notes)?;
    let r = effective_rank(rho, &budget)? as f64;
    // Certified lower bound on tr(rho^alpha).
    let s_lower = if alpha < 1.0 { 1.0 } else { r.powf(1.0 - alpha) };
    let target = s_lower * cfg.epsilon * (alpha - 1.0).abs() / (2.0 * r);
    let (inner, approx, scale) =
        approximant_trace(|x| x.powf(alpha), rho, k, cfg, delta, target, &mut notes)?;
    let s = scale * inner.trace_value;
    let se = scale * inner.trace_std_error;
    let (value, err) = entropy_from_trace(s, se, alpha, base, &mut notes);
    let model = CostModel {
        epsilon: cfg.epsilon,
        degree: Some(approx.certificate.degree),
        threads: Some(k),
        s_alpha: Some(s.max(1e-12)),
        alpha: Some(alpha),
        ..Default::default()
    };
    finish_entropy(inner, Property::Renyi, "renyi_noninteger", value, err, s, se, &model, CostRoute::RenyiNoninteger, approx, notes)
}

/// Von Neumann entropy `-tr(rho ln rho)` via an odd approximant of `-x ln|x|`.
pub fn von_neumann(
    rho: &DensityMatrix,
    k: usize,
    cfg: &EstimatorConfig,
    budget: ApproxBudget,
    base: LogBase,
) -> Result<EstimationReport> {
    let mut notes = Vec::new();
    let delta = resolve_delta(rho, &budget, &mut notes)?;
    let r = effective_rank(rho, &budget)? as f64;
    let target = cfg.epsilon / (2.0 * r);
    let f = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.ln() };
    let (inner, approx, scale) = approximant_trace(f, rho, k, cfg, delta, target, &mut notes)?;
    let s = scale * inner.trace_value;
    let se = scale * inner.trace_std_error;
    let model = CostModel {
        epsilon: cfg.epsilon,
        degree: Some(approx.certificate.degree),
        threads: Some(k),
        ..Default::default()
    };
    let (value, err) = (base.convert(s), base.convert(se));
    finish_entropy(inner, Property::VonNeumann, "von_neumann", value, err, s, se, &model, CostRoute::VonNeumann, approx, notes)
}

#[allow(clippy::too_many_arguments)]
fn finish_entropy(
    inner: EstimationReport,
    property: Property,
    method: &str,
    value: f64,
    err: f64,
    s: f64,
    se: f64,
    model: &CostModel,
    route: CostRoute,
    approx: super::approx::Approximant,
    mut notes: Vec<String>,
) -> Result<EstimationReport> {
    let mut report = inner;
    let scale = if report.trace_value != 0.0 { s / report.trace_value } else { 1.0 };
    if scale != 1.0 {
        report.breakdown.constant_term *= scale;
        for c in &mut report.breakdown.components {
            c.value *= scale;
            c.std_error *= scale;
        }
    }
    report.property = property;
    report.method = method.into();
    report.value = value;
    report.std_error = err;
    report.trace_value = s;
    report.trace_std_error = se;
    report.predicted_shots = predict_cost(model, route)?;
    report.breakdown.approximant = Some(approx.certificate);
    notes.append(&mut report.notes);
    report.notes = notes;
    Ok(report)
}

/// Smallest `d` with `e^beta beta^{d+1} / (d+1)! <= eps / (2 dim)`.
pub fn partition_truncation_degree(beta: f64, epsilon: f64, dim: usize) -> usize {
    let target = epsilon / (2.0 * dim as f64);
    let mut term = beta.exp() * beta; // e^beta beta^{d+1} / (d+1)! at d = 0
    let mut d = 0;
    while term > target && d < 100_000 {
        d += 1;
        term *= beta / (d + 1) as f64;
    }
    d
}

/// `Z = tr(e^{-beta rho})` through its truncated Taylor series.
pub fn partition_function(
    rho: &DensityMatrix,
    beta: f64,
    k: usize,
    cfg: &EstimatorConfig,
) -> Result<EstimationReport> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidInput(format!("beta = {beta} must be finite and non-negative")));
    }
    let d = partition_truncation_degree(beta, cfg.epsilon, rho.dim());
    let mut coeffs = Vec::with_capacity(d + 1);
    let mut c = 1.0;
    for n in 0..=d {
        if n > 0 {
            c *= -beta / n as f64;
        }
        coeffs.push(c);
    }
    let p = Polynomial::new(coeffs);
    let mut a = monomial_assembled(&p, rho, k, cfg)?;
    a.property = Property::Partition;
    a.method = "partition";
    let model = CostModel { epsilon: cfg.epsilon, beta: Some(beta), ..Default::default() };
    a.predicted = predict_cost(&model, CostRoute::Partition)?;
    a.breakdown.truncation_degree = Some(d);
    Ok(a.into_report(cfg))
}
