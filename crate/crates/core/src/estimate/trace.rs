use super::cost::{predict_cost, CostModel, CostRoute};
use super::entropy::power_factors;
use super::importance::{importance_sample, Hadamard, Parallel, TermEstimator};
use super::{allocate, Breakdown, ComponentSummary, EstimationReport, EstimatorConfig, Property};
use crate::error::{Error, Result};
use crate::factor::{chebyshev_parallel_terms_series, factorize_nonneg_padded, rescale_factors};
use crate::poly::{ChebyshevSeries, Parity, Polynomial};
use crate::scalar::Scalar;
use crate::sim::{
    hadamard_test, oracle_block_encode, parallel_qsp_probabilities, query_depth_report,
    DensityMatrix, Part, Shots, ShotSampler,
};
use crate::ExactPoly;
use num_complex::Complex64;
use num_rational::BigRational;

/// A separately sampled piece: `sum_j coeffs[j] * E[terms[j]]`.
pub(crate) struct Component {
    pub label: String,
    pub coeffs: Vec<f64>,
    pub terms: Vec<Box<dyn TermEstimator>>,
    /// Variance proxy used to split the shot budget.
    pub weight: f64,
    pub threads: usize,
}

pub(crate) struct Totals {
    pub value: f64,
    pub std_error: f64,
    pub shots: u64,
    pub summaries: Vec<ComponentSummary>,
}

pub(crate) fn run_components(
    comps: &[Component],
    shots: Shots,
    sampler: &mut ShotSampler,
) -> Result<Totals> {
    let budget: Vec<Option<u64>> = match shots {
        Shots::Exact => vec![None; comps.len()],
        Shots::Sampled(n) => {
            if (n as usize) < comps.len() {
                return Err(Error::InvalidInput(format!(
                    "{n} shots cannot cover {} independent components",
                    comps.len()
                )));
            }
            let w: Vec<f64> = comps.iter().map(|c| c.weight.max(1e-300)).collect();
            allocate(n, &w).into_iter().map(Some).collect()
        }
    };
    let mut value = 0.0;
    let mut var = 0.0_f64;
    let mut used = 0;
    let mut summaries = Vec::with_capacity(comps.len());
    for (c, b) in comps.iter().zip(budget) {
        let refs: Vec<&dyn TermEstimator> = c.terms.iter().map(|t| t.as_ref()).collect();
        let est = importance_sample(&c.coeffs, &refs, b, sampler)?;
        value += est.value;
        var += est.std_error.powi(2);
        used += est.shots;
        summaries.push(ComponentSummary {
            label: c.label.clone(),
            value: est.value,
            std_error: est.std_error,
            shots: est.shots,
            threads: c.threads,
            terms: c.terms.len(),
        });
    }
    Ok(Totals { value, std_error: var.sqrt(), shots: used, summaries })
}

/// Low part `P_<k`: the constant is taken analytically as `D * a_0`; the rest
/// is `tr(rho Q(rho))` with `Q = (P_<k - a_0) / x`, read by a Hadamard test on
/// the state itself.
pub(crate) fn low_component(
    low: &Polynomial<f64>,
    rho: &DensityMatrix,
    sampler: &mut ShotSampler,
) -> Result<(f64, Option<Component>)> {
    let constant = rho.dim() as f64 * low.coeff(0);
    if low.degree() == 0 {
        return Ok((constant, None));
    }
    let q = Polynomial::new(low.coeffs()[1..].to_vec());
    let norm = q.sup_norm();
    if norm == 0.0 {
        return Ok((constant, None));
    }
    let m = rho.apply(|x| Complex64::new(q.eval(&x) / norm, 0.0));
    let enc = oracle_block_encode(&m)?;
    let t = hadamard_test(&enc, rho, Shots::Exact, Part::Real, sampler)?;
    let comp = Component {
        label: "low".into(),
        coeffs: vec![1.0],
        terms: vec![Box::new(Hadamard { p_zero: t.probability, scale: norm })],
        weight: norm * norm,
        threads: 1,
    };
    Ok((constant, Some(comp)))
}

/// `tr(rho^{n+1})` from one Hadamard test on `rho` with `rho^n` block-encoded.
pub(crate) fn low_component_power(
    n: usize,
    rho: &DensityMatrix,
    sampler: &mut ShotSampler,
) -> Result<Component> {
    let m = rho.apply(|x| Complex64::new(x.powi(n as i32), 0.0));
    let enc = oracle_block_encode(&m)?;
    let t = hadamard_test(&enc, rho, Shots::Exact, Part::Real, sampler)?;
    Ok(Component {
        label: "power".into(),
        coeffs: vec![1.0],
        terms: vec![Box::new(Hadamard { p_zero: t.probability, scale: 1.0 })],
        weight: 1.0,
        threads: 1,
    })
}

pub(crate) struct Assembled {
    pub property: Property,
    pub method: &'static str,
    pub constant: f64,
    pub totals: Totals,
    pub predicted: u64,
    pub depth: usize,
    pub realized: usize,
    pub width: usize,
    pub breakdown: Breakdown,
    pub notes: Vec<String>,
}

impl Assembled {
    pub fn into_report(self, cfg: &EstimatorConfig) -> EstimationReport {
        let trace = self.constant + self.totals.value;
        let mut breakdown = self.breakdown;
        breakdown.constant_term = self.constant;
        breakdown.components = self.totals.summaries;
        EstimationReport {
            property: self.property,
            method: self.method.into(),
            value: trace,
            std_error: self.totals.std_error,
            trace_value: trace,
            trace_std_error: self.totals.std_error,
            exact: cfg.shots == Shots::Exact,
            shots_used: self.totals.shots,
            predicted_shots: self.predicted,
            query_depth: self.depth,
            realized_depth: self.realized,
            width: self.width,
            breakdown,
            notes: self.notes,
        }
    }
}

/// Constituent split with the high part factored into `k` low-degree
/// polynomials. `P_>=k` must be non-negative on the real line.
pub fn estimate_direct(
    p: &Polynomial<f64>,
    rho: &DensityMatrix,
    k: usize,
    cfg: &EstimatorConfig,
) -> Result<EstimationReport> {
    let mut sampler = cfg.sampler();
    let (low, high) = p.split_constituents(k)?;
    let plan = factorize_nonneg_padded(&high, k, cfg.strategy)?;
    let k_constant = plan.k_constant;
    let scaled = rescale_factors(&plan)?;
    let probs = parallel_qsp_probabilities(&scaled.factors, rho, cfg.mode, cfg.route)?;
    let (constant, low_comp) = low_component(&low, rho, &mut sampler)?;
    let mut comps: Vec<Component> = low_comp.into_iter().collect();
    comps.push(Component {
        label: "high".into(),
        coeffs: vec![1.0],
        terms: vec![Box::new(Parallel { probs, scale: scaled.attenuation })],
        weight: k_constant.powi(4),
        threads: k,
    });
    let totals = run_components(&comps, cfg.shots, &mut sampler)?;
    let model = CostModel {
        epsilon: cfg.epsilon,
        norm_low: Some(low.sup_norm()),
        k_constant: Some(k_constant),
        ..Default::default()
    };
    let d = p.degree();
    let depth = (2 * (k - 1)).max(2 * (d - k).div_ceil(2 * k));
    let realized_low = if low.degree() >= 1 { 2 * (low.degree() - 1) } else { 0 };
    let realized = realized_low.max(query_depth_report(&plan.factors).depth);
    Ok(Assembled {
        property: Property::Trace,
        method: "direct",
        constant,
        totals,
        predicted: predict_cost(&model, CostRoute::Direct)?,
        depth,
        realized,
        width: k,
        breakdown: Breakdown { factorization_constant: Some(k_constant), ..Default::default() },
        notes: Vec::new(),
    }
    .into_report(cfg))
}

/// Chebyshev-product decomposition; handles any real `P` by splitting it into
/// parity parts.
pub fn estimate_chebyshev(
    p: &Polynomial<f64>,
    rho: &DensityMatrix,
    k: usize,
    cfg: &EstimatorConfig,
) -> Result<EstimationReport> {
    estimate_chebyshev_series(&p.to_chebyshev(), rho, k, cfg)
}

fn exact_monomial(series: &ChebyshevSeries<f64>) -> ExactPoly {
    let c: Vec<BigRational> = series.coeffs().iter().map(|v| v.to_exact().0).collect();
    ChebyshevSeries::new(c).to_monomial_native()
}

fn rounded(p: &ExactPoly) -> Polynomial<f64> {
    p.map(|c| <f64 as Scalar>::from_exact(c, &BigRational::from_integer(0.into())))
}

pub fn estimate_chebyshev_series(
    series: &ChebyshevSeries<f64>,
    rho: &DensityMatrix,
    k: usize,
    cfg: &EstimatorConfig,
) -> Result<EstimationReport> {
    let d = series.degree();
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if k > d {
        return Err(Error::NothingToParallelize { k, degree: d });
    }
    let mut sampler = cfg.sampler();
    let parity = series.parity();
    let (even, odd) = series.parity_parts();
    let mut low_total = Polynomial::<f64>::zero();
    let mut comps = Vec::new();
    let mut norm_high: f64 = 0.0;
    let mut one_norm = 0.0;
    let mut realized = 0;
    for (part, want) in [(even, 0usize), (odd, 1usize)] {
        if part.is_zero() {
            continue;
        }
        let dp = part.degree();
        let kp = if k % 2 == want { k } else { k - 1 };
        let exact = exact_monomial(&part);
        if kp == 0 || kp > dp {
            low_total = &low_total + &rounded(&exact);
            continue;
        }
        let (lo, hi) = exact.split_at(kp);
        low_total = &low_total + &rounded(&lo);
        let hi_c = hi.to_chebyshev_native();
        let hi_series = ChebyshevSeries::new(
            hi_c.coeffs()
                .iter()
                .map(|c| <f64 as Scalar>::from_exact(c, &BigRational::from_integer(0.into())))
                .collect(),
        );
        norm_high = norm_high.max(hi_series.sup_norm());
        let list = chebyshev_parallel_terms_series(&hi_series, kp, dp)?;
        one_norm += list.one_norm;
        realized = realized.max(list.max_factor_degree());
        let mut coeffs = Vec::with_capacity(list.terms.len());
        let mut terms: Vec<Box<dyn TermEstimator>> = Vec::with_capacity(list.terms.len());
        for t in &list.terms {
            let factors = t.factors(kp);
            let probs = parallel_qsp_probabilities(&factors, rho, cfg.mode, cfg.route)?;
            coeffs.push(t.coefficient);
            terms.push(Box::new(Parallel { probs, scale: 1.0 }));
        }
        comps.push(Component {
            label: if want == 0 { "high_even".into() } else { "high_odd".into() },
            coeffs,
            terms,
            weight: list.one_norm.powi(2),
            threads: kp,
        });
    }
    let (constant, low_comp) = low_component(&low_total, rho, &mut sampler)?;
    if let Some(c) = low_comp {
        comps.insert(0, c);
    }
    realized = realized.max(low_total.degree());
    let totals = run_components(&comps, cfg.shots, &mut sampler)?;
    let model = CostModel {
        epsilon: cfg.epsilon,
        norm_low: Some(low_total.sup_norm()),
        norm_high: Some(norm_high),
        degree: Some(d),
        threads: Some(k),
        ..Default::default()
    };
    let mut notes = Vec::new();
    let depth = match parity {
        Parity::Indefinite if k >= 2 => {
            notes.push(
                "indefinite parity: depth reported as floor((d-k+1)/(2(k-1))) + k - 2; the realized depth is also given"
                    .to_string(),
            );
            (d + 1 - k) / (2 * (k - 1)) + k - 2
        }
        Parity::Indefinite => realized,
        _ => {
            let kp = if Parity::of(k) == parity { k } else { k - 1 };
            if kp == 0 || kp > d {
                realized
            } else {
                (d - kp) / (2 * kp) + kp - 1
            }
        }
    };
    Ok(Assembled {
        property: Property::Trace,
        method: "chebyshev",
        constant,
        totals,
        predicted: predict_cost(&model, CostRoute::Chebyshev)?,
        depth,
        realized,
        width: k,
        breakdown: Breakdown { coefficient_one_norm: Some(one_norm), ..Default::default() },
        notes,
    }
    .into_report(cfg))
}

/// `sum_n c_n tr(rho^n)`, importance-sampled over the monomials; each power is
/// a parallel run with bare and monomial factors.
pub fn monomial_poly_trace(
    p: &Polynomial<f64>,
    rho: &DensityMatrix,
    k: usize,
    cfg: &EstimatorConfig,
) -> Result<EstimationReport> {
    let assembled = monomial_assembled(p, rho, k, cfg)?;
    Ok(assembled.into_report(cfg))
}

pub(crate) fn monomial_assembled(
    p: &Polynomial<f64>,
    rho: &DensityMatrix,
    k: usize,
    cfg: &EstimatorConfig,
) -> Result<Assembled> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let mut sampler = cfg.sampler();
    let d = p.degree();
    let constant = rho.dim() as f64 * p.coeff(0);
    let mut coeffs = Vec::new();
    let mut terms: Vec<Box<dyn TermEstimator>> = Vec::new();
    let mut width = 0;
    let mut realized = 0;
    for n in 1..=d {
        let c = p.coeff(n);
        if c == 0.0 {
            continue;
        }
        let factors = power_factors(n, k);
        width = width.max(factors.len());
        realized = realized.max(factors.iter().map(|f| f.degree()).max().unwrap_or(0));
        let probs = parallel_qsp_probabilities(&factors, rho, cfg.mode, cfg.route)?;
        coeffs.push(c);
        terms.push(Box::new(Parallel { probs, scale: 1.0 }));
    }
    let one_norm = p.coeff_one_norm();
    let comps = if coeffs.is_empty() {
        Vec::new()
    } else {
        vec![Component {
            label: "monomials".into(),
            coeffs,
            terms,
            weight: 1.0,
            threads: width,
        }]
    };
    let totals = run_components(&comps, cfg.shots, &mut sampler)?;
    let mut notes = Vec::new();
    if one_norm > 1e6 {
        notes.push(format!("coefficient 1-norm {one_norm:.3e} makes sampling expensive"));
    }
    let model = CostModel { epsilon: cfg.epsilon, one_norm: Some(one_norm), ..Default::default() };
    let depth = d.saturating_sub(k) / 2 / k + 1;
    Ok(Assembled {
        property: Property::Trace,
        method: "monomial",
        constant,
        totals,
        predicted: predict_cost(&model, CostRoute::Monomial)?,
        depth,
        realized,
        width,
        breakdown: Breakdown { coefficient_one_norm: Some(one_norm), ..Default::default() },
        notes,
    })
}
