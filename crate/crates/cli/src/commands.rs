use crate::config::{estimator_strategy, ExperimentConfig, PropertySpec, RunRecord, ShotPolicy, StateSource, TraceMethod};
use crate::{BaseArg, CostArgs, EstimateArgs, Failure, FactorArgs, ModeArg, PhasesArgs, PropertyArg, Sim, SimulateArgs, ValidateArgs};
use pqsp_core::estimate::*;
use pqsp_core::factor::{factorize_nonneg, factorize_nonneg_padded, rescale_factors, verify_factorization, Strategy};
use pqsp_core::io::{read_json, to_json_string, write_json, PlanDoc, PolynomialDoc};
use pqsp_core::poly::constituent_norm_bounds;
use pqsp_core::qsp::{find_phases, Convention, FindPhasesOptions};
use pqsp_core::sim::{parallel_qsp_run, query_depth_report, ParallelOptions, ShotSampler, Shots, SimMode};
use pqsp_core::validate::{run_suites, Suite, ValidateOptions};
use pqsp_core::Error;
use serde::Serialize;
use std::path::Path;
use std::time::Instant;

type Outcome = Result<(), Failure>;

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => write_json(p, value)?,
        None => println!("{}", to_json_string(value)?),
    }
    Ok(())
}

fn sim_mode(s: Sim) -> SimMode {
    match s {
        Sim::Direct => SimMode::Direct,
        Sim::Circuit => SimMode::Circuit,
    }
}

pub fn factor(a: &FactorArgs) -> Outcome {
    let r = read_json::<PolynomialDoc>(&a.poly)?.to_real()?;
    let strategy: Strategy = a.strategy.parse()?;
    let plan = if a.padded {
        factorize_nonneg_padded(&r, a.k, strategy)?
    } else {
        factorize_nonneg(&r, a.k, strategy)?
    };
    let residual = verify_factorization(&plan, &r);
    let degrees: Vec<usize> = plan.factors.iter().map(|f| f.degree()).collect();
    eprintln!(
        "k = {}, strategy = {:?}, K = {:.6e}, factor degrees = {degrees:?}, residual = {residual:.3e}",
        plan.k, plan.strategy, plan.k_constant
    );
    emit(&PlanDoc::from_plan(&plan), a.out.as_deref())
}

pub fn phases(a: &PhasesArgs) -> Outcome {
    let target = read_json::<PolynomialDoc>(&a.poly)?.to_real()?;
    let convention: Convention = a.convention.parse()?;
    let opts = FindPhasesOptions { convention, starts: a.starts, ..Default::default() };
    let ph = find_phases(&target, a.tol, a.max_iter, opts)?;
    eprintln!("degree {}, residual {:.3e}", ph.degree(), ph.residual.unwrap_or(0.0));
    emit(&ph, a.out.as_deref())
}

pub fn simulate(a: &SimulateArgs) -> Outcome {
    let rho = a.state.parse::<StateSource>()?.load()?;
    let plan = read_json::<PlanDoc>(&a.plan)?.to_plan()?;
    let scaled = rescale_factors(&plan)?;
    let shots = match a.shots {
        Some(n) => Shots::sampled(n)?,
        None => Shots::Exact,
    };
    let opts = ParallelOptions { shots, mode: sim_mode(a.sim), ..Default::default() };
    let est = parallel_qsp_run(&scaled.factors, &rho, opts, &mut ShotSampler::new(a.seed))?;
    let model = CostModel { epsilon: 1e-2, k_constant: Some(plan.k_constant), ..Default::default() };
    let depth = query_depth_report(&plan.factors);
    let value = scaled.attenuation * est.value;
    let std_error = scaled.attenuation * est.std_error;
    let report = EstimationReport {
        property: Property::Trace,
        method: "parallel".into(),
        value,
        std_error,
        trace_value: value,
        trace_std_error: std_error,
        exact: shots == Shots::Exact,
        shots_used: est.shots,
        predicted_shots: predict_cost(&model, CostRoute::Factored)?,
        query_depth: depth.depth,
        realized_depth: depth.depth,
        width: depth.width,
        breakdown: Breakdown { factorization_constant: Some(plan.k_constant), ..Default::default() },
        notes: vec![format!(
            "success probability {:.6}; predicted shots use epsilon = 0.01",
            est.success_probability
        )],
    };
    emit(&report, a.out.as_deref())
}

fn estimate_config(a: &EstimateArgs) -> Result<ExperimentConfig, Failure> {
    if let Some(path) = &a.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = match serde_json::from_str::<ExperimentConfig>(&text) {
            Ok(c) => c,
            Err(e) => match serde_json::from_str::<RunRecord>(&text) {
                Ok(r) => r.config,
                Err(_) => return Err(Failure::Usage(format!("{} is not an experiment config: {e}", path.display()))),
            },
        };
        if a.out.is_some() {
            cfg.out = a.out.clone();
        }
        if a.csv.is_some() {
            cfg.csv = a.csv.clone();
        }
        return Ok(cfg);
    }
    let shots = match (a.mode, a.shots, a.auto_shots) {
        (Some(ModeArg::Exact), Some(_), _) | (Some(ModeArg::Exact), _, true) => {
            return Err(Failure::Usage("--mode exact takes no shot policy".into()))
        }
        (_, Some(n), _) => ShotPolicy::Fixed(n),
        (_, None, true) => ShotPolicy::Auto,
        (Some(ModeArg::Sampled), None, false) => {
            return Err(Failure::Usage("--mode sampled needs --shots or --auto-shots".into()))
        }
        _ => ShotPolicy::Exact,
    };
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("this property needs {flag}")));
    let property = match a.property.expect("clap enforces --property") {
        PropertyArg::Trace => {
            let path = a.poly.as_ref().ok_or_else(|| Failure::Usage("--property trace needs --poly".into()))?;
            PropertySpec::Trace { method: a.method, poly: read_json(path)? }
        }
        PropertyArg::Renyi => PropertySpec::Renyi { alpha: need(a.alpha, "--alpha")? },
        PropertyArg::VonNeumann => PropertySpec::VonNeumann,
        PropertyArg::Partition => PropertySpec::Partition { beta: need(a.beta, "--beta")? },
    };
    let strategy = match &a.strategy {
        Some(s) => s.parse()?,
        None => estimator_strategy(),
    };
    Ok(ExperimentConfig {
        property,
        state: a.state.parse()?,
        k: a.k,
        epsilon: a.epsilon,
        shots,
        seed: a.seed,
        strategy,
        sim_mode: sim_mode(a.sim),
        log_base: match a.log_base {
            BaseArg::E => LogBase::Natural,
            BaseArg::Two => LogBase::Two,
        },
        delta: a.delta,
        rank: a.rank,
        out: a.out.clone(),
        csv: a.csv.clone(),
    })
}

fn integer_order(alpha: f64) -> Option<usize> {
    (alpha.fract() == 0.0 && alpha >= 2.0).then_some(alpha as usize)
}

/// One estimator call under the given shot setting.
fn run_once(cfg: &ExperimentConfig, rho: &pqsp_core::sim::DensityMatrix, shots: Shots, auto: bool) -> pqsp_core::Result<EstimationReport> {
    let ecfg = EstimatorConfig {
        shots,
        mode: cfg.sim_mode,
        epsilon: cfg.epsilon,
        seed: cfg.seed,
        strategy: cfg.strategy,
        ..Default::default()
    };
    let budget = ApproxBudget { delta: cfg.delta, rank: cfg.rank };
    match &cfg.property {
        PropertySpec::Trace { method, poly } => {
            let p = poly.to_real()?;
            match method {
                TraceMethod::Direct => estimate_direct(&p, rho, cfg.k, &ecfg),
                TraceMethod::Chebyshev => estimate_chebyshev_series(&poly.to_series()?, rho, cfg.k, &ecfg),
                TraceMethod::Monomial => monomial_poly_trace(&p, rho, cfg.k, &ecfg),
            }
        }
        PropertySpec::Renyi { alpha } => match integer_order(*alpha) {
            Some(n) => renyi_integer(rho, n, cfg.k, &ecfg, auto, cfg.log_base),
            None => renyi_noninteger(rho, *alpha, cfg.k, &ecfg, budget, cfg.log_base),
        },
        PropertySpec::VonNeumann => von_neumann(rho, cfg.k, &ecfg, budget, cfg.log_base),
        PropertySpec::Partition { beta } => partition_function(rho, *beta, cfg.k, &ecfg),
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunRecord, Failure> {
    cfg.validate()?;
    let rho = cfg.state.load()?;
    let input_sha256 = cfg.input_hash(&rho)?;
    let start = Instant::now();
    let report = match cfg.shots {
        ShotPolicy::Exact => run_once(cfg, &rho, Shots::Exact, false)?,
        ShotPolicy::Fixed(n) => run_once(cfg, &rho, Shots::sampled(n)?, false)?,
        ShotPolicy::Auto => match &cfg.property {
            PropertySpec::Renyi { alpha } if integer_order(*alpha).is_some() => {
                run_once(cfg, &rho, Shots::Sampled(1), true)?
            }
            _ => {
                let n = run_once(cfg, &rho, Shots::Exact, false)?.predicted_shots.max(1);
                let mut r = run_once(cfg, &rho, Shots::Sampled(n), false)?;
                r.notes.push(format!("auto shots: {n} from the predicted cost"));
                r
            }
        },
    };
    Ok(RunRecord {
        config: cfg.clone(),
        report,
        version: env!("CARGO_PKG_VERSION").to_string(),
        input_sha256,
        duration_seconds: start.elapsed().as_secs_f64(),
    })
}

fn write_csv(path: &Path, r: &EstimationReport) -> Outcome {
    let io = |e: csv::Error| Failure::Usage(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["row", "label", "value", "std_error", "shots", "threads", "terms"]).map_err(io)?;
    let f = |x: f64| format!("{x:e}");
    w.write_record(["estimate", r.method.as_str(), &f(r.value), &f(r.std_error), &r.shots_used.to_string(), &r.width.to_string(), ""])
        .map_err(io)?;
    w.write_record(["trace", "", &f(r.trace_value), &f(r.trace_std_error), "", "", ""]).map_err(io)?;
    w.write_record(["constant", "", &f(r.breakdown.constant_term), "0", "0", "", ""]).map_err(io)?;
    for c in &r.breakdown.components {
        w.write_record([
            "component",
            c.label.as_str(),
            &f(c.value),
            &f(c.std_error),
            &c.shots.to_string(),
            &c.threads.to_string(),
            &c.terms.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

pub fn estimate(a: &EstimateArgs) -> Outcome {
    let cfg = estimate_config(a)?;
    let record = run_experiment(&cfg)?;
    if let Some(p) = &cfg.out {
        write_json(p, &record)?;
    }
    if let Some(p) = &cfg.csv {
        write_csv(p, &record.report)?;
    }
    let r = &record.report;
    let name = serde_json::to_value(r.property).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
    println!("{name} ({}): {:.6} ± {:.3e}", r.method, r.value, r.std_error);
    if name != "trace" || r.trace_value != r.value {
        println!("trace value: {:.9} ± {:.3e}", r.trace_value, r.trace_std_error);
    }
    println!("query depth {} (realized {}), width {}", r.query_depth, r.realized_depth, r.width);
    println!("shots: used {}, predicted {}", r.shots_used, r.predicted_shots);
    for n in &r.notes {
        println!("note: {n}");
    }
    println!("input sha256 {}", record.input_sha256);
    Ok(())
}

pub fn cost(a: &CostArgs) -> Outcome {
    let route: CostRoute = a.route.parse()?;
    let mut model = CostModel {
        epsilon: a.epsilon,
        k_constant: a.k_constant,
        norm_low: a.norm_low,
        norm_high: a.norm_high,
        one_norm: a.one_norm,
        degree: a.degree,
        threads: a.threads,
        s_alpha: a.s_alpha,
        alpha: a.alpha,
        beta: a.beta,
    };
    let mut bounded = Vec::new();
    if route == CostRoute::Chebyshev || route == CostRoute::Direct {
        if let (Some(d), Some(k)) = (model.degree, model.threads) {
            let (lo, hi) = constituent_norm_bounds(d, k);
            if model.norm_low.is_none() {
                model.norm_low = Some(lo);
                bounded.push("norm_low");
            }
            if model.norm_high.is_none() && route == CostRoute::Chebyshev {
                model.norm_high = Some(hi);
                bounded.push("norm_high");
            }
        }
    }
    let shots = predict_cost(&model, route)?;
    println!("route: {}", a.route);
    let fields = serde_json::to_value(model).map_err(|e| Error::InvalidInput(e.to_string()))?;
    if let Some(obj) = fields.as_object() {
        for (k, v) in obj.iter().filter(|(_, v)| !v.is_null()) {
            let tag = if bounded.contains(&k.as_str()) { " (certified bound)" } else { "" };
            println!("{k}: {v}{tag}");
        }
    }
    println!("predicted shots: {shots}");
    Ok(())
}

/// `2..8` (inclusive) or `2,4,8`.
fn parse_list(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("cannot read '{s}' as a list or range of integers"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

pub fn validate(a: &ValidateArgs) -> Outcome {
    let suites: Vec<Suite> = if a.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        a.suite.iter().map(|s| s.parse()).collect::<pqsp_core::Result<_>>()?
    };
    let mut opts = ValidateOptions { seed: a.seed, inject_fault: a.inject_fault, ..Default::default() };
    if let Some(d) = &a.dims {
        opts.dims = parse_list(d)?;
    }
    if let Some(k) = &a.k {
        opts.ks = parse_list(k)?;
    }
    let summary = run_suites(&suites, &opts)?;
    for c in summary.failures() {
        eprintln!("FAIL {}: {} (error {:.3e} > {:.1e})", c.suite.name(), c.name, c.error, c.tolerance);
    }
    eprintln!("{} checks, {} passed, {} failed", summary.checks.len(), summary.passed, summary.failed);
    emit(&summary, a.json.as_deref())?;
    if summary.ok() {
        Ok(())
    } else {
        Err(Failure::Validation(summary.failed))
    }
}
