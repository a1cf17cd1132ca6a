//! Estimators for `tr(P(rho))` and the entropies and partition function built
//! on them.

mod approx;
mod cost;
mod entropy;
mod importance;
mod trace;

pub use approx::{fit_odd_approximant, Approximant, ApproximantCertificate};
pub use cost::{predict_cost, CostModel, CostRoute};
pub use entropy::{
    partition_function, partition_truncation_degree, power_factors, renyi_from_trace, renyi_integer,
    renyi_noninteger, von_neumann, ApproxBudget, LogBase,
};
pub use importance::{importance_sample, Deterministic, Hadamard, Parallel, SumEstimate, TermEstimator};
pub use trace::{estimate_chebyshev, estimate_chebyshev_series, estimate_direct, monomial_poly_trace};

use crate::factor::Strategy;
use crate::sim::{EncodingRoute, Shots, ShotSampler, SimMode};

/// Settings shared by every estimator.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    pub shots: Shots,
    #[serde(default)]
    pub mode: SimMode,
    #[serde(default)]
    pub route: EncodingRoute,
    pub epsilon: f64,
    pub seed: u64,
    #[serde(default)]
    pub strategy: Strategy,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            shots: Shots::Exact,
            mode: SimMode::Direct,
            route: EncodingRoute::Oracle,
            epsilon: 1e-2,
            seed: 0,
            strategy: Strategy::BalancedNorm,
        }
    }
}

impl EstimatorConfig {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn sampled(shots: u64, seed: u64) -> Self {
        EstimatorConfig { shots: Shots::Sampled(shots.max(1)), seed, ..Self::default() }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_mode(mut self, mode: SimMode) -> Self {
        self.mode = mode;
        self
    }

    pub(crate) fn sampler(&self) -> ShotSampler {
        ShotSampler::new(self.seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Trace,
    Renyi,
    VonNeumann,
    Partition,
}

/// One independently estimated piece of a trace.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ComponentSummary {
    pub label: String,
    pub value: f64,
    pub std_error: f64,
    pub shots: u64,
    pub threads: usize,
    pub terms: usize,
}

#[derive(Debug, Clone, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Breakdown {
    /// `D * P(0)`, evaluated without measurement.
    pub constant_term: f64,
    pub components: Vec<ComponentSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factorization_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient_one_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approximant: Option<ApproximantCertificate>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EstimationReport {
    pub property: Property,
    pub method: String,
    /// The requested property (an entropy, or the trace itself).
    pub value: f64,
    pub std_error: f64,
    /// The underlying trace estimate, e.g. `tr(rho^alpha)`.
    pub trace_value: f64,
    pub trace_std_error: f64,
    pub exact: bool,
    pub shots_used: u64,
    pub predicted_shots: u64,
    /// Closed-form query depth for the route taken.
    pub query_depth: usize,
    /// Largest per-thread query count actually scheduled.
    pub realized_depth: usize,
    pub width: usize,
    pub breakdown: Breakdown,
    pub notes: Vec<String>,
}

/// Split `total` shots in proportion to `weights`, giving every positive
/// weight at least one shot when possible.
pub(crate) fn allocate(total: u64, weights: &[f64]) -> Vec<u64> {
    let sum: f64 = weights.iter().filter(|w| **w > 0.0).sum();
    let active = weights.iter().filter(|w| **w > 0.0).count() as u64;
    if sum == 0.0 || total == 0 {
        return vec![0; weights.len()];
    }
    let mut order: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 0.0).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]));
    if total <= active {
        let mut out = vec![0; weights.len()];
        for &i in order.iter().take(total as usize) {
            out[i] = 1;
        }
        return out;
    }
    let spare = total - active;
    let mut out: Vec<u64> = weights
        .iter()
        .map(|&w| if w > 0.0 { 1 + (spare as f64 * w / sum).floor() as u64 } else { 0 })
        .collect();
    let mut left = total.saturating_sub(out.iter().sum());
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        out[i] += 1;
        left -= 1;
    }
    out
}
