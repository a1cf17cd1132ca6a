use crate::error::{Error, Result};

/// Sample-complexity formulas, each evaluated with unit constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostRoute {
    /// Pure factored route: `K^4 / eps^2`.
    Factored,
    /// Constituent split with a factored high part: `(||P_<k||^2 + K^4) / eps^2`.
    Direct,
    /// Chebyshev-product decomposition:
    /// `(||P_<k||^2 + ||P_>=k||^2 d^4 (1+sqrt2)^{4k} / k^2) / eps^2`.
    Chebyshev,
    /// Integer Renyi entropy: `1 / (s^2 alpha^2 eps^2)`.
    RenyiInteger,
    /// Monomial importance sampling: `||c||_1^2 / eps^2`.
    Monomial,
    /// Partition function: `e^{2 beta} / eps^2`.
    Partition,
    /// Non-integer Renyi entropy:
    /// `(d^{k+2} / (k+1)!)^2 (d / k) / (s^2 eps^2 (alpha - 1)^2)`.
    RenyiNoninteger,
    /// Von Neumann entropy: `(d^{k+2} / (k+1)!)^2 (d / k) / eps^2`.
    VonNeumann,
}

impl std::str::FromStr for CostRoute {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "factored" => CostRoute::Factored,
            "direct" => CostRoute::Direct,
            "chebyshev" => CostRoute::Chebyshev,
            "renyi-integer" => CostRoute::RenyiInteger,
            "monomial" => CostRoute::Monomial,
            "partition" => CostRoute::Partition,
            "renyi-noninteger" => CostRoute::RenyiNoninteger,
            "von-neumann" => CostRoute::VonNeumann,
            other => return Err(Error::InvalidInput(format!("unknown cost route '{other}'"))),
        })
    }
}

/// Inputs to [`predict_cost`]; each route reads only the fields it needs.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostModel {
    pub epsilon: f64,
    #[serde(default)]
    pub k_constant: Option<f64>,
    #[serde(default)]
    pub norm_low: Option<f64>,
    #[serde(default)]
    pub norm_high: Option<f64>,
    #[serde(default)]
    pub one_norm: Option<f64>,
    #[serde(default)]
    pub degree: Option<usize>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub s_alpha: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
}

fn need<T>(v: Option<T>, name: &str, route: CostRoute) -> Result<T> {
    v.ok_or_else(|| Error::MissingParameter(format!("{name} (required by route {route:?})")))
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Predicted shot count, rounded up.
pub fn predict_cost(model: &CostModel, route: CostRoute) -> Result<u64> {
    let eps = model.epsilon;
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let e2 = eps * eps;
    let raw = match route {
        CostRoute::Factored => need(model.k_constant, "k_constant", route)?.powi(4) / e2,
        CostRoute::Direct => {
            let nl = need(model.norm_low, "norm_low", route)?;
            let kc = need(model.k_constant, "k_constant", route)?;
            (nl * nl + kc.powi(4)) / e2
        }
        CostRoute::Chebyshev => {
            let nl = need(model.norm_low, "norm_low", route)?;
            let nh = need(model.norm_high, "norm_high", route)?;
            let d = need(model.degree, "degree", route)? as f64;
            let k = need(model.threads, "threads", route)? as f64;
            let g = (1.0 + std::f64::consts::SQRT_2).powf(4.0 * k);
            (nl * nl + nh * nh * d.powi(4) * g / (k * k)) / e2
        }
        CostRoute::RenyiInteger => {
            let s = need(model.s_alpha, "s_alpha", route)?;
            let a = need(model.alpha, "alpha", route)?;
            1.0 / (s * s * a * a * e2)
        }
        CostRoute::Monomial => need(model.one_norm, "one_norm", route)?.powi(2) / e2,
        CostRoute::Partition => (2.0 * need(model.beta, "beta", route)?).exp() / e2,
        CostRoute::RenyiNoninteger | CostRoute::VonNeumann => {
            let d = need(model.degree, "degree", route)?;
            let k = need(model.threads, "threads", route)?;
            let base = (d as f64).powi(k as i32 + 2) / factorial(k + 1);
            let common = base * base * (d as f64 / k as f64) / e2;
            if route == CostRoute::VonNeumann {
                common
            } else {
                let s = need(model.s_alpha, "s_alpha", route)?;
                let a = need(model.alpha, "alpha", route)?;
                common / (s * s * (a - 1.0).powi(2))
            }
        }
    };
    Ok(ceil_shots(raw))
}

/// Ceiling that ignores round-off just above an integer.
pub(crate) fn ceil_shots(x: f64) -> u64 {
    if !x.is_finite() || x >= u64::MAX as f64 {
        return u64::MAX;
    }
    let c = (x * (1.0 - 1e-12)).ceil();
    (c as u64).max(1)
}
