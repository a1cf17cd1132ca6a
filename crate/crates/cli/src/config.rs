//! Experiment configuration, state sources, and run records.

use pqsp_core::estimate::{EstimationReport, LogBase};
use pqsp_core::factor::Strategy;
use pqsp_core::io::{DensityDoc, PolynomialDoc};
use pqsp_core::sim::{DensityMatrix, SimMode};
use pqsp_core::{Complex64, Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::PathBuf;

/// Where the density matrix comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSource {
    /// `|0><0|` in dimension `dim`.
    Pure(usize),
    MaximallyMixed(usize),
    Diag(Vec<f64>),
    RandomSeeded { dim: usize, rank: usize, seed: u64 },
    File(PathBuf),
}

fn parse_args(body: &str) -> Result<Vec<f64>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad number '{}' in state generator", t.trim())))
        })
        .collect()
}

fn as_count(v: f64, what: &str) -> Result<usize> {
    if v < 1.0 || v.fract() != 0.0 {
        return Err(Error::InvalidInput(format!("{what} must be a positive integer, got {v}")));
    }
    Ok(v as usize)
}

impl std::str::FromStr for StateSource {
    type Err = Error;

    /// `pure`, `pure(4)`, `maximally_mixed(2)`, `diag(0.75,0.25)`,
    /// `random_seeded(dim,rank,seed)`, or a path to a JSON state file.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], Some(&s[i + 1..s.len() - 1])),
            _ => (s, None),
        };
        let args = args.map(parse_args).transpose()?;
        let one_dim = |args: Option<Vec<f64>>| -> Result<usize> {
            match args.as_deref() {
                None | Some([]) => Ok(2),
                Some([d]) => as_count(*d, "dimension"),
                Some(_) => Err(Error::InvalidInput(format!("'{name}' takes one dimension argument"))),
            }
        };
        match name {
            "pure" => Ok(StateSource::Pure(one_dim(args)?)),
            "maximally_mixed" | "maximally-mixed" => Ok(StateSource::MaximallyMixed(one_dim(args)?)),
            "diag" => Ok(StateSource::Diag(
                args.ok_or_else(|| Error::InvalidInput("diag needs probabilities, e.g. diag(0.75,0.25)".into()))?,
            )),
            "random_seeded" | "random-seeded" => match args.as_deref() {
                Some([d, r, seed]) => Ok(StateSource::RandomSeeded {
                    dim: as_count(*d, "dimension")?,
                    rank: as_count(*r, "rank")?,
                    seed: *seed as u64,
                }),
                Some([d]) => {
                    let dim = as_count(*d, "dimension")?;
                    Ok(StateSource::RandomSeeded { dim, rank: dim, seed: 0 })
                }
                _ => Err(Error::InvalidInput("random_seeded takes (dim) or (dim,rank,seed)".into())),
            },
            _ if args.is_none() => Ok(StateSource::File(PathBuf::from(s))),
            other => Err(Error::InvalidInput(format!("unknown state generator '{other}'"))),
        }
    }
}

impl StateSource {
    pub fn load(&self) -> Result<DensityMatrix> {
        match self {
            StateSource::Pure(dim) => {
                let mut psi = vec![Complex64::new(0.0, 0.0); *dim];
                if let Some(first) = psi.first_mut() {
                    *first = Complex64::new(1.0, 0.0);
                }
                DensityMatrix::pure(&psi)
            }
            StateSource::MaximallyMixed(dim) => DensityMatrix::maximally_mixed(*dim),
            StateSource::Diag(p) => DensityMatrix::from_diagonal(p),
            StateSource::RandomSeeded { dim, rank, seed } => DensityMatrix::random(*dim, *rank, *seed),
            StateSource::File(path) => pqsp_core::io::read_json::<DensityDoc>(path)?.to_state(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TraceMethod {
    Direct,
    Chebyshev,
    Monomial,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PropertySpec {
    Trace { method: TraceMethod, poly: PolynomialDoc },
    Renyi { alpha: f64 },
    VonNeumann,
    Partition { beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShotPolicy {
    Exact,
    Fixed(u64),
    /// Sized from a pilot run or the predicted cost.
    Auto,
}

pub fn estimator_strategy() -> Strategy {
    pqsp_core::estimate::EstimatorConfig::default().strategy
}

/// Everything needed to rerun an estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub property: PropertySpec,
    pub state: StateSource,
    pub k: usize,
    pub epsilon: f64,
    pub shots: ShotPolicy,
    pub seed: u64,
    #[serde(default = "estimator_strategy")]
    pub strategy: Strategy,
    #[serde(default)]
    pub sim_mode: SimMode,
    #[serde(default)]
    pub log_base: LogBase,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub rank: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.shots == ShotPolicy::Fixed(0) {
            return bad("shot count must be positive".into());
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < 1.0) {
                return bad(format!("delta must lie in (0, 1), got {d}"));
            }
        }
        if self.rank == Some(0) {
            return bad("rank must be positive".into());
        }
        match &self.property {
            PropertySpec::Renyi { alpha } if !(*alpha > 0.0) || *alpha == 1.0 || !alpha.is_finite() => {
                bad(format!("alpha must be positive and different from 1, got {alpha}"))
            }
            PropertySpec::Partition { beta } if !(*beta >= 0.0) || !beta.is_finite() => {
                bad(format!("beta must be non-negative, got {beta}"))
            }
            PropertySpec::Trace { poly, .. } if poly.coeffs.is_empty() => bad("polynomial has no coefficients".into()),
            _ => Ok(()),
        }
    }

    /// Content hash over the config (minus output paths) and the loaded
    /// state, in git blob form.
    pub fn input_hash(&self, rho: &DensityMatrix) -> Result<String> {
        let mut inputs = self.clone();
        inputs.out = None;
        inputs.csv = None;
        let doc = serde_json::json!({ "config": inputs, "state": DensityDoc::from_state(rho) });
        let body = serde_json::to_vec(&doc).map_err(|e| Error::InvalidInput(e.to_string()))?;
        let mut h = Sha256::new();
        h.update(format!("blob {}\0", body.len()).as_bytes());
        h.update(&body);
        Ok(hex::encode(h.finalize()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub config: ExperimentConfig,
    pub report: EstimationReport,
    pub version: String,
    pub input_sha256: String,
    /// Wall-clock seconds; the only field that varies between replays.
    pub duration_seconds: f64,
}
