use crate::sim::{JointProbabilities, SampleStats, ShotSampler};
use crate::error::{Error, Result};

/// A single-shot estimator with known mean.
pub trait TermEstimator {
    /// Mean of one shot.
    fn exact(&self) -> f64;
    /// Statistics of `n` independent shots.
    fn sample(&self, n: u64, sampler: &mut ShotSampler) -> SampleStats;
}

/// Returns the same value every shot.
#[derive(Debug, Clone, Copy)]
pub struct Deterministic(pub f64);

impl TermEstimator for Deterministic {
    fn exact(&self) -> f64 {
        self.0
    }
    fn sample(&self, n: u64, _: &mut ShotSampler) -> SampleStats {
        let mut s = SampleStats::default();
        s.add(self.0, n);
        s
    }
}

/// `scale * (+1 | -1)` with chance `p_zero` of `+1`.
#[derive(Debug, Clone, Copy)]
pub struct Hadamard {
    pub p_zero: f64,
    pub scale: f64,
}

impl TermEstimator for Hadamard {
    fn exact(&self) -> f64 {
        self.scale * (2.0 * self.p_zero - 1.0)
    }
    fn sample(&self, n: u64, sampler: &mut ShotSampler) -> SampleStats {
        let hits = sampler.binomial(n, self.p_zero);
        let mut s = SampleStats::default();
        s.add(self.scale, hits);
        s.add(-self.scale, n - hits);
        s
    }
}

/// One parallel-QSP shot, scaled.
#[derive(Debug, Clone)]
pub struct Parallel {
    pub probs: JointProbabilities,
    pub scale: f64,
}

impl TermEstimator for Parallel {
    fn exact(&self) -> f64 {
        self.scale * self.probs.value()
    }
    fn sample(&self, n: u64, sampler: &mut ShotSampler) -> SampleStats {
        let c = sampler.multinomial(n, &[self.probs.plus, self.probs.minus]);
        let mut s = SampleStats::default();
        s.add(self.scale, c[0]);
        s.add(-self.scale, c[1]);
        s.add(0.0, n - c[0] - c[1]);
        s
    }
}

/// Result of an importance-sampled sum.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SumEstimate {
    pub value: f64,
    pub std_error: f64,
    pub shots: u64,
}

/// Estimate `sum_j c_j E[B_j]`: each shot picks `j` with chance `|c_j| / ||c||_1`
/// and contributes `||c||_1 sign(c_j) B_j`. `shots = None` gives the exact sum.
pub fn importance_sample(
    coeffs: &[f64],
    estimators: &[&dyn TermEstimator],
    shots: Option<u64>,
    sampler: &mut ShotSampler,
) -> Result<SumEstimate> {
    if coeffs.len() != estimators.len() {
        return Err(Error::InvalidInput(format!(
            "{} coefficients for {} term estimators",
            coeffs.len(),
            estimators.len()
        )));
    }
    let norm: f64 = coeffs.iter().map(|c| c.abs()).sum();
    if !(norm > 0.0) {
        return Err(Error::InvalidInput("importance sampling needs a non-zero coefficient".into()));
    }
    let Some(n) = shots else {
        let value = coeffs.iter().zip(estimators).map(|(c, e)| c * e.exact()).sum();
        return Ok(SumEstimate { value, std_error: 0.0, shots: 0 });
    };
    if n == 0 {
        return Err(Error::InvalidInput("shot count must be positive".into()));
    }
    let probs: Vec<f64> = coeffs.iter().map(|c| c.abs() / norm).collect();
    let counts = sampler.multinomial(n, &probs[..probs.len() - 1]);
    let last = n - counts.iter().sum::<u64>();
    let mut total = SampleStats::default();
    for (j, (&c, e)) in coeffs.iter().zip(estimators).enumerate() {
        let nj = if j + 1 == coeffs.len() { last } else { counts[j] };
        if nj == 0 {
            continue;
        }
        let s = e.sample(nj, sampler);
        let w = norm * c.signum();
        total.merge(&SampleStats { count: s.count, sum: w * s.sum, sum_sq: w * w * s.sum_sq });
    }
    Ok(SumEstimate { value: total.mean(), std_error: total.std_error(), shots: n })
}
