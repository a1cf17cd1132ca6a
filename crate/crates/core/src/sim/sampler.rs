use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

/// Seeded source of independent ChaCha streams. The same seed and the same
/// sequence of requests reproduce the same samples.
#[derive(Debug, Clone)]
pub struct ShotSampler {
    seed: u64,
    next_stream: u64,
}

impl ShotSampler {
    pub fn new(seed: u64) -> Self {
        ShotSampler { seed, next_stream: 0 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Streams handed out so far.
    pub fn streams_used(&self) -> u64 {
        self.next_stream
    }

    pub fn stream(&mut self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.next_stream);
        self.next_stream += 1;
        rng
    }

    /// Number of successes in `n` Bernoulli(`p`) trials.
    pub fn binomial(&mut self, n: u64, p: f64) -> u64 {
        let mut rng = self.stream();
        binomial(&mut rng, n, p)
    }

    /// Counts for each outcome of `n` draws from `probs`; any remaining mass is
    /// an implicit final outcome.
    pub fn multinomial(&mut self, n: u64, probs: &[f64]) -> Vec<u64> {
        let mut rng = self.stream();
        multinomial(&mut rng, n, probs)
    }
}

pub(crate) fn binomial(rng: &mut ChaCha8Rng, n: u64, p: f64) -> u64 {
    let p = p.clamp(0.0, 1.0);
    if n == 0 || p == 0.0 {
        return 0;
    }
    if p == 1.0 {
        return n;
    }
    Binomial::new(n, p).expect("valid binomial").sample(rng)
}

/// Sequential conditional binomials.
pub(crate) fn multinomial(rng: &mut ChaCha8Rng, n: u64, probs: &[f64]) -> Vec<u64> {
    let mut left = n;
    let mut mass = 1.0f64;
    let mut out = Vec::with_capacity(probs.len());
    for &p in probs {
        let p = p.max(0.0);
        let c = if mass <= 0.0 { 0 } else { binomial(rng, left, (p / mass).min(1.0)) };
        out.push(c);
        left -= c;
        mass -= p;
    }
    out
}

/// Running sums of a scalar per-shot estimator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SampleStats {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl SampleStats {
    pub fn add(&mut self, value: f64, times: u64) {
        self.count += times;
        self.sum += value * times as f64;
        self.sum_sq += value * value * times as f64;
    }

    pub fn merge(&mut self, other: &SampleStats) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum / self.count as f64
        }
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            return f64::INFINITY;
        }
        let n = self.count as f64;
        let var = (self.sum_sq / n - self.mean().powi(2)).max(0.0);
        (var / n).sqrt()
    }
}
