use super::{trace, BlockEncoding, CMatrix, DensityMatrix, Shots, ShotSampler};
use crate::error::{Error, Result};


/// Real or imaginary part for a Hadamard test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Part {
    #[default]
    Real,
    Imaginary,
}

/// Outcome of a one-ancilla test. `probability` is the (estimated) chance of
/// the marked outcome; `value` is the derived expectation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TestEstimate {
    pub probability: f64,
    pub value: f64,
    pub std_error: f64,
    pub shots: u64,
}

fn check_dims(enc: &BlockEncoding, sigma: &DensityMatrix) -> Result<()> {
    if enc.system_dim != sigma.dim() {
        return Err(Error::Dimension(format!(
            "encoding acts on dimension {}, state has {}",
            enc.system_dim,
            sigma.dim()
        )));
    }
    Ok(())
}

/// Probability `1/2 + 1/2 Re tr(sigma A)` of reading ancilla zero, where `A` is
/// the encoded block; `value = 2p - 1`.
pub fn hadamard_test(
    enc: &BlockEncoding,
    sigma: &DensityMatrix,
    shots: Shots,
    part: Part,
    sampler: &mut ShotSampler,
) -> Result<TestEstimate> {
    check_dims(enc, sigma)?;
    let t = trace(&(sigma.matrix() * enc.block()));
    let x = match part {
        Part::Real => t.re,
        Part::Imaginary => t.im,
    };
    Ok(bernoulli_readout(0.5 + 0.5 * x, shots, sampler, |p| 2.0 * p - 1.0, 2.0))
}

/// Probability `tr(A sigma A^dagger)` of finding the block qubits in zero.
pub fn qsp_test(
    enc: &BlockEncoding,
    sigma: &DensityMatrix,
    shots: Shots,
    sampler: &mut ShotSampler,
) -> Result<TestEstimate> {
    check_dims(enc, sigma)?;
    let a = enc.block();
    let p = trace(&(&a * sigma.matrix() * a.adjoint())).re;
    Ok(bernoulli_readout(p, shots, sampler, |p| p, 1.0))
}

/// `Re tr(S_k rho_1 (x) ... (x) rho_k) = Re tr(rho_1 ... rho_k)`, read out by a
/// Hadamard test on the cyclic shift.
pub fn generalized_swap_expectation(
    states: &[&CMatrix],
    shots: Shots,
    sampler: &mut ShotSampler,
) -> Result<TestEstimate> {
    let first = states
        .first()
        .ok_or_else(|| Error::InvalidInput("swap test needs at least one state".into()))?;
    let d = first.nrows();
    if states.iter().any(|s| s.nrows() != d || s.ncols() != d) {
        return Err(Error::Dimension("all states must share one dimension".into()));
    }
    let mut prod = CMatrix::identity(d, d);
    for s in states {
        prod = prod * *s;
    }
    let x = trace(&prod).re;
    Ok(bernoulli_readout(0.5 * (1.0 + x), shots, sampler, |p| 2.0 * p - 1.0, 2.0))
}

fn bernoulli_readout(
    p: f64,
    shots: Shots,
    sampler: &mut ShotSampler,
    value: impl Fn(f64) -> f64,
    slope: f64,
) -> TestEstimate {
    let p = p.clamp(0.0, 1.0);
    match shots {
        Shots::Exact => TestEstimate { probability: p, value: value(p), std_error: 0.0, shots: 0 },
        Shots::Sampled(n) => {
            let hits = sampler.binomial(n, p);
            let ph = hits as f64 / n as f64;
            TestEstimate {
                probability: ph,
                value: value(ph),
                std_error: slope * (ph * (1.0 - ph) / n as f64).sqrt(),
                shots: n,
            }
        }
    }
}

