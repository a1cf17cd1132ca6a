use super::{
    apply_qsp_real, block_encode_density, oracle_block_encode, purify, trace, BlockEncoding, CMatrix,
    DensityMatrix, EncodingRoute, SampleStats, Shots, ShotSampler, SimMode,
};
use crate::error::{Error, Result};
use crate::poly::{ChebyshevSeries, Parity, Polynomial};
use crate::qsp::{find_phases, Convention, FindPhasesOptions, QspPhases};
use num_complex::Complex64;

/// A polynomial that can be applied to the spectrum of a state.
pub trait SpectralFunction {
    fn eval(&self, x: f64) -> Complex64;
    fn degree(&self) -> usize;
    fn parity(&self) -> Parity;
    fn sup_norm(&self) -> f64;
    /// Real monomial form, when the coefficients are real.
    fn real_poly(&self) -> Option<Polynomial<f64>>;
    /// `Some(n)` when the function is exactly `T_n`.
    fn chebyshev_index(&self) -> Option<usize> {
        None
    }
}

impl SpectralFunction for Polynomial<Complex64> {
    fn eval(&self, x: f64) -> Complex64 {
        self.eval_real(x)
    }
    fn degree(&self) -> usize {
        Polynomial::degree(self)
    }
    fn parity(&self) -> Parity {
        Polynomial::parity(self)
    }
    fn sup_norm(&self) -> f64 {
        Polynomial::sup_norm(self)
    }
    fn real_poly(&self) -> Option<Polynomial<f64>> {
        self.is_real().then(|| self.real_part())
    }
}

impl SpectralFunction for Polynomial<f64> {
    fn eval(&self, x: f64) -> Complex64 {
        Complex64::new(Polynomial::eval(self, &x), 0.0)
    }
    fn degree(&self) -> usize {
        Polynomial::degree(self)
    }
    fn parity(&self) -> Parity {
        Polynomial::parity(self)
    }
    fn sup_norm(&self) -> f64 {
        Polynomial::sup_norm(self)
    }
    fn real_poly(&self) -> Option<Polynomial<f64>> {
        Some(self.clone())
    }
}

impl SpectralFunction for ChebyshevSeries<f64> {
    fn eval(&self, x: f64) -> Complex64 {
        Complex64::new(ChebyshevSeries::eval(self, &x), 0.0)
    }
    fn degree(&self) -> usize {
        ChebyshevSeries::degree(self)
    }
    fn parity(&self) -> Parity {
        ChebyshevSeries::parity(self)
    }
    fn sup_norm(&self) -> f64 {
        ChebyshevSeries::sup_norm(self)
    }
    fn real_poly(&self) -> Option<Polynomial<f64>> {
        Some(self.to_monomial())
    }
    fn chebyshev_index(&self) -> Option<usize> {
        let n = self.degree();
        let c = self.coeffs();
        (c[n] == 1.0 && c[..n].iter().all(|&v| v == 0.0)).then_some(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ParallelOptions {
    pub shots: Shots,
    pub mode: SimMode,
    pub route: EncodingRoute,
}

impl Default for Shots {
    fn default() -> Self {
        Shots::Exact
    }
}

/// Joint outcome probabilities of one parallel-QSP shot.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct JointProbabilities {
    /// `q_j = tr(P_j rho P_j^dagger)`, the success chance of thread `j`.
    pub thread_success: Vec<f64>,
    /// All threads succeed and the swap ancilla reads zero.
    pub plus: f64,
    /// All threads succeed and the swap ancilla reads one.
    pub minus: f64,
}

impl JointProbabilities {
    pub fn success(&self) -> f64 {
        self.plus + self.minus
    }

    /// `E[X]` for the shot value `X = +1, -1, 0`.
    pub fn value(&self) -> f64 {
        self.plus - self.minus
    }

    /// Sample `n` shots of the three-outcome estimator.
    pub fn sample(&self, n: u64, sampler: &mut ShotSampler) -> SampleStats {
        let c = sampler.multinomial(n, &[self.plus, self.minus]);
        let mut s = SampleStats::default();
        s.add(1.0, c[0]);
        s.add(-1.0, c[1]);
        s.add(0.0, n - c[0] - c[1]);
        s
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ParallelEstimate {
    /// `tr(rho^k prod_j |P_j(rho)|^2)`.
    pub value: f64,
    pub std_error: f64,
    /// Chance that every thread's block post-selection succeeds.
    pub success_probability: f64,
    /// `Re tr(sigma_1 ... sigma_k)` for the post-selected states.
    pub conditional_value: f64,
    pub threads: usize,
    pub shots: u64,
}

fn check_norms<F: SpectralFunction>(factors: &[F]) -> Result<()> {
    for (i, f) in factors.iter().enumerate() {
        let n = f.sup_norm();
        if n > 1.0 + 1e-9 {
            return Err(Error::NeedsRescale { index: i, norm: n });
        }
    }
    Ok(())
}

/// Joint probabilities without post-selection checks.
pub fn parallel_qsp_probabilities<F: SpectralFunction>(
    factors: &[F],
    rho: &DensityMatrix,
    mode: SimMode,
    route: EncodingRoute,
) -> Result<JointProbabilities> {
    if factors.is_empty() {
        return Err(Error::InvalidInput("parallel QSP needs at least one thread".into()));
    }
    match mode {
        SimMode::Direct => Ok(direct(factors, rho)),
        SimMode::Circuit => circuit(factors, rho, route),
    }
}

/// Estimate `tr(rho^k prod_j |P_j(rho)|^2)` with one thread per factor.
pub fn parallel_qsp_run<F: SpectralFunction>(
    factors: &[F],
    rho: &DensityMatrix,
    options: ParallelOptions,
    sampler: &mut ShotSampler,
) -> Result<ParallelEstimate> {
    check_norms(factors)?;
    let probs = parallel_qsp_probabilities(factors, rho, options.mode, options.route)?;
    let success = probs.success();
    let thread_success: f64 = probs.thread_success.iter().product();
    if thread_success <= 1e-300 {
        return Err(Error::PostSelectionImpossible);
    }
    let conditional = probs.value() / success.max(f64::MIN_POSITIVE);
    let (value, std_error, shots) = match options.shots {
        Shots::Exact => (probs.value(), 0.0, 0),
        Shots::Sampled(n) => {
            let s = probs.sample(n, sampler);
            (s.mean(), s.std_error(), n)
        }
    };
    Ok(ParallelEstimate {
        value,
        std_error,
        success_probability: success,
        conditional_value: conditional,
        threads: factors.len(),
        shots,
    })
}

fn direct<F: SpectralFunction>(factors: &[F], rho: &DensityMatrix) -> JointProbabilities {
    let mut q = Vec::with_capacity(factors.len());
    let mut sigmas = Vec::with_capacity(factors.len());
    for f in factors {
        let m = rho.apply(|x| f.eval(x));
        let s = &m * rho.matrix() * m.adjoint();
        q.push(trace(&s).re.max(0.0));
        sigmas.push(s);
    }
    // Unnormalized states: tr(prod) already carries prod q_j.
    let d = rho.dim();
    let mut prod = CMatrix::identity(d, d);
    for s in &sigmas {
        prod *= s;
    }
    let z = trace(&prod).re;
    let success: f64 = q.iter().product();
    JointProbabilities {
        thread_success: q,
        plus: 0.5 * (success + z),
        minus: 0.5 * (success - z),
    }
}

const MAX_CIRCUIT_AMPLITUDES: usize = 1 << 24;

fn encode<F: SpectralFunction>(f: &F, rho: &DensityMatrix, route: EncodingRoute) -> Result<BlockEncoding> {
    match route {
        EncodingRoute::Oracle => oracle_block_encode(&rho.apply(|x| f.eval(x))),
        EncodingRoute::Qsp { tol } => {
            let phases = qsp_phases_for(f, tol)?;
            Ok(apply_qsp_real(&phases, &block_encode_density(&purify(rho))))
        }
    }
}

fn qsp_phases_for<F: SpectralFunction>(f: &F, tol: f64) -> Result<QspPhases> {
    if let Some(n) = f.chebyshev_index() {
        return QspPhases::new(vec![0.0; n + 1], Convention::Wx00);
    }
    let p = f.real_poly().ok_or_else(|| {
        Error::InvalidInput("the QSP route needs real factor coefficients".into())
    })?;
    let series = p.to_chebyshev();
    if let Some(n) = SpectralFunction::chebyshev_index(&series) {
        return QspPhases::new(vec![0.0; n + 1], Convention::Wx00);
    }
    if p.degree() == 0 {
        let c = p.coeff(0);
        if c.abs() > 1.0 {
            return Err(Error::NeedsRescale { index: 0, norm: c.abs() });
        }
        return QspPhases::new(vec![c.acos()], Convention::Wx00);
    }
    find_phases(&p, tol, 400, FindPhasesOptions::default())
}

/// Statevector run: each thread applies its block encoding to
/// `|0>_anc (x) |psi_rho>_{sys,ref}` and is projected onto ancilla zero; the
/// kept slices are joined with a swap ancilla in `|+>`, the controlled cyclic
/// shift acts on the system registers, and a final Hadamard is read out.
fn circuit<F: SpectralFunction>(
    factors: &[F],
    rho: &DensityMatrix,
    route: EncodingRoute,
) -> Result<JointProbabilities> {
    let d = rho.dim();
    let k = factors.len();
    let slice = d * d;
    let total = slice
        .checked_pow(k as u32)
        .filter(|&n| n <= MAX_CIRCUIT_AMPLITUDES)
        .ok_or_else(|| Error::InvalidInput(format!("circuit mode is limited to {MAX_CIRCUIT_AMPLITUDES} amplitudes")))?;
    let psi = rho.purification_vector();
    let mut kept = Vec::with_capacity(k);
    let mut q = Vec::with_capacity(k);
    for f in factors {
        let enc = encode(f, rho, route)?;
        // Columns with ancilla zero carry the input; rows with ancilla zero are kept.
        let u = &enc.unitary;
        let mut out = vec![Complex64::new(0.0, 0.0); slice];
        for s_out in 0..d {
            for s_in in 0..d {
                let amp = u[(s_out, s_in)];
                if amp == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r in 0..d {
                    out[s_out * d + r] += amp * psi[s_in * d + r];
                }
            }
        }
        q.push(out.iter().map(|c| c.norm_sqr()).sum::<f64>());
        kept.push(out);
    }
    // Product state over threads; thread 0 is most significant.
    let mut state = vec![Complex64::new(1.0, 0.0)];
    for v in &kept {
        let mut next = Vec::with_capacity(state.len() * slice);
        for a in &state {
            for b in v {
                next.push(a * b);
            }
        }
        state = next;
    }
    debug_assert_eq!(state.len(), total);
    // Controlled cyclic shift: system register of thread j moves to thread j+1.
    let mut shifted = vec![Complex64::new(0.0, 0.0); total];
    let mut digits = vec![0usize; 2 * k];
    for (idx, amp) in state.iter().enumerate() {
        let mut rem = idx;
        for j in (0..k).rev() {
            digits[2 * j + 1] = rem % d;
            rem /= d;
            digits[2 * j] = rem % d;
            rem /= d;
        }
        let mut target = 0usize;
        for j in 0..k {
            let src = (j + k - 1) % k;
            target = (target * d + digits[2 * src]) * d + digits[2 * j + 1];
        }
        shifted[target] += amp;
    }
    // Swap ancilla: (|0>|Phi> + |1>|S Phi>) / sqrt 2, then H.
    let mut plus = 0.0;
    let mut minus = 0.0;
    for (a, b) in state.iter().zip(&shifted) {
        plus += (0.5 * (a + b)).norm_sqr();
        minus += (0.5 * (a - b)).norm_sqr();
    }
    Ok(JointProbabilities { thread_success: q, plus, minus })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct QueryDepth {
    /// Queries per thread: the degree for definite parity, twice it otherwise.
    pub depth: usize,
    /// Copies of the state used at once.
    pub width: usize,
}

pub fn query_depth_report<F: SpectralFunction>(factors: &[F]) -> QueryDepth {
    let depth = factors
        .iter()
        .map(|f| if f.parity().is_definite() { f.degree() } else { 2 * f.degree() })
        .max()
        .unwrap_or(0);
    QueryDepth { depth, width: factors.len() }
}
