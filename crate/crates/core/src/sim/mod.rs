//! Classical simulation of the quantum primitives: states, block encodings,
//! measurement tests, and the parallel QSP circuit.

mod density;
mod encoding;
mod measure;
mod parallel;
mod sampler;

pub use density::DensityMatrix;
pub use encoding::{
    apply_qsp, apply_qsp_real, block_encode_density, oracle_block_encode, purify, BlockEncoding,
    Purification,
};
pub use measure::{generalized_swap_expectation, hadamard_test, qsp_test, Part, TestEstimate};
pub use parallel::{
    parallel_qsp_probabilities, parallel_qsp_run, query_depth_report, JointProbabilities,
    ParallelEstimate, ParallelOptions, QueryDepth, SpectralFunction,
};
pub use sampler::{SampleStats, ShotSampler};

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Exact expectation values, or a finite number of measurement shots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shots {
    Exact,
    Sampled(u64),
}

impl Shots {
    pub fn sampled(n: u64) -> Result<Shots> {
        if n == 0 {
            return Err(Error::InvalidInput("shot count must be positive".into()));
        }
        Ok(Shots::Sampled(n))
    }

    pub fn count(self) -> u64 {
        match self {
            Shots::Exact => 0,
            Shots::Sampled(n) => n,
        }
    }
}

/// Direct spectral evaluation, or a statevector run of the full circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMode {
    #[default]
    Direct,
    Circuit,
}

/// How each factor becomes a block encoding in circuit mode.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EncodingRoute {
    /// Unitary dilation of the exact matrix `P_j(rho)`.
    #[default]
    Oracle,
    /// Phase-fitted QSP sequence on the purification block encoding of `rho`.
    Qsp { tol: f64 },
}

/// `sqrt` of a Hermitian positive semidefinite matrix, clamping tiny negative
/// eigenvalues.
pub(crate) fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let d = CMatrix::from_diagonal(&eig.eigenvalues.map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

pub(crate) fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Largest entry of `|U^dagger U - I|`.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let g = u.adjoint() * u - CMatrix::identity(n, n);
    g.iter().map(|v| v.norm()).fold(0.0, f64::max)
}
