use super::CMatrix;
use crate::error::{Error, Result};
use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const TOL: f64 = 1e-10;

/// A validated density matrix with its eigendecomposition.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl DensityMatrix {
    /// Hermitian, positive semidefinite, unit trace, each within `1e-10`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || matrix.ncols() != n {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, expected square and non-empty",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = (&matrix - matrix.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max);
        if herm > TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr: Complex64 = matrix.diagonal().iter().sum();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TOL {
            return Err(Error::InvalidState(format!("trace is {:.12}, expected 1", tr.re)));
        }
        let h = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = h.clone().symmetric_eigen();
        let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        let eigenvalues = eig.eigenvalues.iter().map(|v| v.max(0.0)).collect();
        Ok(DensityMatrix { matrix: h, eigenvalues, eigenvectors: eig.eigenvectors })
    }

    /// Diagonal state from a probability vector.
    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(probs.len(), probs.iter().map(|&p| Complex64::new(p, 0.0)));
        Self::new(CMatrix::from_diagonal(&d))
    }

    /// `|psi><psi|`; `psi` is normalized first.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 {
            return Err(Error::InvalidState("pure state vector is zero".into()));
        }
        let v = DVector::from_iterator(psi.len(), psi.iter().map(|c| c / norm));
        Self::new(&v * v.adjoint())
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidState("dimension must be positive".into()));
        }
        Self::from_diagonal(&vec![1.0 / dim as f64; dim])
    }

    /// `G G^dagger / tr` for a complex Gaussian `dim x rank` matrix `G`.
    pub fn random(dim: usize, rank: usize, seed: u64) -> Result<Self> {
        if dim == 0 || rank == 0 || rank > dim {
            return Err(Error::InvalidState(format!("bad random state shape dim={dim} rank={rank}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = CMatrix::from_fn(dim, rank, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        });
        let m = &g * g.adjoint();
        let tr: f64 = m.diagonal().iter().map(|c| c.re).sum();
        Self::new(m / Complex64::new(tr, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|&&v| v > tol).count()
    }

    /// Smallest eigenvalue above `tol`.
    pub fn min_nonzero_eigenvalue(&self, tol: f64) -> Option<f64> {
        self.eigenvalues.iter().cloned().filter(|&v| v > tol).reduce(f64::min)
    }

    /// `f(rho)` through the eigendecomposition.
    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let d = DVector::from_iterator(self.dim(), self.eigenvalues.iter().map(|&l| f(l)));
        &self.eigenvectors * CMatrix::from_diagonal(&d) * self.eigenvectors.adjoint()
    }

    /// `sum_i f(lambda_i)`, the exact value of `tr f(rho)`.
    pub fn spectral_trace(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        self.eigenvalues.iter().map(|&l| f(l)).sum()
    }

    /// The state vector `sum_i sqrt(lambda_i) |v_i>|i>` on system (major) and
    /// reference registers.
    pub fn purification_vector(&self) -> Vec<Complex64> {
        let d = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for (i, &l) in self.eigenvalues.iter().enumerate() {
            let s = l.sqrt();
            for a in 0..d {
                out[a * d + i] = self.eigenvectors[(a, i)] * s;
            }
        }
        out
    }

    /// Row-major `[[re, im], ...]` rows.
    pub fn to_rows(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| [self.matrix[(i, j)].re, self.matrix[(i, j)].im]).collect())
            .collect()
    }

    pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidState("rows must all have the matrix dimension".into()));
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
    }
}
