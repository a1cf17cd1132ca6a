use super::{psd_sqrt, unitarity_error, CMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::qsp::QspPhases;
use nalgebra::DVector;
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_4;

/// `V` on `A (x) B` with `V|00> = sum_j sqrt(p_j) |j>|chi_j>`.
#[derive(Debug, Clone)]
pub struct Purification {
    pub dim: usize,
    pub unitary: CMatrix,
}

impl Purification {
    pub fn state(&self) -> DVector<Complex64> {
        self.unitary.column(0).into_owned()
    }

    /// `tr_A |psi><psi|`.
    pub fn reduced_state(&self) -> CMatrix {
        let d = self.dim;
        let psi = self.state();
        CMatrix::from_fn(d, d, |b, c| (0..d).map(|a| psi[a * d + b] * psi[a * d + c].conj()).sum())
    }
}

pub fn purify(rho: &DensityMatrix) -> Purification {
    let d = rho.dim();
    let n = d * d;
    let mut psi = vec![Complex64::new(0.0, 0.0); n];
    let vecs = rho.eigenvectors();
    for (j, &p) in rho.eigenvalues().iter().enumerate() {
        let s = p.sqrt();
        for b in 0..d {
            psi[j * d + b] = vecs[(b, j)] * s;
        }
    }
    // Complete psi to a unitary; QR fixes the first column up to a phase.
    let mut m = CMatrix::identity(n, n);
    for (i, v) in psi.iter().enumerate() {
        m[(i, 0)] = *v;
    }
    let qr = m.qr();
    let r00 = qr.r()[(0, 0)];
    let mut q = qr.q();
    let phase = if r00.norm() > 0.0 { r00 / r00.norm() } else { Complex64::new(1.0, 0.0) };
    for i in 0..n {
        q[(i, 0)] *= phase;
    }
    Purification { dim: d, unitary: q }
}

/// Unitary `U` on `ancilla (x) system`, ancilla-major, whose block at ancilla
/// index zero is the encoded operator.
#[derive(Debug, Clone)]
pub struct BlockEncoding {
    pub unitary: CMatrix,
    pub ancilla_dim: usize,
    pub system_dim: usize,
}

impl BlockEncoding {
    pub fn new(unitary: CMatrix, ancilla_dim: usize, system_dim: usize) -> Result<Self> {
        if unitary.nrows() != ancilla_dim * system_dim || !unitary.is_square() {
            return Err(Error::Dimension(format!(
                "unitary is {}x{}, expected {}",
                unitary.nrows(),
                unitary.ncols(),
                ancilla_dim * system_dim
            )));
        }
        Ok(BlockEncoding { unitary, ancilla_dim, system_dim })
    }

    /// `(<0| (x) I) U (|0> (x) I)`.
    pub fn block(&self) -> CMatrix {
        let d = self.system_dim;
        self.unitary.view((0, 0), (d, d)).into_owned()
    }

    pub fn unitarity_error(&self) -> f64 {
        unitarity_error(&self.unitary)
    }

    fn total(&self) -> usize {
        self.ancilla_dim * self.system_dim
    }
}

/// `U = (V^dagger (x) I) SWAP_BC (V (x) I)` on `A (x) B (x) C`; the block at
/// `<00|_AB` is `rho`, and `U` is Hermitian.
pub fn block_encode_density(p: &Purification) -> BlockEncoding {
    let d = p.dim;
    let v = &p.unitary;
    let n = d * d * d;
    // U[(ab)c, (a'b')c'] = sum_x conj(V[x c', ab]) V[x c, a'b'].
    let mut u = CMatrix::zeros(n, n);
    for ab in 0..d * d {
        for c in 0..d {
            for ab2 in 0..d * d {
                for c2 in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for x in 0..d {
                        acc += v[(x * d + c2, ab)].conj() * v[(x * d + c, ab2)];
                    }
                    u[(ab * d + c, ab2 * d + c2)] = acc;
                }
            }
        }
    }
    BlockEncoding { unitary: u, ancilla_dim: d * d, system_dim: d }
}

/// `[[M, sqrt(I - M M^dagger)], [sqrt(I - M^dagger M), -M^dagger]]` for a
/// contraction `M`.
pub fn oracle_block_encode(m: &CMatrix) -> Result<BlockEncoding> {
    let d = m.nrows();
    if !m.is_square() || d == 0 {
        return Err(Error::Dimension("oracle encoding needs a square operator".into()));
    }
    let norm = m.clone().singular_values().iter().cloned().fold(0.0, f64::max);
    if norm > 1.0 + 1e-9 {
        return Err(Error::NotContraction(norm));
    }
    let id = CMatrix::identity(d, d);
    let mh = m.adjoint();
    let top = psd_sqrt(&(&id - m * &mh));
    let bot = psd_sqrt(&(&id - &mh * m));
    let mut u = CMatrix::zeros(2 * d, 2 * d);
    u.view_mut((0, 0), (d, d)).copy_from(m);
    u.view_mut((0, d), (d, d)).copy_from(&top);
    u.view_mut((d, 0), (d, d)).copy_from(&bot);
    u.view_mut((d, d), (d, d)).copy_from(&(-mh));
    Ok(BlockEncoding { unitary: u, ancilla_dim: 2, system_dim: d })
}

/// Diagonal `e^{i phi (2 Pi - I)}` with `Pi` the ancilla-zero projector.
fn projector_rotation(enc: &BlockEncoding, phi: f64) -> DVector<Complex64> {
    let d = enc.system_dim;
    DVector::from_fn(enc.total(), |i, _| {
        Complex64::from_polar(1.0, if i < d { phi } else { -phi })
    })
}

fn scale_rows(diag: &DVector<Complex64>, m: &CMatrix) -> CMatrix {
    let mut out = m.clone();
    for (i, mut row) in out.row_iter_mut().enumerate() {
        row *= diag[i];
    }
    out
}

/// Block encoding of `P(A)`, where `P = <0|U_phi|0>` and `A` is the block of `enc`.
///
/// The signal operator acts as a reflection on each invariant subspace; the
/// phases are shifted to that form and the global factor `i^d` restored.
/// Copies of `U` and `U^dagger` alternate.
pub fn apply_qsp(phases: &QspPhases, enc: &BlockEncoding) -> BlockEncoding {
    let d = phases.degree();
    let shifted: Vec<f64> = phases
        .phases
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            if d == 0 {
                p
            } else if i == 0 || i == d {
                p - FRAC_PI_4
            } else {
                p - 2.0 * FRAC_PI_4
            }
        })
        .collect();
    let udag = enc.unitary.adjoint();
    // Build from the right: the last rotation acts first.
    let mut acc = CMatrix::from_diagonal(&projector_rotation(enc, shifted[d]));
    for i in (0..d).rev() {
        // Factor right of rotation i is U when (d - 1 - i) is even.
        let sig = if (d - 1 - i) % 2 == 0 { &enc.unitary } else { &udag };
        acc = sig * acc;
        acc = scale_rows(&projector_rotation(enc, shifted[i]), &acc);
    }
    let global = Complex64::new(0.0, 1.0).powi(d as i32);
    BlockEncoding {
        unitary: acc * global,
        ancilla_dim: enc.ancilla_dim,
        system_dim: enc.system_dim,
    }
}

/// Block encoding of `(Re P)(A)` as the average of the sequences for `phi` and
/// `-phi`, using one extra ancilla qubit (most significant).
pub fn apply_qsp_real(phases: &QspPhases, enc: &BlockEncoding) -> BlockEncoding {
    let plus = apply_qsp(phases, enc).unitary;
    let minus = apply_qsp(&phases.negated(), enc).unitary;
    let n = plus.nrows();
    let mut sel = CMatrix::zeros(2 * n, 2 * n);
    sel.view_mut((0, 0), (n, n)).copy_from(&plus);
    sel.view_mut((n, n), (n, n)).copy_from(&minus);
    let h = CMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0].map(|v| Complex64::new(v, 0.0)))
        * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let hh = h.kronecker(&CMatrix::identity(n, n));
    BlockEncoding {
        unitary: &hh * sel * &hh,
        ancilla_dim: 2 * enc.ancilla_dim,
        system_dim: enc.system_dim,
    }
}
