use super::{mat_mul, rotation, signal, Convention, Mat2, QspPhases};
use crate::error::{Error, Result};
use crate::poly::{Parity, Polynomial};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FindPhasesOptions {
    pub convention: Convention,
    pub starts: usize,
    pub seed: u64,
}

impl Default for FindPhasesOptions {
    fn default() -> Self {
        FindPhasesOptions { convention: Convention::Wx00, starts: 8, seed: 0x51_57_0a }
    }
}

/// Phases whose designated element has real part matching `target` at the
/// Chebyshev nodes to within `tol` (max error).
///
/// The target must be real, of definite parity, degree at most 40, and have
/// sup-norm at most `1 - 1e-6`, unless it is exactly `T_d`.
pub fn find_phases(
    target: &Polynomial<f64>,
    tol: f64,
    max_iter: usize,
    options: FindPhasesOptions,
) -> Result<QspPhases> {
    let d = target.degree();
    if d > 40 {
        return Err(Error::InvalidInput(format!("target degree {d} exceeds 40")));
    }
    let parity = target.parity();
    if parity == Parity::Indefinite {
        return Err(Error::Parity("phase finding needs a definite-parity target".into()));
    }
    if !target.is_zero() && parity != Parity::of(d) {
        return Err(Error::Parity("target parity disagrees with its degree".into()));
    }
    // T_d itself sits on the norm boundary but all-zero phases realize it exactly.
    let series = target.to_chebyshev();
    let is_basis = series.coeffs().iter().enumerate().all(|(n, &c)| {
        let want = if n == d { 1.0 } else { 0.0 };
        (c - want).abs() <= 1e-12
    });
    if is_basis {
        let mut out = QspPhases::new(vec![0.0; d + 1], options.convention)?;
        out.residual = Some(0.0);
        return Ok(out);
    }
    let norm = target.sup_norm();
    if norm > 1.0 - 1e-6 {
        return Err(Error::TargetNorm(norm));
    }
    let n = 2 * (d + 1);
    let nodes: Vec<f64> = (0..n).map(|j| (PI * (j as f64 + 0.5) / n as f64).cos()).collect();
    let values: Vec<f64> = nodes.iter().map(|x| target.eval(x)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut iterations = 0;
    for s in 0..options.starts.max(1) {
        let start: Vec<f64> = if s == 0 {
            vec![0.0; d + 1]
        } else {
            (0..=d).map(|_| rng.random_range(-0.5..0.5)).collect()
        };
        let (phi, err, its) = levenberg_marquardt(start, &nodes, &values, tol, max_iter);
        iterations += its;
        if best.as_ref().is_none_or(|(e, _)| err < *e) {
            best = Some((err, phi));
        }
        if err <= tol {
            break;
        }
    }
    let (err, phi) = best.expect("at least one start");
    if err > tol {
        return Err(Error::Convergence { best_residual: err, iterations });
    }
    let mut out = QspPhases::new(phi, options.convention)?;
    out.residual = Some(err);
    Ok(out)
}

/// Re <0|U|0> and its gradient with respect to every phase.
fn value_and_gradient(phi: &[f64], x: f64) -> (f64, Vec<f64>) {
    let d = phi.len() - 1;
    let w = signal(x);
    let id: Mat2 = rotation(0.0);
    let rots: Vec<Mat2> = phi.iter().map(|&p| rotation(p)).collect();
    // prefix[i] = S0 W S1 ... W (everything left of S_i)
    let mut prefix = Vec::with_capacity(d + 1);
    let mut acc = id;
    for i in 0..=d {
        prefix.push(acc);
        acc = mat_mul(&acc, &rots[i]);
        if i < d {
            acc = mat_mul(&acc, &w);
        }
    }
    let value = acc[0][0].re;
    // suffix[i] = W S_{i+1} ... W S_d (everything right of S_i)
    let mut suffix = vec![id; d + 1];
    let mut acc = id;
    for i in (0..=d).rev() {
        suffix[i] = acc;
        acc = mat_mul(&rots[i], &acc);
        if i > 0 {
            acc = mat_mul(&w, &acc);
        }
    }
    let iz: Mat2 = [
        [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
    ];
    let grad = (0..=d)
        .map(|i| {
            let m = mat_mul(&mat_mul(&prefix[i], &mat_mul(&iz, &rots[i])), &suffix[i]);
            m[0][0].re
        })
        .collect();
    (value, grad)
}

fn residuals(phi: &[f64], nodes: &[f64], values: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
    let m = nodes.len();
    let mut r = DVector::zeros(m);
    let mut j = DMatrix::zeros(m, phi.len());
    for (i, (&x, &v)) in nodes.iter().zip(values).enumerate() {
        let (f, g) = value_and_gradient(phi, x);
        r[i] = f - v;
        for (c, gc) in g.into_iter().enumerate() {
            j[(i, c)] = gc;
        }
    }
    (r, j)
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

fn levenberg_marquardt(
    mut phi: Vec<f64>,
    nodes: &[f64],
    values: &[f64],
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, usize) {
    let (mut r, mut jac) = residuals(&phi, nodes, values);
    let mut cost = r.norm_squared();
    let mut mu = 1e-3;
    let n = phi.len();
    let mut it = 0;
    while it < max_iter && max_abs(&r) > tol {
        it += 1;
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * &r;
        let mut a = jtj.clone();
        for i in 0..n {
            a[(i, i)] += mu * (jtj[(i, i)] + 1e-12);
        }
        let step = match a.cholesky() {
            Some(ch) => ch.solve(&(-&g)),
            None => {
                mu *= 10.0;
                continue;
            }
        };
        let cand: Vec<f64> = phi.iter().zip(step.iter()).map(|(p, s)| p + s).collect();
        let (cr, cj) = residuals(&cand, nodes, values);
        let ccost = cr.norm_squared();
        if ccost < cost {
            phi = cand;
            r = cr;
            jac = cj;
            cost = ccost;
            mu = (mu / 3.0).max(1e-12);
        } else {
            mu *= 4.0;
            if mu > 1e12 {
                break;
            }
        }
    }
    let err = max_abs(&r);
    (phi, err, it)
}
