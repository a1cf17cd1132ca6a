use crate::error::{Error, Result};
use crate::poly::ChebyshevSeries;
use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ApproximantCertificate {
    pub degree: usize,
    pub delta: f64,
    pub target_error: f64,
    /// Max error on a dense grid of `[delta, 1]` independent of the fitting nodes.
    pub certified_error: f64,
    pub sup_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Approximant {
    pub series: ChebyshevSeries<f64>,
    pub certificate: ApproximantCertificate,
}

const GAP_WEIGHT: f64 = 0.1;

/// Odd polynomial approximating the odd extension of `f` on `+-[delta, 1]` to
/// within `target_error`, by weighted least squares in the odd Chebyshev basis
/// at increasing degree. `f` is only evaluated on `[0, 1]` and should satisfy
/// `f(0) = 0`.
pub fn fit_odd_approximant(
    f: impl Fn(f64) -> f64,
    delta: f64,
    target_error: f64,
    max_degree: usize,
) -> Result<Approximant> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!("delta = {delta} must lie in (0, 1)")));
    }
    if !(target_error > 0.0) {
        return Err(Error::InvalidInput("target error must be positive".into()));
    }
    let mut best = f64::INFINITY;
    let mut degree = 1;
    while degree <= max_degree {
        let m = degree.div_ceil(2);
        let mut nodes = Vec::new();
        let n_all = 2 * m + 16;
        for i in 0..n_all {
            let x = 0.5 * (1.0 + (PI * (i as f64 + 0.5) / n_all as f64).cos());
            nodes.push((x, if x < delta { GAP_WEIGHT } else { 1.0 }));
        }
        let n_fit = 3 * m + 16;
        for i in 0..n_fit {
            let t = (PI * (i as f64 + 0.5) / n_fit as f64).cos();
            nodes.push((delta + (1.0 - delta) * 0.5 * (1.0 + t), 1.0));
        }
        let a = DMatrix::from_fn(nodes.len(), m, |r, c| {
            let (x, w) = nodes[r];
            w * ((2 * c + 1) as f64 * x.acos()).cos()
        });
        let b = DVector::from_fn(nodes.len(), |r, _| nodes[r].1 * f(nodes[r].0));
        let sol = a
            .svd(true, true)
            .solve(&b, 1e-14)
            .map_err(|e| Error::InvalidInput(format!("least squares failed: {e}")))?;
        let mut coeffs = vec![0.0; 2 * m];
        for c in 0..m {
            coeffs[2 * c + 1] = sol[c];
        }
        let series = ChebyshevSeries::new(coeffs);
        let grid = (10 * degree).max(2000);
        let err = (0..=grid)
            .map(|i| {
                let x = delta + (1.0 - delta) * i as f64 / grid as f64;
                (series.eval(&x) - f(x)).abs()
            })
            .fold(0.0, f64::max);
        best = best.min(err);
        if err <= target_error {
            let sup_norm = series.sup_norm();
            return Ok(Approximant {
                certificate: ApproximantCertificate {
                    degree: series.degree(),
                    delta,
                    target_error,
                    certified_error: err,
                    sup_norm,
                },
                series,
            });
        }
        degree += 2;
    }
    Err(Error::Convergence { best_residual: best, iterations: max_degree.div_ceil(2) })
}
