//! Single-qubit QSP: the signal-processing unitary, its polynomial pair, and a
//! phase finder for real definite-parity targets.

mod phases;

pub use phases::{find_phases, FindPhasesOptions};

use crate::error::{Error, Result};
use crate::poly::{ChebyshevSeries, Parity, Polynomial};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Which matrix element of the QSP unitary carries the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `<0|U|0>`.
    #[default]
    Wx00,
    /// `<+|U|+>`.
    WxPlus,
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wx_00" | "wx00" => Ok(Convention::Wx00),
            "wx_pp" | "wx_plus" | "wx_++" => Ok(Convention::WxPlus),
            other => Err(Error::InvalidInput(format!("unknown convention '{other}'"))),
        }
    }
}

/// `d + 1` phases, stored reduced to `[0, 2pi)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QspPhases {
    pub phases: Vec<f64>,
    pub convention: Convention,
    /// Max error against the target at the fitting nodes, if the phases were fitted.
    #[serde(default)]
    pub residual: Option<f64>,
}

impl QspPhases {
    pub fn new(phases: Vec<f64>, convention: Convention) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidInput("a phase sequence needs at least one angle".into()));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput("phases must be finite".into()));
        }
        Ok(QspPhases {
            phases: phases.into_iter().map(|p| p.rem_euclid(2.0 * PI)).collect(),
            convention,
            residual: None,
        })
    }

    pub fn degree(&self) -> usize {
        self.phases.len() - 1
    }

    /// Same sequence with every angle negated; its `<0|U|0>` is the complex
    /// conjugate polynomial.
    pub fn negated(&self) -> Self {
        QspPhases {
            phases: self.phases.iter().map(|p| (-p).rem_euclid(2.0 * PI)).collect(),
            convention: self.convention,
            residual: self.residual,
        }
    }
}

pub type Mat2 = [[Complex64; 2]; 2];

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub(crate) fn signal(x: f64) -> Mat2 {
    let s = Complex64::new(0.0, (1.0 - x * x).max(0.0).sqrt());
    let c = Complex64::new(x, 0.0);
    [[c, s], [s, c]]
}

pub(crate) fn rotation(phi: f64) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    [[Complex64::from_polar(1.0, phi), z], [z, Complex64::from_polar(1.0, -phi)]]
}

/// `U = S(phi_0) prod_{i=1..d} W(x) S(phi_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QspUnitaryValue {
    pub matrix: Mat2,
}

impl QspUnitaryValue {
    pub fn element(&self, convention: Convention) -> Complex64 {
        let m = &self.matrix;
        match convention {
            Convention::Wx00 => m[0][0],
            Convention::WxPlus => 0.5 * (m[0][0] + m[0][1] + m[1][0] + m[1][1]),
        }
    }

    /// Largest deviation of `U^dagger U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let m = &self.matrix;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let v = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }
}

pub fn qsp_unitary(phases: &QspPhases, x: f64) -> Result<QspUnitaryValue> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::InvalidInput(format!("signal x = {x} lies outside [-1, 1]")));
    }
    let w = signal(x);
    let mut u = rotation(phases.phases[0]);
    for &p in &phases.phases[1..] {
        u = mat_mul(&mat_mul(&u, &w), &rotation(p));
    }
    Ok(QspUnitaryValue { matrix: u })
}

/// `(P, Q)` with `<0|U|0> = P(x)` and `<0|U|1> = i Q(x) sqrt(1 - x^2)`, fitted by
/// Chebyshev interpolation on `grid_size` interior nodes.
pub fn extract_polynomials(
    phases: &QspPhases,
    grid_size: usize,
) -> Result<(Polynomial<Complex64>, Polynomial<Complex64>)> {
    let d = phases.degree();
    let n = grid_size.max(2 * (d + 1));
    let nodes: Vec<f64> = (0..n).map(|j| (PI * (j as f64 + 0.5) / n as f64).cos()).collect();
    let mut pv = Vec::with_capacity(n);
    let mut qv = Vec::with_capacity(n);
    for &x in &nodes {
        let u = qsp_unitary(phases, x)?.matrix;
        pv.push(u[0][0]);
        qv.push(u[0][1] / Complex64::new(0.0, (1.0 - x * x).sqrt()));
    }
    let p = interpolate(&nodes, &pv, d);
    let q = if d == 0 { Polynomial::zero() } else { interpolate(&nodes, &qv, d - 1) };
    let fit_err = nodes
        .iter()
        .zip(pv.iter().zip(&qv))
        .map(|(&x, (a, b))| (p.eval_real(x) - a).norm().max((q.eval_real(x) - b).norm()))
        .fold(0.0, f64::max);
    if fit_err > 1e-8 {
        return Err(Error::Convergence { best_residual: fit_err, iterations: 1 });
    }
    Ok((p, q))
}

/// Discrete Chebyshev transform on first-kind nodes, truncated at `degree`.
fn interpolate(nodes: &[f64], vals: &[Complex64], degree: usize) -> Polynomial<Complex64> {
    let n = nodes.len() as f64;
    let coeffs: Vec<Complex64> = (0..=degree)
        .map(|m| {
            let s: Complex64 = nodes
                .iter()
                .zip(vals)
                .map(|(&x, v)| v * (m as f64 * x.acos()).cos())
                .sum();
            s * if m == 0 { 1.0 / n } else { 2.0 / n }
        })
        .collect();
    ChebyshevSeries::new(coeffs).to_monomial()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConditionReport {
    pub degree_ok: bool,
    pub parity_ok: bool,
    pub normalization_ok: bool,
    /// Largest `| |P|^2 + (1 - x^2) |Q|^2 - 1 |` on the check grid.
    pub worst_normalization: f64,
}

impl ConditionReport {
    pub fn all_ok(&self) -> bool {
        self.degree_ok && self.parity_ok && self.normalization_ok
    }
}

/// Degree, parity, and normalization conditions for a realizable pair.
pub fn validate_conditions(
    p: &Polynomial<Complex64>,
    q: &Polynomial<Complex64>,
    d: usize,
) -> ConditionReport {
    let degree_ok = p.degree() <= d && (q.is_zero() || q.degree() + 1 <= d);
    let parity_ok = (p.is_zero() || p.parity() == Parity::of(d))
        && (q.is_zero() || (d >= 1 && q.parity() == Parity::of(d - 1)));
    let worst = (0..=1000)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / 1000.0;
            (p.eval_real(x).norm_sqr() + (1.0 - x * x) * q.eval_real(x).norm_sqr() - 1.0).abs()
        })
        .fold(0.0, f64::max);
    ConditionReport {
        degree_ok,
        parity_ok,
        normalization_ok: worst <= 1e-9,
        worst_normalization: worst,
    }
}

/// `sum_n c_n T_n(lambda)`, the value a block-encoded Chebyshev series takes on
/// an eigenvalue `lambda`.
pub fn chebyshev_block_value(series: &ChebyshevSeries<Complex64>, lambda: f64) -> Complex64 {
    series.eval(&Complex64::new(lambda, 0.0))
}
