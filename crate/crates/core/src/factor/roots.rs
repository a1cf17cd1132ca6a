use crate::error::{Error, Result};
use crate::poly::Polynomial;
use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

/// A root with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub leading: Complex64,
    pub worst_residual: f64,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// `leading * prod (x - r)^m`.
    pub fn reconstruct(&self) -> Polynomial<Complex64> {
        let mut p = Polynomial::constant(self.leading);
        for r in &self.roots {
            let lin = Polynomial::new(vec![-r.value, Complex64::new(1.0, 0.0)]);
            p = &p * &lin.pow(r.multiplicity);
        }
        p
    }
}

const RESIDUAL_TOL: f64 = 1e-10;
const CLUSTER_TOL: f64 = 1e-7;

/// Roots with multiplicities, clustered within `1e-7` (relative beyond the unit
/// disk).
pub fn find_roots(p: &Polynomial<Complex64>) -> Result<RootSet> {
    let (raw, worst) = raw_roots(p)?;
    let mut used = vec![false; raw.len()];
    let mut roots = Vec::new();
    for i in 0..raw.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = vec![raw[i]];
        for j in i + 1..raw.len() {
            let tol = CLUSTER_TOL * raw[i].norm().max(1.0);
            if !used[j] && (raw[j] - raw[i]).norm() <= tol {
                used[j] = true;
                members.push(raw[j]);
            }
        }
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        roots.push(Root { value: mean, multiplicity: members.len() });
    }
    roots.sort_by(|a, b| {
        a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im))
    });
    Ok(RootSet { roots, leading: p.leading(), worst_residual: worst })
}

fn scale_at(p: &Polynomial<Complex64>, r: Complex64) -> f64 {
    let m = r.norm();
    let one = p.coeff_one_norm();
    let local: f64 = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c.norm() * m.powi(n as i32))
        .sum();
    one.max(local)
}

fn relative_residual(p: &Polynomial<Complex64>, r: Complex64) -> f64 {
    p.eval_c64(r).norm() / scale_at(p, r)
}

/// All `deg p` roots, unclustered, with the worst relative residual.
pub(crate) fn raw_roots(p: &Polynomial<Complex64>) -> Result<(Vec<Complex64>, f64)> {
    if p.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has no root set".into()));
    }
    let c = p.coeffs();
    let zeros = c.iter().take_while(|v| v.norm() == 0.0).count();
    let reduced = Polynomial::new(c[zeros..].to_vec());
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if reduced.degree() > 0 {
        let mut found = companion_roots(&reduced)
            .filter(|r| r.iter().all(|z| z.is_finite()))
            .unwrap_or_else(|| aberth(&reduced));
        polish(&reduced, &mut found);
        let worst = found.iter().map(|&r| relative_residual(&reduced, r)).fold(0.0, f64::max);
        if worst > RESIDUAL_TOL {
            let mut alt = aberth(&reduced);
            polish(&reduced, &mut alt);
            let worst_alt =
                alt.iter().map(|&r| relative_residual(&reduced, r)).fold(0.0, f64::max);
            if worst_alt < worst {
                found = alt;
            }
        }
        roots.extend(found);
    }
    let worst = roots.iter().map(|&r| relative_residual(p, r)).fold(0.0, f64::max);
    if worst > RESIDUAL_TOL {
        return Err(Error::RootFinding { worst_residual: worst });
    }
    Ok((roots, worst))
}

fn companion_roots(p: &Polynomial<Complex64>) -> Option<Vec<Complex64>> {
    let d = p.degree();
    let lead = p.leading();
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -p.coeff(i) / lead;
    }
    let schur = Schur::try_new(m, 1e-15, 200 * d)?;
    schur.eigenvalues().map(|v| v.iter().cloned().collect())
}

/// Aberth-Ehrlich simultaneous iteration.
pub(crate) fn aberth(p: &Polynomial<Complex64>) -> Vec<Complex64> {
    let d = p.degree();
    let dp = p.derivative();
    let lead = p.leading().norm();
    let radius = 1.0
        + p.coeffs()[..d]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max);
    let r0 = radius.min(1e6).max(1e-3) * 0.5;
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / d as f64 + 0.4;
            Complex64::from_polar(r0, t)
        })
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let pv = p.eval_c64(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dp.eval_c64(z[i]);
            let s: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Newton steps accepted only while the residual decreases.
fn polish(p: &Polynomial<Complex64>, roots: &mut [Complex64]) {
    let dp = p.derivative();
    for r in roots.iter_mut() {
        let mut res = p.eval_c64(*r).norm();
        for _ in 0..30 {
            let d = dp.eval_c64(*r);
            if d.norm() == 0.0 || res == 0.0 {
                break;
            }
            let cand = *r - p.eval_c64(*r) / d;
            let cres = p.eval_c64(cand).norm();
            if cand.is_finite() && cres < res {
                *r = cand;
                res = cres;
            } else {
                break;
            }
        }
    }
}
