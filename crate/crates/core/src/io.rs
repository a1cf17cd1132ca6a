//! JSON documents for polynomials, states, plans, and phases.

use crate::error::{Error, Result};
use crate::factor::{FactorizationPlan, Strategy};
use crate::poly::{ChebyshevSeries, Polynomial};
use crate::sim::DensityMatrix;
use num_complex::Complex64;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    #[default]
    Monomial,
    Chebyshev,
}

/// `{"basis": "monomial" | "chebyshev", "coeffs": [[re, im], ...]}`, lowest
/// degree first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialDoc {
    #[serde(default)]
    pub basis: Basis,
    pub coeffs: Vec<[f64; 2]>,
}

const IMAG_TOLERANCE: f64 = 1e-12;

impl PolynomialDoc {
    pub fn from_poly(p: &Polynomial<Complex64>) -> Self {
        PolynomialDoc { basis: Basis::Monomial, coeffs: p.coeffs().iter().map(|c| [c.re, c.im]).collect() }
    }

    pub fn from_real(p: &Polynomial<f64>) -> Self {
        PolynomialDoc { basis: Basis::Monomial, coeffs: p.coeffs().iter().map(|&c| [c, 0.0]).collect() }
    }

    pub fn from_series(s: &ChebyshevSeries<f64>) -> Self {
        PolynomialDoc { basis: Basis::Chebyshev, coeffs: s.coeffs().iter().map(|&c| [c, 0.0]).collect() }
    }

    fn check(&self) -> Result<()> {
        if self.coeffs.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("polynomial coefficients must be finite".into()));
        }
        Ok(())
    }

    /// Monomial-basis complex polynomial.
    pub fn to_poly(&self) -> Result<Polynomial<Complex64>> {
        self.check()?;
        let c: Vec<Complex64> = self.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Ok(match self.basis {
            Basis::Monomial => Polynomial::new(c),
            Basis::Chebyshev => {
                let re = ChebyshevSeries::new(c.iter().map(|z| z.re).collect()).to_monomial();
                let im = ChebyshevSeries::new(c.iter().map(|z| z.im).collect()).to_monomial();
                &re.to_complex() + &im.to_complex().scale(&Complex64::i())
            }
        })
    }

    fn real_coeffs(&self) -> Result<Vec<f64>> {
        self.check()?;
        if let Some(c) = self.coeffs.iter().find(|c| c[1].abs() > IMAG_TOLERANCE) {
            return Err(Error::InvalidInput(format!(
                "expected a real polynomial, found imaginary part {:e}",
                c[1]
            )));
        }
        Ok(self.coeffs.iter().map(|c| c[0]).collect())
    }

    /// Monomial-basis real polynomial; errors on non-negligible imaginary parts.
    pub fn to_real(&self) -> Result<Polynomial<f64>> {
        let c = self.real_coeffs()?;
        Ok(match self.basis {
            Basis::Monomial => Polynomial::new(c),
            Basis::Chebyshev => ChebyshevSeries::new(c).to_monomial(),
        })
    }

    /// Chebyshev-basis real series, converting exactly when given monomials.
    pub fn to_series(&self) -> Result<ChebyshevSeries<f64>> {
        let c = self.real_coeffs()?;
        Ok(match self.basis {
            Basis::Monomial => Polynomial::new(c).to_chebyshev(),
            Basis::Chebyshev => ChebyshevSeries::new(c),
        })
    }
}

/// Row-major `[[re, im], ...]` rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DensityDoc(pub Vec<Vec<[f64; 2]>>);

impl DensityDoc {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        DensityDoc(rho.to_rows())
    }

    pub fn to_state(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_rows(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDoc {
    pub k: usize,
    pub source_degree: usize,
    pub strategy: Strategy,
    pub factors: Vec<PolynomialDoc>,
    pub norms: Vec<f64>,
    #[serde(rename = "K")]
    pub k_constant: f64,
    #[serde(default = "one")]
    pub attenuation: f64,
}

fn one() -> f64 {
    1.0
}

impl PlanDoc {
    pub fn from_plan(plan: &FactorizationPlan) -> Self {
        PlanDoc {
            k: plan.k,
            source_degree: plan.source_degree,
            strategy: plan.strategy,
            factors: plan.factors.iter().map(PolynomialDoc::from_poly).collect(),
            norms: plan.norms.clone(),
            k_constant: plan.k_constant,
            attenuation: plan.attenuation,
        }
    }

    pub fn to_plan(&self) -> Result<FactorizationPlan> {
        if self.factors.len() != self.k || self.norms.len() != self.k {
            return Err(Error::InvalidInput(format!(
                "plan declares k = {} but lists {} factors and {} norms",
                self.k,
                self.factors.len(),
                self.norms.len()
            )));
        }
        let factors = self.factors.iter().map(|f| f.to_poly()).collect::<Result<Vec<_>>>()?;
        Ok(FactorizationPlan {
            k: self.k,
            source_degree: self.source_degree,
            strategy: self.strategy,
            factors,
            norms: self.norms.clone(),
            k_constant: self.k_constant,
            attenuation: self.attenuation,
        })
    }
}

pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    from_json_str(&text)
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::InvalidInput(format!("cannot serialize: {e}")))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_json_string(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_doc_converts_to_monomials() {
        let doc: PolynomialDoc =
            from_json_str(r#"{"basis": "chebyshev", "coeffs": [[0,0],[0,0],[1,0]]}"#).unwrap();
        assert_eq!(doc.to_real().unwrap().coeffs(), &[-1.0, 0.0, 2.0]);
    }

    #[test]
    fn imaginary_part_rejected_for_real_use() {
        let doc = PolynomialDoc { basis: Basis::Monomial, coeffs: vec![[0.0, 0.5]] };
        assert!(doc.to_real().is_err());
        assert!(doc.to_poly().is_ok());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(from_json_str::<PolynomialDoc>(r#"{"coeffs": [], "extra": 1}"#).is_err());
    }
}
