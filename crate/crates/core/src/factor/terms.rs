use crate::error::{Error, Result};
use crate::poly::{chebyshev_coefficient, ChebyshevSeries, ParityCheck, Polynomial};

/// Coefficient of `T_{2ak}(x) T_{2b}(x)` in the product expansion.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CTilde {
    pub a: usize,
    pub b: usize,
    pub value: f64,
}

/// `coefficient * T_a(x)^{2j} * T_b(x)^{2l}`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ParallelTerm {
    pub coefficient: f64,
    pub a: usize,
    pub b: usize,
    pub j: usize,
    pub l: usize,
}

impl ParallelTerm {
    pub fn eval(&self, x: f64) -> f64 {
        let ta = ChebyshevSeries::<f64>::basis(self.a).eval(&x);
        let tb = ChebyshevSeries::<f64>::basis(self.b).eval(&x);
        self.coefficient * ta.powi(2 * self.j as i32) * tb.powi(2 * self.l as i32)
    }

    /// One factor per thread whose squared moduli multiply to
    /// `T_a^{2j} T_b^{2l}`. Every factor has sup-norm one.
    pub fn factors(&self, k: usize) -> Vec<ChebyshevSeries<f64>> {
        let one = ChebyshevSeries::basis(0);
        let ta = ChebyshevSeries::basis(self.a);
        let tb = ChebyshevSeries::basis(self.b);
        let mut out = vec![one; k];
        if k == 0 {
            return out;
        }
        out[0] = match (self.j >= 1, self.l == 1) {
            (true, true) => product_of_basis(self.a, self.b),
            (false, true) => tb,
            (true, false) => ta.clone(),
            (false, false) => out[0].clone(),
        };
        for slot in out.iter_mut().take(self.j).skip(1) {
            *slot = ta.clone();
        }
        out
    }

    pub fn max_factor_degree(&self) -> usize {
        match (self.j >= 1, self.l == 1) {
            (true, true) => self.a + self.b,
            (false, true) => self.b,
            (true, false) => self.a,
            (false, false) => 0,
        }
    }
}

/// `T_a T_b = (T_{a+b} + T_{|a-b|}) / 2`.
fn product_of_basis(a: usize, b: usize) -> ChebyshevSeries<f64> {
    let mut c = vec![0.0; a + b + 1];
    c[a + b] += 0.5;
    c[a.abs_diff(b)] += 0.5;
    ChebyshevSeries::new(c)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ParallelTermList {
    pub k: usize,
    pub d: usize,
    pub ctilde: Vec<CTilde>,
    pub terms: Vec<ParallelTerm>,
    /// `sum |coefficient|` over the terms.
    pub one_norm: f64,
}

impl ParallelTermList {
    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    pub fn max_factor_degree(&self) -> usize {
        self.terms.iter().map(|t| t.max_factor_degree()).max().unwrap_or(0)
    }

    /// `sum_{a,b} ctilde T_{2ak} T_{2b}`.
    pub fn eval_ctilde(&self, x: f64) -> f64 {
        self.ctilde
            .iter()
            .map(|c| {
                let t1 = ChebyshevSeries::<f64>::basis(2 * c.a * self.k).eval(&x);
                let t2 = ChebyshevSeries::<f64>::basis(2 * c.b).eval(&x);
                c.value * t1 * t2
            })
            .sum()
    }
}

/// Decompose an even `p_high` of degree at most `d - k` into products of
/// squared Chebyshev polynomials with at most `floor((d-k)/2k) + k - 1` as the
/// largest factor degree.
pub fn chebyshev_parallel_terms(p_high: &Polynomial<f64>, k: usize, d: usize) -> Result<ParallelTermList> {
    chebyshev_parallel_terms_series(&p_high.to_chebyshev(), k, d)
}

pub fn chebyshev_parallel_terms_series(
    p_high: &ChebyshevSeries<f64>,
    k: usize,
    d: usize,
) -> Result<ParallelTermList> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if d < k {
        return Err(Error::NothingToParallelize { k, degree: d });
    }
    if (d - k) % 2 != 0 {
        return Err(Error::Parity(format!("k = {k} and d = {d} differ in parity")));
    }
    if p_high.degree() > d - k {
        return Err(Error::InvalidInput(format!(
            "constituent degree {} exceeds d - k = {}",
            p_high.degree(),
            d - k
        )));
    }
    let scale = p_high.coeffs().iter().map(|c| c.abs()).fold(0.0, f64::max).max(1.0);
    if p_high
        .coeffs()
        .iter()
        .skip(1)
        .step_by(2)
        .any(|c| c.abs() > 1e-12 * scale)
    {
        return Err(Error::Parity("the high constituent must be even".into()));
    }

    let big_a = (d - k) / (2 * k);
    let c = |a: usize, b: usize| p_high.coeff(2 * a * k + 2 * b);
    // Recursion from the top row down: ct[a][b].
    let mut ct = vec![vec![0.0; k]; big_a + 2];
    for a in (0..=big_a).rev() {
        for b in 0..k {
            ct[a][b] = if b == 0 {
                c(a, 0)
            } else if a >= 1 {
                2.0 * c(a, b) - ct[a + 1][k - b]
            } else {
                c(0, b) - 0.5 * ct[1][k - b]
            };
        }
    }

    let t2k: Vec<f64> = (0..=k)
        .map(|j| chebyshev_coefficient(2 * k, 2 * j, ParityCheck::Strict).expect("even index"))
        .collect();
    let t2 = [-1.0, 2.0];
    let mut ctilde = Vec::new();
    let mut terms = Vec::new();
    for (a, row) in ct.iter().enumerate().take(big_a + 1) {
        for (b, &v) in row.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            ctilde.push(CTilde { a, b, value: v });
            for (j, &tj) in t2k.iter().enumerate() {
                for (l, &tl) in t2.iter().enumerate() {
                    terms.push(ParallelTerm { coefficient: v * tj * tl, a, b, j, l });
                }
            }
        }
    }
    let one_norm = terms.iter().map(|t| t.coefficient.abs()).sum();
    Ok(ParallelTermList { k, d, ctilde, terms, one_norm })
}
