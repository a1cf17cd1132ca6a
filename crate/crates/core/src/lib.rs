//! Parallel quantum signal processing.
//!
//! Estimates `tr(P(rho))` for polynomial transforms `P` of a density matrix by
//! running several shallow QSP sequences on copies of `rho` in parallel and
//! joining them with a generalized swap test. All quantum primitives are
//! simulated classically, either exactly or with a seeded shot sampler.
//!
//! The polynomial layer is generic over [`Scalar`]; the simulator and estimators
//! work in `f64` / `Complex64`.

pub mod error;
pub mod estimate;
pub mod factor;
pub mod io;
pub mod poly;
pub mod qsp;
pub mod scalar;
pub mod sim;
pub mod validate;

pub use error::{Error, ErrorKind, Result};
pub use scalar::Scalar;

pub use num_complex::Complex64;

/// Complex-coefficient polynomial, the default working type.
pub type Poly = poly::Polynomial<Complex64>;
/// Real-coefficient polynomial.
pub type RealPoly = poly::Polynomial<f64>;
/// Single-precision real polynomial.
pub type RealPoly32 = poly::Polynomial<f32>;
/// Exact rational polynomial.
pub type ExactPoly = poly::Polynomial<num_rational::BigRational>;
/// Real Chebyshev series.
pub type RealSeries = poly::ChebyshevSeries<f64>;
