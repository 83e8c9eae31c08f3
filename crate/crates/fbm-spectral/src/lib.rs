//! Spectral representation and continuous-time simulation of fractional
//! Brownian motion over the shifted Legendre basis on `[0, T]`.
//!
//! Functions and linear operators are represented by their expansion
//! coefficients over the orthonormal basis of shifted normalized Legendre
//! polynomials ("spectral characteristics"). The kernel operator mapping
//! Gaussian white noise to fBm is assembled as a product of spectral
//! characteristics of power-function multipliers and Riemann-Liouville
//! fractional integration operators. Sample paths are rendered in continuous
//! time, and the covariance approximation error of the truncated
//! representation is computed exactly.

pub mod accuracy;
pub mod error;
pub mod fbm;
pub mod legendre;
pub mod operators;
pub mod quad;
pub mod sim;
pub mod spectral;

pub use error::{Error, Result};
pub use legendre::BasisSpec;
pub use spectral::{SpectralMatrix, SpectralVector};
