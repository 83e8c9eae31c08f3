//! Spectral characteristics: coefficient vectors of functions and
//! coefficient matrices of two-variable functions / linear operators over
//! the truncated Legendre basis, plus the characteristics of power
//! functions `t^α`.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::legendre::{self, BasisSpec};
use crate::quad;

/// Truncated spectral characteristic of a function: the first `L` expansion
/// coefficients over the basis of `spec`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector {
    spec: BasisSpec,
    coeffs: Array1<f64>,
}

impl SpectralVector {
    pub fn new(spec: BasisSpec, coeffs: Array1<f64>) -> Result<Self> {
        if coeffs.len() != spec.order() {
            return Err(Error::InvalidBasis(format!(
                "coefficient length {} does not match basis order {}",
                coeffs.len(),
                spec.order()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("spectral vector coefficient".into()));
        }
        Ok(Self { spec, coeffs })
    }

    pub fn zeros(spec: BasisSpec) -> Self {
        Self {
            coeffs: Array1::zeros(spec.order()),
            spec,
        }
    }

    /// The `j`-th column of the identity matrix, `E_{*j}`.
    pub fn unit(spec: BasisSpec, j: usize) -> Result<Self> {
        if j >= spec.order() {
            return Err(Error::Domain(format!(
                "unit index {j} outside 0..{}",
                spec.order()
            )));
        }
        let mut coeffs = Array1::zeros(spec.order());
        coeffs[j] = 1.0;
        Ok(Self { spec, coeffs })
    }

    pub fn spec(&self) -> BasisSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &Array1<f64> {
        &self.coeffs
    }

    /// Spectral inversion at `t`: `Σ_i coeffs[i]·P̂(i, t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.spec.check_time(t)?;
        let basis = legendre::eval_basis_unchecked(t, &self.spec);
        Ok(self
            .coeffs
            .iter()
            .zip(&basis)
            .map(|(c, b)| c * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

/// Truncated spectral characteristic of a linear operator or of a function
/// of two variables: an `L×L` coefficient matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMatrix {
    spec: BasisSpec,
    entries: Array2<f64>,
}

impl SpectralMatrix {
    pub fn new(spec: BasisSpec, entries: Array2<f64>) -> Result<Self> {
        let order = spec.order();
        if entries.nrows() != order || entries.ncols() != order {
            return Err(Error::InvalidBasis(format!(
                "matrix shape {}x{} does not match basis order {order}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("spectral matrix entry".into()));
        }
        Ok(Self { spec, entries })
    }

    pub fn identity(spec: BasisSpec) -> Self {
        Self {
            entries: Array2::eye(spec.order()),
            spec,
        }
    }

    pub fn spec(&self) -> BasisSpec {
        self.spec
    }

    pub fn entries(&self) -> &Array2<f64> {
        &self.entries
    }

    /// Two-variable spectral inversion: `Σ_ij entries[i][j]·P̂(i,t)·P̂(j,τ)`.
    pub fn eval(&self, t: f64, tau: f64) -> Result<f64> {
        self.spec.check_time(t)?;
        self.spec.check_time(tau)?;
        let left = legendre::eval_basis_unchecked(t, &self.spec);
        let right = legendre::eval_basis_unchecked(tau, &self.spec);
        let mut acc = 0.0;
        for (i, row) in self.entries.rows().into_iter().enumerate() {
            let mut row_acc = 0.0;
            for (j, v) in row.iter().enumerate() {
                row_acc += v * right[j];
            }
            acc += left[i] * row_acc;
        }
        Ok(acc)
    }

    pub fn transpose(&self) -> Self {
        Self {
            spec: self.spec,
            entries: self.entries.t().to_owned(),
        }
    }

    pub fn matmul(&self, rhs: &SpectralMatrix) -> Result<SpectralMatrix> {
        if self.spec != rhs.spec {
            return Err(Error::BasisMismatch);
        }
        Ok(SpectralMatrix {
            spec: self.spec,
            entries: self.entries.dot(&rhs.entries),
        })
    }

    pub fn apply(&self, v: &SpectralVector) -> Result<SpectralVector> {
        if self.spec != v.spec {
            return Err(Error::BasisMismatch);
        }
        Ok(SpectralVector {
            spec: self.spec,
            coeffs: self.entries.dot(&v.coeffs),
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            spec: self.spec,
            entries: &self.entries * factor,
        }
    }

    /// Square root of the sum of squared entries (the Parseval-compatible
    /// matrix norm).
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Expansion coefficients of `f` by Gauss-Legendre quadrature with `4L`
/// nodes. Oracle-grade: exact for polynomial `f` of degree `< 8L − L`, and
/// adequate for `t^α` with `α > −1/2`; production paths use closed forms.
pub fn transform_function<F>(f: F, spec: &BasisSpec) -> Result<SpectralVector>
where
    F: Fn(f64) -> f64,
{
    let order = spec.order();
    let (nodes, weights) = quad::gauss_legendre_on(4 * order, 0.0, spec.horizon());
    let mut coeffs = Array1::zeros(order);
    for (t, w) in nodes.iter().zip(&weights) {
        let ft = f(*t);
        if !ft.is_finite() {
            return Err(Error::NonFinite(format!("f({t}) is not finite")));
        }
        let basis = legendre::eval_basis_unchecked(*t, spec);
        for i in 0..order {
            coeffs[i] += w * ft * basis[i];
        }
    }
    SpectralVector::new(*spec, coeffs)
}

/// Raw power-function coefficients `F_i^α`, `i = 0..n`, by the multiplicative
/// recurrence `F_{i+1} = sqrt((2i+3)/(2i+1))·(α−i)/(α+i+2)·F_i` with
/// `F_0 = T^α √T / (α+1)`.
pub(crate) fn power_coeffs(alpha: f64, horizon: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut value = horizon.powf(alpha) * horizon.sqrt() / (alpha + 1.0);
    out.push(value);
    for i in 0..n.saturating_sub(1) {
        let fi = i as f64;
        value *= ((2.0 * fi + 3.0) / (2.0 * fi + 1.0)).sqrt() * (alpha - fi) / (alpha + fi + 2.0);
        out.push(value);
    }
    out
}

fn check_power_exponent(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= -0.5 {
        return Err(Error::Domain(format!(
            "power exponent must satisfy alpha > -1/2, got {alpha}"
        )));
    }
    Ok(())
}

/// Spectral characteristic `F^α` of `t^α`, `α > −1/2`.
///
/// For non-negative integer `α = n` the recurrence yields exact zeros for
/// indices above `n` (the monomial is a finite Legendre combination).
pub fn power_spectrum(alpha: f64, spec: &BasisSpec) -> Result<SpectralVector> {
    check_power_exponent(alpha)?;
    let coeffs = power_coeffs(alpha, spec.horizon(), spec.order());
    SpectralVector::new(*spec, Array1::from(coeffs))
}

/// Entrywise exponent shift `F^α → F^{α+k}` by
/// `F_i^{α+k} = T^k [(α+1)^{k̄}]² / ((α−i+1)^{k̄} (α+i+2)^{k̄}) · F_i^α`,
/// where `x^{k̄}` is the rising factorial.
///
/// Signals [`Error::ShiftDenominatorZero`] when a rising-factorial factor
/// vanishes (integer `α` with `i > α`); route those through
/// [`power_spectrum`] instead.
pub fn shift_power_spectrum(v: &SpectralVector, alpha: f64, k: u32) -> Result<SpectralVector> {
    check_power_exponent(alpha)?;
    if k == 0 {
        return Ok(v.clone());
    }
    let spec = v.spec();
    let horizon_pow = spec.horizon().powi(k as i32);
    let mut numerator = 1.0;
    for m in 0..k {
        let f = alpha + 1.0 + m as f64;
        numerator *= f * f;
    }
    let mut coeffs = Array1::zeros(spec.order());
    for i in 0..spec.order() {
        let fi = i as f64;
        let mut denominator = 1.0;
        for m in 0..k {
            let d1 = alpha - fi + 1.0 + m as f64;
            let d2 = alpha + fi + 2.0 + m as f64;
            if d1 == 0.0 || d2 == 0.0 {
                return Err(Error::ShiftDenominatorZero);
            }
            denominator *= d1 * d2;
        }
        coeffs[i] = horizon_pow * numerator / denominator * v.coeffs()[i];
    }
    SpectralVector::new(spec, coeffs)
}
