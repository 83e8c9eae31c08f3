//! Shifted normalized Legendre polynomials on `[0, T]`.
//!
//! The basis functions are `P̂(i, t) = sqrt((2i+1)/T) · P_i(2t/T − 1)`, which
//! form a complete orthonormal system in `L2[0, T]`. Evaluation always goes
//! through the three-term recurrence in `x = 2t/T − 1`; the monomial
//! expansion loses all significant digits near degree 25 and is only exposed
//! through the stable running-product coefficients.

use crate::error::{Error, Result};

/// Orders above this are outside the range for which the stable operator
/// formulas have been validated; construction warns but does not fail.
pub const STABLE_ORDER_LIMIT: usize = 256;

/// Truncated Legendre basis on `[0, T]`: horizon `T > 0` and the number of
/// retained basis functions `L >= 1` (degrees `0..L-1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    horizon: f64,
    order: usize,
}

impl BasisSpec {
    pub fn new(horizon: f64, order: usize) -> Result<Self> {
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::InvalidBasis(format!(
                "horizon must be a positive finite real, got {horizon}"
            )));
        }
        if order == 0 {
            return Err(Error::InvalidBasis("order must be at least 1".into()));
        }
        if order > STABLE_ORDER_LIMIT {
            log::warn!(
                "basis order {order} exceeds the validated range of {STABLE_ORDER_LIMIT}; \
                 accuracy is unexplored beyond it"
            );
        }
        Ok(Self { horizon, order })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub(crate) fn check_time(&self, t: f64) -> Result<()> {
        if !t.is_finite() || t < 0.0 || t > self.horizon {
            return Err(Error::Domain(format!(
                "time {t} outside [0, {}]",
                self.horizon
            )));
        }
        Ok(())
    }
}

/// One coefficient `l_ik` of the monomial expansion
/// `P_i(2u − 1) = Σ_k l_ik u^k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreCoeff {
    pub degree: usize,
    pub power: usize,
    pub value: f64,
}

/// Values of the first `n` standardized Legendre polynomials at `x` in
/// `[-1, 1]` by the three-term recurrence.
pub(crate) fn standard_values(x: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut prev = 1.0;
    out.push(prev);
    if n == 1 {
        return out;
    }
    let mut curr = x;
    out.push(curr);
    for k in 1..n - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * curr - kf * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
        out.push(curr);
    }
    out
}

/// `P̂(i, t)` for a single degree `i`.
pub fn eval_poly(i: usize, t: f64, spec: &BasisSpec) -> Result<f64> {
    spec.check_time(t)?;
    let x = 2.0 * t / spec.horizon() - 1.0;
    let p = standard_values(x, i + 1)[i];
    Ok(((2 * i + 1) as f64 / spec.horizon()).sqrt() * p)
}

/// All `L` basis values `[P̂(0, t), ..., P̂(L-1, t)]` in one recurrence sweep.
pub fn eval_basis(t: f64, spec: &BasisSpec) -> Result<Vec<f64>> {
    spec.check_time(t)?;
    Ok(eval_basis_unchecked(t, spec))
}

pub(crate) fn eval_basis_unchecked(t: f64, spec: &BasisSpec) -> Vec<f64> {
    let x = 2.0 * t / spec.horizon() - 1.0;
    let mut values = standard_values(x, spec.order());
    for (i, v) in values.iter_mut().enumerate() {
        *v *= ((2 * i + 1) as f64 / spec.horizon()).sqrt();
    }
    values
}

/// Monomial coefficients `l_ik`, `k = 0..i`, via the running product
/// `l_ik = (−1)^{i−k} ∏_{m=1..k} (i−m+1)(i+m)/m²`.
///
/// Factorial-ratio evaluation of the same coefficients overflows and
/// cancels catastrophically for large `i`; the running product does not.
pub fn coeff_products(i: usize) -> Vec<LegendreCoeff> {
    let mut out = Vec::with_capacity(i + 1);
    let mut magnitude = 1.0;
    let sign0 = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
    out.push(LegendreCoeff {
        degree: i,
        power: 0,
        value: sign0,
    });
    for k in 1..=i {
        let m = k as f64;
        magnitude *= (i as f64 - m + 1.0) * (i as f64 + m) / (m * m);
        let sign = if (i - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        out.push(LegendreCoeff {
            degree: i,
            power: k,
            value: sign * magnitude,
        });
    }
    out
}
