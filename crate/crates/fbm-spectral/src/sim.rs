//! Continuous-time path generation: white-noise spectral vectors, their image
//! under the kernel or the Cholesky factor, and evaluation of the truncated
//! series on a time grid.

use ndarray::Array1;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fbm::{FbmModel, HurstParams};
use crate::legendre::{self, BasisSpec};
use crate::spectral::SpectralVector;

/// Which factor maps the noise to path coefficients.
///
/// `Strong` is consistent with the driving Brownian realization; `Weak` is
/// correct in distribution only; `Liouville` drives the one-factor variant
/// kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Strong,
    Weak,
    Liouville,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Strong => "strong",
            Mode::Weak => "weak",
            Mode::Liouville => "liouville",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strong" => Ok(Mode::Strong),
            "weak" => Ok(Mode::Weak),
            "liouville" => Ok(Mode::Liouville),
            other => Err(Error::Domain(format!(
                "unknown mode {other:?}; expected strong, weak, or liouville"
            ))),
        }
    }
}

/// Realization of the white-noise spectral characteristic: `L` i.i.d.
/// standard normal coefficients, reproducible from `(seed, stream)`.
#[derive(Debug, Clone)]
pub struct NoiseVector {
    spec: BasisSpec,
    values: Array1<f64>,
    seed: u64,
}

impl NoiseVector {
    pub fn spec(&self) -> BasisSpec {
        self.spec
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn zero(spec: BasisSpec) -> Self {
        Self {
            values: Array1::zeros(spec.order()),
            spec,
            seed: 0,
        }
    }

    pub fn from_values(spec: BasisSpec, values: Array1<f64>) -> Result<Self> {
        if values.len() != spec.order() {
            return Err(Error::InvalidBasis(format!(
                "noise length {} does not match basis order {}",
                values.len(),
                spec.order()
            )));
        }
        Ok(Self {
            spec,
            values,
            seed: 0,
        })
    }
}

/// Draws the white-noise vector for one path. Distinct `stream` values give
/// statistically independent sequences from the same seed, so parallel and
/// serial path generation agree bit for bit.
pub fn draw_noise(spec: &BasisSpec, seed: u64, stream: u64) -> NoiseVector {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let values = Array1::from_iter(
        (0..spec.order()).map(|_| StandardNormal.sample(&mut rng)),
    );
    NoiseVector {
        spec: *spec,
        values,
        seed,
    }
}

/// Path coefficients: the selected factor applied to the noise.
pub fn spectral_path_coeffs(
    model: &FbmModel,
    noise: &NoiseVector,
    mode: Mode,
) -> Result<SpectralVector> {
    if model.spec() != noise.spec() {
        return Err(Error::BasisMismatch);
    }
    let factor = match mode {
        Mode::Strong | Mode::Liouville => model.kernel(),
        Mode::Weak => model.chol().ok_or(Error::MissingCholesky)?,
    };
    SpectralVector::new(model.spec(), factor.entries().dot(&noise.values))
}

/// Evaluates the truncated series on the grid, one basis recurrence sweep per
/// grid point.
pub fn render_path(coeffs: &SpectralVector, grid: &[f64]) -> Result<Vec<f64>> {
    let spec = coeffs.spec();
    let mut out = Vec::with_capacity(grid.len());
    for &t in grid {
        spec.check_time(t)?;
        let basis = legendre::eval_basis_unchecked(t, &spec);
        out.push(
            coeffs
                .coeffs()
                .iter()
                .zip(&basis)
                .map(|(c, b)| c * b)
                .sum(),
        );
    }
    Ok(out)
}

/// Sampled simulation result: shared time grid plus one value row per path.
///
/// Note the value at `t = 0` is not forced to zero: truncation leaves a small
/// random residual there.
#[derive(Debug, Clone)]
pub struct PathSample {
    pub grid: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub mode: Mode,
    pub seed: u64,
    pub hurst: f64,
}

fn validate_grid(grid: &[f64], spec: &BasisSpec) -> Result<()> {
    for &t in grid {
        spec.check_time(t)?;
    }
    for w in grid.windows(2) {
        // check_time has already rejected non-finite entries
        if w[1] <= w[0] {
            return Err(Error::Domain(format!(
                "grid must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Full simulation: assembles the model once, then generates `n_paths`
/// independent paths with per-path noise stream equal to the path index.
pub fn simulate(
    h: f64,
    horizon: f64,
    order: usize,
    grid: &[f64],
    n_paths: usize,
    seed: u64,
    mode: Mode,
) -> Result<PathSample> {
    let hurst = HurstParams::new(h)?;
    let spec = BasisSpec::new(horizon, order)?;
    validate_grid(grid, &spec)?;
    let model = match mode {
        Mode::Liouville => FbmModel::assemble_liouville(hurst, spec)?,
        Mode::Strong => FbmModel::assemble(hurst, spec)?,
        Mode::Weak => FbmModel::assemble(hurst, spec)?.with_cholesky()?,
    };
    let values = (0..n_paths)
        .into_par_iter()
        .map(|path| {
            let noise = draw_noise(&spec, seed, path as u64);
            let coeffs = spectral_path_coeffs(&model, &noise, mode)?;
            render_path(&coeffs, grid)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PathSample {
        grid: grid.to_vec(),
        values,
        mode,
        seed,
        hurst: h,
    })
}
