//! Randomized invariant checks.

use fbm_spectral::fbm::{self, HurstParams};
use fbm_spectral::operators;
use fbm_spectral::sim;
use fbm_spectral::spectral::{self, SpectralVector};
use fbm_spectral::BasisSpec;
use ndarray::Array1;
use proptest::prelude::*;

/// Orders away from integers, where the generic stable formulas apply.
fn fractional_order() -> impl Strategy<Value = f64> {
    (0.05f64..2.95)
        .prop_filter("stay away from integer orders", |b| {
            (b - b.round()).abs() > 0.02
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn integration_parity_holds(beta in fractional_order(), horizon in 0.5f64..3.0) {
        let spec = BasisSpec::new(horizon, 16).unwrap();
        let p = operators::frac_int_left(beta, &spec).unwrap();
        let scale = p.max_abs().max(1.0);
        for i in 0..16 {
            for j in 0..16 {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                prop_assert!(
                    (p.entries()[[i, j]] - sign * p.entries()[[j, i]]).abs() < 1e-12 * scale
                );
            }
        }
    }

    #[test]
    fn covariance_is_self_similar(
        h in 0.05f64..0.95,
        a in 0.1f64..5.0,
        t in 0.0f64..2.0,
        tau in 0.0f64..2.0,
    ) {
        let hurst = HurstParams::new(h).unwrap();
        let scaled = fbm::covariance_eval(&hurst, a * t, a * tau).unwrap();
        let base = fbm::covariance_eval(&hurst, t, tau).unwrap();
        let expected = a.powf(2.0 * h) * base;
        prop_assert!((scaled - expected).abs() < 1e-12 * expected.abs().max(1.0));
    }

    #[test]
    fn rendering_is_linear(exponent in 0.0f64..3.0, k in -8i32..8) {
        let spec = BasisSpec::new(1.0, 12).unwrap();
        let coeffs = spectral::power_spectrum(exponent, &spec).unwrap();
        let factor = 2f64.powi(k);
        let scaled = SpectralVector::new(spec, coeffs.coeffs() * factor).unwrap();
        let grid = [0.0, 0.21, 0.5, 0.83, 1.0];
        let base = sim::render_path(&coeffs, &grid).unwrap();
        let multiple = sim::render_path(&scaled, &grid).unwrap();
        for (b, m) in base.iter().zip(&multiple) {
            // power-of-two scaling commutes exactly with every arithmetic step
            prop_assert_eq!(*m, factor * *b);
        }
    }

    #[test]
    fn polynomial_round_trip(c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0) {
        let spec = BasisSpec::new(1.3, 8).unwrap();
        let f = |t: f64| c0 + c1 * t + c2 * t * t;
        let coeffs = spectral::transform_function(f, &spec).unwrap();
        for &t in &[0.0, 0.4, 0.77, 1.3] {
            let back = coeffs.eval(t).unwrap();
            prop_assert!((back - f(t)).abs() < 1e-10, "t={} {} vs {}", t, back, f(t));
        }
    }

    #[test]
    fn integer_power_coefficients_have_finite_support(n in 0usize..10) {
        let spec = BasisSpec::new(1.0, 16).unwrap();
        let v = spectral::power_spectrum(n as f64, &spec).unwrap();
        for i in n + 1..16 {
            prop_assert_eq!(v.coeffs()[i], 0.0);
        }
        prop_assert!(v.coeffs()[n] != 0.0);
    }

    #[test]
    fn noise_image_is_deterministic(seed in 0u64..1000, stream in 0u64..64) {
        let spec = BasisSpec::new(1.0, 24).unwrap();
        let a = sim::draw_noise(&spec, seed, stream);
        let b = sim::draw_noise(&spec, seed, stream);
        prop_assert_eq!(a.values(), b.values());
    }

    #[test]
    fn kernel_gram_diagonal_is_nonnegative(h in 0.05f64..0.95) {
        let spec = BasisSpec::new(1.0, 8).unwrap();
        let hurst = HurstParams::new(h).unwrap();
        let k = fbm::assemble_kernel(&hurst, &spec).unwrap();
        let gram = k.matmul(&k.transpose()).unwrap();
        for i in 0..8 {
            prop_assert!(gram.entries()[[i, i]] >= 0.0);
        }
    }
}

#[test]
fn zero_coefficients_render_to_zero() {
    let spec = BasisSpec::new(1.0, 8).unwrap();
    let zero = SpectralVector::new(spec, Array1::zeros(8)).unwrap();
    let grid = [0.0, 0.5, 1.0];
    assert_eq!(sim::render_path(&zero, &grid).unwrap(), vec![0.0, 0.0, 0.0]);
}
