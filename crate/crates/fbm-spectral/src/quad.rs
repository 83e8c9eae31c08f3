//! Gauss-Legendre quadrature nodes and weights.
//!
//! Used by the function transform and by test oracles; the production
//! operator builders never integrate numerically.

use crate::legendre::standard_values;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Nodes are the roots of `P_n`, found by Newton iteration from the
/// Chebyshev-like initial guess; exact for polynomials of degree `< 2n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let values = standard_values(x, n + 1);
            let p = values[n];
            let slope = nf * (x * values[n] - values[n - 1]) / (x * x - 1.0);
            let dx = p / slope;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // one clean-up evaluation at the converged node
        let values = standard_values(x, n + 1);
        let dp = nf * (x * values[n] - values[n - 1]) / (x * x - 1.0);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// The `n`-point rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (mut nodes, mut weights) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    for x in nodes.iter_mut() {
        *x = mid + half * *x;
    }
    for w in weights.iter_mut() {
        *w *= half;
    }
    (nodes, weights)
}

/// `n×n`-node quadrature of a two-variable function over `[0, T]²` for
/// integrands with a kink on the diagonal (like the covariance function).
///
/// The square is split into the triangles `τ < t` and `τ > t`; on each, the
/// inner coordinate is parametrized as `τ = t·sin²(πu/2)`, which grades the
/// nodes into both corners and restores fast convergence despite the kink
/// and any algebraic endpoint singularity.
pub fn diagonal_split_quad<F>(f: F, n: usize, horizon: f64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let (t_nodes, t_weights) = gauss_legendre_on(n, 0.0, horizon);
    let (u_nodes, u_weights) = gauss_legendre_on(n, 0.0, 1.0);
    let pi = std::f64::consts::PI;
    let mut acc = 0.0;
    for (t, wt) in t_nodes.iter().zip(&t_weights) {
        for (u, wu) in u_nodes.iter().zip(&u_weights) {
            let sine = (pi * u / 2.0).sin();
            let tau = t * sine * sine;
            let jac = t * pi * sine * (pi * u / 2.0).cos();
            acc += wt * wu * jac * (f(*t, tau) + f(tau, *t));
        }
    }
    acc
}
