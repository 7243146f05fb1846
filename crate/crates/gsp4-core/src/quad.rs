//! Gauss–Legendre quadrature with dyadic refinement.
//!
//! All densities this crate integrates are smooth on rectangles in angle
//! coordinates, so tensor-product Gauss–Legendre converges spectrally; the
//! refinement loop doubles the per-axis node count until two successive
//! levels agree to the caller's tolerance, which both measures the integral
//! and certifies it. Node/weight tables are computed on demand by Newton
//! iteration on the Legendre recurrence and memoized per order.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::Error;
use crate::Result;

/// Node counts used by the refinement ladder, in order.
const LADDER: [usize; 6] = [16, 32, 64, 128, 256, 512];

/// Convergence stop for Newton iteration on a Legendre root.
const NEWTON_TOL: f64 = 1e-15;

/// Iteration cap for Newton's method; the cosine initial guess converges in
/// a handful of steps, so hitting this indicates a logic error.
const NEWTON_MAX_ITER: usize = 100;

/// Legendre polynomial value and derivative at `x` via the three-term
/// recurrence, for order `n`.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0_f64;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // Derivative from the standard identity (1-x²) P_n' = n (P_{n-1} - x P_n).
    let dp = n as f64 * (p0 - x * p1) / (1.0 - x * x);
    (p1, dp)
}

/// Gauss–Legendre nodes and weights on [-1, 1] for order `n`.
///
/// Nodes are the roots of P_n, found by Newton iteration from the Chebyshev
/// initial guess cos(π (i - 1/4)/(n + 1/2)); weights are 2 / ((1-x²) P_n'²).
/// Symmetric pairs are filled from one half to keep the table exactly
/// symmetric in floating point.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "quadrature order must be at least 2");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre_pair(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        assert!(converged, "Legendre root failed to converge (order {n})");
        let (_, dp) = legendre_pair(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // The initial guesses enumerate roots in decreasing order; store the
        // negative half ascending and mirror.
        nodes[i] = -x.abs();
        weights[i] = w;
        nodes[n - 1 - i] = x.abs();
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Quadrature nodes and matching weights on the reference interval.
type NodeWeights = (Vec<f64>, Vec<f64>);

/// Memoized node/weight table for order `n`, shared across the crate.
fn table(n: usize) -> NodeWeights {
    static TABLES: OnceLock<Mutex<HashMap<usize, NodeWeights>>> = OnceLock::new();
    let cache = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature table lock poisoned");
    guard.entry(n).or_insert_with(|| gauss_legendre(n)).clone()
}

/// Fixed-order Gauss–Legendre integral of `f` over `[a, b]`.
pub fn integrate_1d<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = table(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        sum += w * f(mid + half * x);
    }
    half * sum
}

/// Fixed-order tensor Gauss–Legendre integral of `f` over the rectangle
/// `[a1, b1] × [a2, b2]`, with `n` nodes per axis.
pub fn integrate_2d<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    (a1, b1): (f64, f64),
    (a2, b2): (f64, f64),
    n: usize,
) -> f64 {
    let (nodes, weights) = table(n);
    let half1 = 0.5 * (b1 - a1);
    let mid1 = 0.5 * (a1 + b1);
    let half2 = 0.5 * (b2 - a2);
    let mid2 = 0.5 * (a2 + b2);
    let mut sum = 0.0;
    for (x1, w1) in nodes.iter().zip(weights.iter()) {
        let u = mid1 + half1 * x1;
        let mut inner = 0.0;
        for (x2, w2) in nodes.iter().zip(weights.iter()) {
            inner += w2 * f(u, mid2 + half2 * x2);
        }
        sum += w1 * inner;
    }
    half1 * half2 * sum
}

/// Adaptive 2-D integral: climbs the dyadic order ladder until two successive
/// levels agree to `tol` (absolute, relative for large values), returning the
/// finer value.
///
/// Errors with [`Error::QuadratureNonConvergence`] if the ladder is exhausted
/// without agreement.
pub fn integrate_2d_adaptive<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    xr: (f64, f64),
    yr: (f64, f64),
    tol: f64,
) -> Result<f64> {
    let mut prev = integrate_2d(&mut f, xr, yr, LADDER[0]);
    for &n in &LADDER[1..] {
        let cur = integrate_2d(&mut f, xr, yr, n);
        if (cur - prev).abs() <= tol * 1.0_f64.max(cur.abs()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNonConvergence(format!(
        "no agreement to {tol:.1e} at {} nodes/axis over [{},{}]x[{},{}]",
        LADDER[LADDER.len() - 1],
        xr.0,
        xr.1,
        yr.0,
        yr.1
    )))
}

/// Adaptive 2-D integral with a *relative* stopping rule:
/// |Iₙ - Iₙ/₂| ≤ tol · |Iₙ|.
///
/// Use this for strictly positive integrands whose magnitude is far from 1
/// (normalization masses scale like p⁻⁴ and underflow an absolute rule).
pub fn integrate_2d_adaptive_rel<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    xr: (f64, f64),
    yr: (f64, f64),
    rel_tol: f64,
) -> Result<f64> {
    let mut prev = integrate_2d(&mut f, xr, yr, LADDER[0]);
    for &n in &LADDER[1..] {
        let cur = integrate_2d(&mut f, xr, yr, n);
        if (cur - prev).abs() <= rel_tol * cur.abs().max(f64::MIN_POSITIVE) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNonConvergence(format!(
        "no relative agreement to {rel_tol:.1e} at {} nodes/axis",
        LADDER[LADDER.len() - 1]
    )))
}

/// Adaptive 1-D integral on the same ladder and stopping rule as
/// [`integrate_2d_adaptive`].
pub fn integrate_1d_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    let mut prev = integrate_1d(&mut f, a, b, LADDER[0]);
    for &n in &LADDER[1..] {
        let cur = integrate_1d(&mut f, a, b, n);
        if (cur - prev).abs() <= tol * 1.0_f64.max(cur.abs()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNonConvergence(format!(
        "no agreement to {tol:.1e} at {} nodes over [{a},{b}]",
        LADDER[LADDER.len() - 1]
    )))
}
