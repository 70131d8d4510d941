//! Gauss–Legendre quadrature nodes.
//!
//! The renormalization integrals are smooth after an exponential
//! substitution, so fixed-order Gauss–Legendre rules with doubling
//! refinement converge fast. Nodes are computed by Newton iteration on the
//! Legendre recurrence; rules are cached per order.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Legendre polynomial value and derivative at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and weights of the `n`-point rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Standard asymptotic initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * d * d);
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

/// Cached `n`-point rule mapped to `[0, 1]`.
pub fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    let (nodes, weights) = map
        .entry(n)
        .or_insert_with(|| {
            let (x, w) = gauss_legendre(n);
            (
                x.iter().map(|v| 0.5 * (v + 1.0)).collect(),
                w.iter().map(|v| 0.5 * v).collect(),
            )
        })
        .clone();
    (nodes, weights)
}
