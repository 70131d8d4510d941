//! Laplacian symbols, heat semigroups, covariances, and frequency cutoffs.
//!
//! The nearest-neighbor Laplacian on the spacing-`ε` lattice acts on the
//! exponential `e^{iπk·x}` as multiplication by `-λ_k` with
//!
//! ```text
//! λ_k = |k|^2 f(εk),   f(x) = (4 / |x|^2) Σ_j sin^2(x_j π / 2),
//! ```
//!
//! equivalently `λ_k = (4/ε^2) Σ_j sin^2(ε k_j π / 2)`. The shape factor
//! `f` tends to `π^2` at the origin, so the lattice symbol at fixed `k`
//! converges to `π^2 |k|^2` as the resolution grows; the Galerkin variant
//! uses the plain symbol `|k|^2` instead. Both symbols are nonnegative and
//! vanish only at `k = 0`; the lattice one is `(2N+1)`-periodic in every
//! component and even, which the renormalization sums exploit.
//!
//! Heat semigroups multiply coefficients by `e^{-tλ_k}` with an optional
//! sharp or smooth frequency cutoff; stationary covariances are
//! `e^{-λ_k|t|} / (2λ_k)` inside the band.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::{LatticeField, SpectralField};
use crate::grid::{norm_inf, norm_sq, Freq, GridSpec};

const PI: f64 = std::f64::consts::PI;

/// Shape factor `f(x) = (4/|x|^2) Σ_j sin^2(x_j π / 2)`, `x ≠ 0`.
pub fn symbol_shape(x: [f64; 3]) -> Result<f64> {
    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    if r2 == 0.0 {
        return Err(Error::InvalidParameter(
            "symbol shape factor is undefined at x = 0".into(),
        ));
    }
    let s: f64 = x.iter().map(|&v| (v * PI / 2.0).sin().powi(2)).sum();
    Ok(4.0 * s / r2)
}

/// Which Laplacian symbol a component uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// Nearest-neighbor lattice symbol `|k|^2 f(εk)` at resolution `N`.
    Lattice,
    /// Spectral (Galerkin) symbol `|k|^2`.
    Galerkin,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Lattice => "lattice",
            Variant::Galerkin => "galerkin",
        }
    }
}

/// Symbol value `λ_k ≥ 0` for the given variant; `n` is the lattice
/// resolution (ignored by the Galerkin symbol).
#[inline]
pub fn lambda(variant: Variant, n: i64, k: Freq) -> f64 {
    match variant {
        Variant::Lattice => {
            let side = (2 * n + 1) as f64;
            let eps = 2.0 / side;
            // (4/ε^2) Σ sin^2(ε k_j π/2); periodic mod 2N+1 and even in k.
            let s: f64 = k
                .iter()
                .map(|&kj| (eps * kj as f64 * PI / 2.0).sin().powi(2))
                .sum();
            4.0 / (eps * eps) * s
        }
        Variant::Galerkin => norm_sq(k),
    }
}

/// Frequency cutoff applied together with a semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutoffKind {
    /// No cutoff.
    None,
    /// Sharp indicator of `{ |k|_∞ ≤ N }`.
    Sharp,
    /// Smooth radial profile in `εk`: identically 1 on `|εk| ≤ √3`
    /// (hence on the whole band cube), 0 for `|εk| ≥ 1.8`.
    Smooth,
}

/// Infinitely smooth monotone step: 1 for `u ≤ 0`, 0 for `u ≥ 1`.
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        1.0
    } else if u >= 1.0 {
        0.0
    } else {
        let b = |v: f64| (-1.0 / v).exp();
        b(1.0 - u) / (b(1.0 - u) + b(u))
    }
}

/// Smooth cutoff profile in the scaled radius `r = |εk|`.
pub fn smooth_cutoff_profile(r: f64) -> f64 {
    let r0 = 3.0f64.sqrt();
    let r1 = 1.8f64;
    smooth_step((r - r0) / (r1 - r0))
}

/// Symbol and cutoff parameters for semigroup application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolParams {
    pub n: i64,
    pub variant: Variant,
    pub cutoff: CutoffKind,
}

impl SymbolParams {
    pub fn new(n: i64, variant: Variant, cutoff: CutoffKind) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(format!(
                "symbol resolution must be >= 1, got {n}"
            )));
        }
        Ok(SymbolParams { n, variant, cutoff })
    }

    #[inline]
    pub fn lambda(&self, k: Freq) -> f64 {
        lambda(self.variant, self.n, k)
    }

    /// Cutoff weight at `k`.
    #[inline]
    pub fn cutoff_weight(&self, k: Freq) -> f64 {
        match self.cutoff {
            CutoffKind::None => 1.0,
            CutoffKind::Sharp => {
                if norm_inf(k) <= self.n {
                    1.0
                } else {
                    0.0
                }
            }
            CutoffKind::Smooth => {
                let eps = 2.0 / (2 * self.n + 1) as f64;
                smooth_cutoff_profile(eps * norm_sq(k).sqrt())
            }
        }
    }
}

/// Apply the heat semigroup: `c_k ← e^{-tλ_k} w(k) c_k`, `t ≥ 0`.
pub fn apply_semigroup(spec: &SpectralField, t: f64, params: &SymbolParams) -> Result<SpectralField> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "semigroup time must be >= 0, got {t}"
        )));
    }
    let mut out = spec.clone();
    out.apply_multiplier(|k| (-t * params.lambda(k)).exp() * params.cutoff_weight(k));
    Ok(out)
}

/// Stationary covariance of the linear flow at time lag `t`:
/// `e^{-λ_k |t|} / (2 λ_k)` for `0 < |k|_∞ ≤ n`, zero otherwise.
pub fn covariance(variant: Variant, n: i64, k: Freq, t: f64) -> f64 {
    if k == [0, 0, 0] || norm_inf(k) > n {
        return 0.0;
    }
    let lam = lambda(variant, n, k);
    (-lam * t.abs()).exp() / (2.0 * lam)
}

/// Nearest-neighbor Laplacian `ε^{-2} Σ_j (u(x+εe_j) - 2u(x) + u(x-εe_j))`
/// on the native lattice (periodic).
pub fn apply_laplacian_stencil(field: &LatticeField, grid: &GridSpec) -> Result<LatticeField> {
    let m = grid.side();
    if field.m() != m {
        return Err(Error::InvalidParameter(format!(
            "stencil needs the native {m}-point lattice, field has {}",
            field.m()
        )));
    }
    let inv_eps2 = 1.0 / (grid.eps() * grid.eps());
    let mut out = LatticeField::zero(m)?;
    let v = field.values();
    let up = |j: usize| if j + 1 == m { 0 } else { j + 1 };
    let dn = |j: usize| if j == 0 { m - 1 } else { j - 1 };
    {
        let o = out.values_mut();
        for j0 in 0..m {
            for j1 in 0..m {
                for j2 in 0..m {
                    let at = |a: usize, b: usize, c: usize| v[(a * m + b) * m + c];
                    let center = at(j0, j1, j2);
                    let sum = at(up(j0), j1, j2)
                        + at(dn(j0), j1, j2)
                        + at(j0, up(j1), j2)
                        + at(j0, dn(j1), j2)
                        + at(j0, j1, up(j2))
                        + at(j0, j1, dn(j2))
                        - 6.0 * center;
                    o[(j0 * m + j1) * m + j2] = inv_eps2 * sum;
                }
            }
        }
    }
    Ok(out)
}

/// Minimum of the shape factor over the punctured ball `0 < |x| ≤ 1.8`,
/// located by octant grid search plus pattern refinement. The minimizer
/// sits on the boundary sphere along a coordinate axis.
pub fn min_symbol_shape() -> f64 {
    static CF: OnceLock<f64> = OnceLock::new();
    *CF.get_or_init(|| {
        let radius = 1.8f64;
        let f = |x: [f64; 3]| symbol_shape(x).unwrap_or(PI * PI);
        // f is even in each coordinate: search the closed positive octant.
        let mut best = [radius, 0.0, 0.0];
        let mut best_v = f(best);
        let steps = 60;
        for i0 in 0..=steps {
            for i1 in 0..=steps {
                for i2 in 0..=steps {
                    let x = [
                        radius * i0 as f64 / steps as f64,
                        radius * i1 as f64 / steps as f64,
                        radius * i2 as f64 / steps as f64,
                    ];
                    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                    if r2 == 0.0 || r2 > radius * radius {
                        continue;
                    }
                    let v = f(x);
                    if v < best_v {
                        best_v = v;
                        best = x;
                    }
                }
            }
        }
        // Pattern search with shrinking step, clamped to the ball.
        let mut step = radius / steps as f64;
        while step > 1e-9 {
            let mut improved = false;
            for j in 0..3 {
                for s in [-1.0, 1.0] {
                    let mut x = best;
                    x[j] = (x[j] + s * step).max(0.0);
                    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                    if r == 0.0 {
                        continue;
                    }
                    if r > radius {
                        for c in &mut x {
                            *c *= radius / r;
                        }
                    }
                    let v = f(x);
                    if v < best_v {
                        best_v = v;
                        best = x;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        best_v
    })
}
