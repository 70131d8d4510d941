//! Duhamel integration of the driver objects built over the convolution.
//!
//! The second-order objects are mild solutions driven by Wick powers of the
//! convolution path:
//!
//! ```text
//! u₂(t) = −∫₀^t P_{t−s} Q[(u₁)^{⋄3}](s) ds,
//! K(t)  =  ∫₀^t P_{t−s} (u₁)^{⋄2}(s) ds,
//! ```
//!
//! integrated with an exponential rule: exact semigroup factors, forcing
//! sampled at the left step endpoint, and a half-step semigroup weight
//! (midpoint in the exponential). The linear part is stiff, so exact
//! exponentials leave the step size limited by the forcing alone; the rule
//! is first order in dt, which the step-halving tests measure.
//!
//! The lattice variant forms the Wick cube on the native lattice (products
//! alias there, which IS the lattice nonlinearity) while the spectral
//! variant forms it on a dealiased grid and truncates.

use num_complex::Complex64;

use crate::cube::{mean_of_product, spectral_cube_truncated};
use crate::error::{Error, Result};
use crate::fft::{dft_forward, dft_inverse};
use crate::field::SpectralField;
use crate::grid::{CubeIndexer, GridSpec};
use crate::para::{paraproduct, DyadicPartition, ParaKind};
use crate::symbols::{lambda, Variant};

use super::ou::OuEvolver;
use super::renorm::{compute_c0, Correctors, RenormConstants};
use super::wick::{wick_power, WickOrder};

/// Equally spaced spectral snapshots: `fields[i]` is the state at `i·dt`.
#[derive(Debug, Clone)]
pub struct SpectralPath {
    dt: f64,
    fields: Vec<SpectralField>,
}

impl SpectralPath {
    pub fn new(dt: f64, fields: Vec<SpectralField>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("path step must be > 0, got {dt}")));
        }
        let Some(first) = fields.first() else {
            return Err(Error::InvalidParameter("path must hold at least one snapshot".into()));
        };
        let band = first.band();
        if fields.iter().any(|f| f.band() != band) {
            return Err(Error::InvalidData("path snapshots have mixed bands".into()));
        }
        Ok(Self { dt, fields })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn band(&self) -> i64 {
        self.fields[0].band()
    }

    /// Number of snapshots (steps + 1).
    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn field(&self, i: usize) -> &SpectralField {
        &self.fields[i]
    }

    pub fn fields(&self) -> &[SpectralField] {
        &self.fields
    }

    /// Keep every `factor`-th snapshot: the same path at step `factor·dt`.
    pub fn subsample(&self, factor: usize) -> Result<SpectralPath> {
        if factor == 0 || (self.fields.len() - 1) % factor != 0 {
            return Err(Error::InvalidParameter(format!(
                "subsample factor {factor} does not divide {} steps",
                self.fields.len() - 1
            )));
        }
        let fields = self.fields.iter().step_by(factor).cloned().collect();
        SpectralPath::new(self.dt * factor as f64, fields)
    }
}

/// Evolve a stationary replica and record coefficient snapshots on [0, T],
/// T = steps·dt.
pub fn ou_coefficient_path(
    ev: &OuEvolver,
    master: u64,
    replica: u64,
    steps: usize,
    dt: f64,
) -> Result<SpectralPath> {
    let step = ev.prepare_step(dt)?;
    let mut state = ev.sample_stationary(master, replica)?;
    let mut fields = Vec::with_capacity(steps + 1);
    fields.push(state.field_coefficients());
    for _ in 0..steps {
        ev.advance(&mut state, &step);
        fields.push(state.field_coefficients());
    }
    SpectralPath::new(dt, fields)
}

/// A spectral path with the spatial mean of each snapshot carried along.
///
/// Spectral fields hold no zero mode, so pathwise products (Wick squares in
/// particular) would silently lose their fluctuating constant part; paths
/// that feed the resonant diagnostics keep it here.
pub struct MeanTrackedPath {
    pub fields: SpectralPath,
    /// `means[i]` is the spatial mean of the full field at `i·dt`.
    pub means: Vec<f64>,
}

/// Dealiased Wick-square path of a coefficient path: each snapshot is the
/// exact spectral square cut back to the input band, and the zero mode
/// `Σ_k |û(k)|² − c0` rides in the mean channel.
pub fn wick_square_path(u1: &SpectralPath, c0: f64) -> Result<MeanTrackedPath> {
    let n = u1.band();
    let mut fields = Vec::with_capacity(u1.len());
    let mut means = Vec::with_capacity(u1.len());
    for u in u1.fields() {
        fields.push(crate::cube::spectral_product(u, u)?.truncate_band(n)?);
        means.push(mean_of_product(u, u) - c0);
    }
    Ok(MeanTrackedPath { fields: SpectralPath::new(u1.dt(), fields)?, means })
}

/// Per-mode decay factors for a full and a half step.
fn decay_tables(n: i64, variant: Variant, dt: f64) -> Vec<(f64, f64)> {
    let idx = CubeIndexer::new(n);
    (0..idx.len())
        .map(|s| {
            let l = lambda(variant, n, idx.freq(s));
            ((-(l * dt)).exp(), (-(l * dt * 0.5)).exp())
        })
        .collect()
}

/// Wick cube of one snapshot, transformed back to the band.
fn wick_cube_hat(u1: &SpectralField, variant: Variant, n: i64, c0: f64) -> Result<SpectralField> {
    match variant {
        Variant::Lattice => {
            let grid = GridSpec::new(n)?;
            let vals = dft_inverse(u1, &grid)?;
            dft_forward(&wick_power(&vals, WickOrder::Cube, c0), &grid)
        }
        Variant::Galerkin => {
            let cube = spectral_cube_truncated(u1, n)?;
            cube.add_scaled(u1, Complex64::new(-3.0 * c0, 0.0))
        }
    }
}

/// Duhamel trajectory of u₂ over the whole input path.
///
/// The tadpole constant of the matching variant is computed internally.
pub fn compute_u2(path: &SpectralPath, variant: Variant) -> Result<SpectralPath> {
    let n = path.band();
    let c0 = compute_c0(n, variant)?;
    let dt = path.dt();
    let decay = decay_tables(n, variant, dt);
    let mut state = SpectralField::zero(n)?;
    let mut fields = Vec::with_capacity(path.len());
    fields.push(state.clone());
    for m in 0..path.len() - 1 {
        let f_hat = wick_cube_hat(path.field(m), variant, n, c0)?;
        let coeffs = state.coeffs_mut();
        for (i, &(full, half)) in decay.iter().enumerate() {
            coeffs[i] = full * coeffs[i] - dt * half * f_hat.coeffs()[i];
        }
        fields.push(state.clone());
    }
    SpectralPath::new(dt, fields)
}

/// Duhamel value K(t) of a given forcing path (already Wick-renormalized).
pub fn compute_k(path: &SpectralPath, t: f64, variant: Variant) -> Result<SpectralField> {
    let n = path.band();
    let dt = path.dt();
    let steps_f = t / dt;
    let steps = steps_f.round() as i64;
    if t < 0.0 || (steps_f - steps as f64).abs() > 1e-9 * steps_f.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "time {t} is not a multiple of the path step {dt}"
        )));
    }
    let steps = steps as usize;
    if steps >= path.len() {
        return Err(Error::InvalidParameter(format!(
            "time {t} needs {steps} steps but the path holds {}",
            path.len() - 1
        )));
    }
    let decay = decay_tables(n, variant, dt);
    let mut state = SpectralField::zero(n)?;
    for m in 0..steps {
        let w = path.field(m);
        let coeffs = state.coeffs_mut();
        for (i, &(full, half)) in decay.iter().enumerate() {
            coeffs[i] = full * coeffs[i] + dt * half * w.coeffs()[i];
        }
    }
    Ok(state)
}

/// Duhamel value of the zero mode: the heat symbol vanishes at k = 0, so
/// the mean channel integrates the forcing means with unit decay factors.
pub fn compute_k_mean(means: &[f64], t: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("path step must be > 0, got {dt}")));
    }
    let steps_f = t / dt;
    let steps = steps_f.round() as i64;
    if t < 0.0 || (steps_f - steps as f64).abs() > 1e-9 * steps_f.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "time {t} is not a multiple of the path step {dt}"
        )));
    }
    let steps = steps as usize;
    if steps >= means.len() {
        return Err(Error::InvalidParameter(format!(
            "time {t} needs {steps} steps but the path holds {}",
            means.len().saturating_sub(1)
        )));
    }
    Ok(dt * means[..steps].iter().sum::<f64>())
}

/// A resonant product with its renormalized spatial mean kept separately.
///
/// Spectral fields carry no zero mode by convention, so the constant part
/// of π₀(K, (u₁)^{⋄2}) − C₁₁ − φ₁(t) travels alongside the fluctuation.
#[derive(Debug)]
pub struct RenormalizedResonant {
    /// Spatial mean after subtracting C₁₁ + φ₁(t); zero in expectation.
    pub mean: f64,
    /// Mean-free part of the resonant paraproduct.
    pub fluctuation: SpectralField,
}

/// π₀(K, wick2) with the zeroth-chaos constant C₁₁ + φ₁(t) removed.
///
/// `k_mean` and `wick2_mean` are the zero modes of the two inputs (tracked
/// outside the fields); their product belongs to the resonant part, because
/// a constant has energy only in the lowest block while mean-free fields at
/// integer frequencies have none below block 1 — so the cross terms vanish
/// and the constant-constant term is the only addition.
pub fn resonant_renormalized(
    k_field: &SpectralField,
    k_mean: f64,
    wick2: &SpectralField,
    wick2_mean: f64,
    t: f64,
    consts: &RenormConstants,
    corr: &Correctors,
    part: &DyadicPartition,
) -> Result<RenormalizedResonant> {
    if (corr.t - t).abs() > 1e-12 * t.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "correctors evaluated at {} but product requested at {t}",
            corr.t
        )));
    }
    let mean =
        mean_of_product(k_field, wick2) + k_mean * wick2_mean - (consts.c11 + corr.phi1);
    let fluctuation = paraproduct(k_field, wick2, ParaKind::Resonant, part)?;
    Ok(RenormalizedResonant { mean, fluctuation })
}
