//! Exact per-mode Ornstein–Uhlenbeck evolution of the stochastic convolution.
//!
//! Under either dispersion variant the driven mode amplitudes a_k are
//! independent complex OU processes with rate λ_k and stationary variance
//! V₀(k) = 1/(2λ_k). Both the stationary draw and the one-step transition
//!
//! ```text
//! a_k(t+h) = e^{−λ_k h} a_k(t) + η_k,   η_k ~ CN(0, V₀(k)(1 − e^{−2λ_k h}))
//! ```
//!
//! are exact in law for any h, so step size never biases the noise. The
//! standard normals behind η_k come from the orbit-keyed streams of the rng
//! module; the evolver only contributes the deterministic scaling, which is
//! how two runs with different bands or symbols stay coupled pathwise.
//!
//! Amplitudes relate to field coefficients by c_k = 2^{−3/2} a_k, matching
//! the normalized exponential basis: E[u₁(x)²] = 2^{−3} Σ_k V₀(k).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::{neg, orbit_representatives, Freq};
use crate::symbols::{covariance, lambda, Variant};

use super::rng::{NoiseSource, StreamTag};

/// 2^{−3/2}, the amplitude-to-coefficient scale.
pub fn amplitude_scale() -> f64 {
    0.125f64.sqrt()
}

struct Orbit {
    k: Freq,
    lambda: f64,
    v0: f64,
}

/// Precomputed per-orbit data for one (band, variant) pair.
pub struct OuEvolver {
    n: i64,
    variant: Variant,
    orbits: Vec<Orbit>,
}

/// Decay and increment scales for one step size.
pub struct OuStep {
    h: f64,
    decay: Vec<f64>,
    sigma: Vec<f64>,
}

impl OuStep {
    pub fn h(&self) -> f64 {
        self.h
    }
}

/// One replica of the stochastic convolution: time, amplitudes, stream.
pub struct OuState {
    pub t: f64,
    pub amps: SpectralField,
    noise: NoiseSource,
}

impl OuEvolver {
    pub fn new(n: i64, variant: Variant) -> Result<Self> {
        let orbits = orbit_representatives(n)
            .into_iter()
            .map(|k| Orbit {
                k,
                lambda: lambda(variant, n, k),
                v0: covariance(variant, n, k, 0.0),
            })
            .collect();
        if n < 1 {
            return Err(Error::InvalidParameter(format!("band must be ≥ 1, got {n}")));
        }
        Ok(Self { n, variant, orbits })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Stationary variance of the amplitude at `k` (0 off band or at 0).
    pub fn stationary_variance(&self, k: Freq) -> f64 {
        covariance(self.variant, self.n, k, 0.0)
    }

    /// Fresh stationary replica: a_k = sqrt(V₀/2)(ξ₁ + iξ₂) per orbit.
    pub fn sample_stationary(&self, master: u64, replica: u64) -> Result<OuState> {
        let mut init = NoiseSource::new(self.n, master, replica, StreamTag::OuInit)?;
        let mut amps = SpectralField::zero(self.n)?;
        let scales: std::collections::HashMap<Freq, f64> = self
            .orbits
            .iter()
            .map(|o| (o.k, (o.v0 / 2.0).sqrt()))
            .collect();
        init.for_each_pair(|k, x, y| {
            let a = scales[&k] * Complex64::new(x, y);
            amps.set(k, a).expect("orbit inside band");
            amps.set(neg(k), a.conj()).expect("orbit inside band");
        });
        let noise = NoiseSource::new(self.n, master, replica, StreamTag::OuNoise)?;
        Ok(OuState { t: 0.0, amps, noise })
    }

    /// Decay factors e^{−λh} and per-component increment scales for step h.
    pub fn prepare_step(&self, h: f64) -> Result<OuStep> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidParameter(format!("step must be > 0, got {h}")));
        }
        let decay: Vec<f64> = self.orbits.iter().map(|o| (-(o.lambda * h)).exp()).collect();
        let sigma = self
            .orbits
            .iter()
            .zip(&decay)
            .map(|(o, d)| (o.v0 * (1.0 - d * d) / 2.0).sqrt())
            .collect();
        Ok(OuStep { h, decay, sigma })
    }

    /// Multiply every amplitude by its decay factor.
    pub fn apply_decay(&self, amps: &mut SpectralField, step: &OuStep) {
        for (o, &d) in self.orbits.iter().zip(&step.decay) {
            let a = amps.coeff(o.k);
            amps.set(o.k, d * a).expect("orbit inside band");
            amps.set(neg(o.k), d * a.conj()).expect("orbit inside band");
        }
    }

    /// Add `scale · η_k` into `target`, drawing one pair per orbit.
    ///
    /// With scale 1 the target accumulates amplitude increments; the
    /// dynamics pass 2^{−3/2} to add the same increments in coefficient
    /// units, which is what couples the field to its driving convolution.
    pub fn add_increment(
        &self,
        step: &OuStep,
        noise: &mut NoiseSource,
        target: &mut SpectralField,
        scale: f64,
    ) {
        debug_assert_eq!(noise.orbit_count(), self.orbits.len());
        let mut i = 0;
        noise.for_each_pair(|k, x, y| {
            debug_assert_eq!(k, self.orbits[i].k);
            let eta = scale * step.sigma[i] * Complex64::new(x, y);
            let cur = target.coeff(k);
            let cur_neg = target.coeff(neg(k));
            target.set(k, cur + eta).expect("orbit inside band");
            target.set(neg(k), cur_neg + eta.conj()).expect("orbit inside band");
            i += 1;
        });
    }

    /// Advance a replica by one exact transition step.
    pub fn advance(&self, state: &mut OuState, step: &OuStep) {
        self.apply_decay(&mut state.amps, step);
        let OuState { amps, noise, .. } = state;
        self.add_increment(step, noise, amps, 1.0);
        state.t += step.h;
    }

    /// Convenience single-step transition with a freshly prepared step.
    pub fn transition(&self, state: &mut OuState, h: f64) -> Result<()> {
        let step = self.prepare_step(h)?;
        self.advance(state, &step);
        Ok(())
    }

    /// Combine two consecutive fine increments into one coarse increment:
    /// η(2h) = e^{−λh} η₁ + η₂, exactly the doubled-step transition noise.
    pub fn coarsen_increment(
        &self,
        first: &SpectralField,
        second: &SpectralField,
        h: f64,
    ) -> Result<SpectralField> {
        if !(h > 0.0) {
            return Err(Error::InvalidParameter(format!("step must be > 0, got {h}")));
        }
        let mut out = first.clone();
        let (variant, n) = (self.variant, self.n);
        out.apply_multiplier(|k| (-(lambda(variant, n, k) * h)).exp());
        out.add_scaled(second, Complex64::new(1.0, 0.0))
    }
}

impl OuState {
    /// Field coefficients c_k = 2^{−3/2} a_k of the convolution.
    pub fn field_coefficients(&self) -> SpectralField {
        let mut f = self.amps.clone();
        f.scale(amplitude_scale());
        f
    }

    /// Borrow the replica's driving stream (shared with a coupled field).
    pub fn noise_mut(&mut self) -> &mut NoiseSource {
        &mut self.noise
    }
}
