//! Coupled integration of the renormalized lattice dynamics against a
//! wide-band dealiased reference on a shared noise stream.
//!
//! All integrators consume the same per-step unit-Gaussian draws, one pair
//! per canonical frequency orbit at the reference noise band. Each
//! integrator scales the draws by its own per-mode stochastic-convolution
//! sigma and ignores draws outside its band, so shared modes receive
//! perfectly correlated increments and integrators of equal variant and
//! band receive bitwise identical ones. Because the per-orbit streams are
//! keyed by the orbit alone, runs at different bands under the same master
//! seed and replica also share draws on their common modes.
//!
//! The reference evolves on a working band three times its noise band, which
//! holds the dealiased cube's image exactly; the energy fraction in the top
//! third of that working band is monitored as the truncation diagnostic.
//! Error curves e(t) = ‖phi_N(t) − phi_ref(t)‖_{−z} are evaluated on the
//! reference band at checkpoint times. Each lattice trajectory is paired
//! with the reference, and the pair stops at the horizon or at the first
//! blow-up of either member; the error at the stopping step is the last
//! recorded point, and nothing is emitted past it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::{neg, Freq};
use crate::para::{holder_norm, DyadicPartition};
use crate::stoch::{
    amplitude_scale, renorm_table, NoiseSource, QuadSpec, RenormConstants, SpectralPath,
    StreamTag,
};
use crate::symbols::{covariance, Variant};

use super::sim::{Integrator, IntegratorConfig, SimState, SimStatus};

/// One Gaussian draw stream feeding every integrator of a coupled run.
pub struct SharedNoise {
    band: i64,
    source: NoiseSource,
    draws: Vec<(Freq, f64, f64)>,
}

impl SharedNoise {
    pub fn new(band: i64, master: u64, replica: u64) -> Result<Self> {
        Ok(SharedNoise {
            band,
            source: NoiseSource::new(band, master, replica, StreamTag::OuNoise)?,
            draws: Vec::new(),
        })
    }

    pub fn band(&self) -> i64 {
        self.band
    }

    /// One step's worth of unit Gaussians, one `(k, xi_re, xi_im)` per
    /// canonical orbit.
    pub fn next_step(&mut self) -> &[(Freq, f64, f64)] {
        self.draws.clear();
        let draws = &mut self.draws;
        self.source.for_each_pair(|k, x, y| draws.push((k, x, y)));
        &self.draws
    }
}

/// Fixed-seed Gaussian initial data on a small band, drawn with the
/// stationary amplitude scale of the dealiased dynamics. The law does not
/// depend on any integrator's band, so every integrator of band at least
/// `band` starts from the identical embedded field and the initial-data
/// error between resolutions is exactly zero.
pub fn initial_data(band: i64, master: u64, replica: u64) -> Result<SpectralField> {
    let mut source = NoiseSource::new(band, master, replica, StreamTag::InitialData)?;
    let mut out = SpectralField::zero(band)?;
    let scale = amplitude_scale();
    let mut status: Result<()> = Ok(());
    source.for_each_pair(|k, x, y| {
        if status.is_err() {
            return;
        }
        let s = scale * (covariance(Variant::Galerkin, band, k, 0.0) / 2.0).sqrt();
        let c = Complex64::new(s * x, s * y);
        status = out.set(k, c).and_then(|()| out.set(neg(k), c.conj()));
    });
    status?;
    Ok(out)
}

/// Configuration of a coupled lattice-versus-reference run.
#[derive(Debug, Clone)]
pub struct CoupledConfig {
    /// Simulated lattice bands, each strictly below `n_ref`.
    pub n_list: Vec<i64>,
    /// Noise band of the reference; its working band is three times this.
    pub n_ref: i64,
    /// Time horizon.
    pub t_final: f64,
    /// Step size; must divide the horizon.
    pub dt: f64,
    /// Regularity exponent of the comparison and blow-up norm `‖·‖_{−z}`.
    pub z: f64,
    /// Blow-up threshold.
    pub threshold: f64,
    /// Steps between error-curve checkpoints.
    pub norm_every: usize,
    /// Band of the shared Gaussian initial data, at most `min(n_list)`.
    pub init_band: i64,
    /// Oversampling factor for exact block norms.
    pub oversample: f64,
}

impl CoupledConfig {
    pub fn validate(&self) -> Result<()> {
        let Some(&max_n) = self.n_list.iter().max() else {
            return Err(Error::InvalidParameter("need at least one lattice band".into()));
        };
        let min_n = *self.n_list.iter().min().expect("nonempty");
        if min_n < 1 {
            return Err(Error::InvalidParameter(format!(
                "lattice bands must be >= 1, got {min_n}"
            )));
        }
        if self.n_ref <= max_n {
            return Err(Error::InvalidParameter(format!(
                "reference band {} must exceed every simulated band (max {})",
                self.n_ref, max_n
            )));
        }
        if self.init_band < 1 || self.init_band > min_n {
            return Err(Error::InvalidParameter(format!(
                "initial-data band {} must lie in [1, {min_n}]",
                self.init_band
            )));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!("step must be > 0, got {}", self.dt)));
        }
        if !(self.t_final >= self.dt) || !self.t_final.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "horizon {} must be finite and at least one step {}",
                self.t_final, self.dt
            )));
        }
        let steps = (self.t_final / self.dt).round();
        if (steps * self.dt - self.t_final).abs() > 1e-9 * self.t_final.max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "step {} does not divide horizon {}",
                self.dt, self.t_final
            )));
        }
        if self.norm_every == 0 {
            return Err(Error::InvalidParameter("checkpoint spacing must be >= 1".into()));
        }
        if !(self.z > 0.0) || !(self.threshold > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need z > 0 and threshold > 0, got {} and {}",
                self.z, self.threshold
            )));
        }
        if !(self.oversample >= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "oversampling must be >= 2, got {}",
                self.oversample
            )));
        }
        Ok(())
    }

    /// Number of steps to the horizon.
    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// Renormalization constants for every simulated band and the reference,
    /// computed once and shared across replicas.
    pub fn build_tables(&self, quad: &QuadSpec) -> Result<ConstantSet> {
        self.validate()?;
        let per_n = self
            .n_list
            .iter()
            .map(|&n| renorm_table(n, quad))
            .collect::<Result<Vec<_>>>()?;
        let reference = renorm_table(self.n_ref, quad)?;
        Ok(ConstantSet { per_n, reference })
    }
}

/// Renormalization constants for a coupled run, aligned with
/// `CoupledConfig::n_list` plus the reference band.
#[derive(Debug, Clone)]
pub struct ConstantSet {
    pub per_n: Vec<RenormConstants>,
    pub reference: RenormConstants,
}

/// Outcome of one coupled run: the error curve and its sup per simulated
/// band, per-pair stop data, and the reference-truncation diagnostic.
#[derive(Debug, Clone)]
pub struct CoupledRun {
    /// `errors[i]` is the `(time, error)` curve of `n_list[i]`, recorded at
    /// time zero, at regular checkpoints, and at the pair's stopping step.
    pub errors: Vec<Vec<(f64, f64)>>,
    /// Sup of each pair's recorded error curve.
    pub sup_error: Vec<f64>,
    /// Time each pair stopped: the horizon, or the first blow-up of either
    /// member.
    pub stop_times: Vec<f64>,
    /// Terminal status of each lattice trajectory; `Done` means the pair
    /// stopped without that trajectory blowing up.
    pub statuses: Vec<SimStatus>,
    /// Terminal status of the reference.
    pub ref_status: SimStatus,
    /// Largest observed energy fraction above two thirds of the reference
    /// working band.
    pub top_shell_max: f64,
}

impl CoupledRun {
    /// Whether any member of any pair blew up.
    pub fn any_blowup(&self) -> bool {
        self.ref_status == SimStatus::BlownUp
            || self.statuses.iter().any(|&s| s == SimStatus::BlownUp)
    }
}

fn eval_error(
    lat: &SpectralField,
    reference: &SpectralField,
    z: f64,
    part: &DyadicPartition,
    oversample: f64,
) -> Result<f64> {
    let diff = reference.add_scaled(&lat.resize_band(reference.band())?, Complex64::new(-1.0, 0.0))?;
    // The all-zero difference of identically seeded runs costs no FFT.
    if diff.coeff_energy() == 0.0 {
        return Ok(0.0);
    }
    holder_norm(&diff, -z, part, oversample)
}

fn top_shell_fraction(phi: &SpectralField, cut: i64) -> f64 {
    let idx = phi.indexer();
    let mut top = 0.0;
    let mut total = 0.0;
    for (s, c) in phi.coeffs().iter().enumerate() {
        let e = c.norm_sqr();
        total += e;
        let k = idx.freq(s);
        if k.iter().any(|c| c.abs() > cut) {
            top += e;
        }
    }
    if total > 0.0 {
        top / total
    } else {
        0.0
    }
}

/// Integrate every configured lattice band against the shared reference on
/// one noise realization. Constants must come from `build_tables` on the
/// same configuration.
pub fn run_coupled(
    cfg: &CoupledConfig,
    consts: &ConstantSet,
    master: u64,
    replica: u64,
) -> Result<CoupledRun> {
    cfg.validate()?;
    if consts.per_n.len() != cfg.n_list.len()
        || consts.reference.n != cfg.n_ref
        || consts.per_n.iter().zip(&cfg.n_list).any(|(c, &n)| c.n != n)
    {
        return Err(Error::InvalidParameter(
            "constant tables do not match the configured bands".into(),
        ));
    }

    let ref_band = 3 * cfg.n_ref;
    let mut reference = Integrator::new(IntegratorConfig {
        variant: Variant::Galerkin,
        band: ref_band,
        noise_band: cfg.n_ref,
        drift: consts.reference.mass_shift_galerkin(),
        cube_on: true,
        z: cfg.z,
        threshold: cfg.threshold,
        oversample: cfg.oversample,
    })?;
    let mut lattices = cfg
        .n_list
        .iter()
        .zip(&consts.per_n)
        .map(|(&n, c)| {
            Integrator::new(IntegratorConfig {
                variant: Variant::Lattice,
                band: n,
                noise_band: n,
                drift: c.mass_shift,
                cube_on: true,
                z: cfg.z,
                threshold: cfg.threshold,
                oversample: cfg.oversample,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let ref_tables = reference.prepare(cfg.dt)?;
    let ref_scales = reference.noise_scales(&ref_tables);
    let lat_tables = lattices.iter().map(|l| l.prepare(cfg.dt)).collect::<Result<Vec<_>>>()?;
    let lat_scales: Vec<_> =
        lattices.iter().zip(&lat_tables).map(|(l, t)| l.noise_scales(t)).collect();

    let phi0 = initial_data(cfg.init_band, master, replica)?;
    let mut ref_state = reference.initial_state(&phi0)?;
    let mut lat_states = lattices
        .iter()
        .map(|l| l.initial_state(&phi0))
        .collect::<Result<Vec<SimState>>>()?;

    let mut noise = SharedNoise::new(cfg.n_ref, master, replica)?;
    let mut ref_inc = SpectralField::zero(cfg.n_ref)?;
    let mut lat_incs = cfg
        .n_list
        .iter()
        .map(|&n| SpectralField::zero(n))
        .collect::<Result<Vec<_>>>()?;

    let part = DyadicPartition::build(ref_band)?;
    let pairs = cfg.n_list.len();
    let mut errors: Vec<Vec<(f64, f64)>> = Vec::with_capacity(pairs);
    for state in &lat_states {
        let e0 = eval_error(&state.phi, &ref_state.phi, cfg.z, &part, cfg.oversample)?;
        errors.push(vec![(0.0, e0)]);
    }
    let mut stop_times = vec![0.0; pairs];
    let mut statuses = vec![SimStatus::Done; pairs];
    let cut = 2 * cfg.n_ref;
    let mut top_shell_max = top_shell_fraction(&ref_state.phi, cut);

    // A pair is active while both members are running; initial data at or
    // past the threshold stops its pairs before any step.
    let mut active: Vec<bool> = lat_states
        .iter()
        .map(|s| s.status == SimStatus::Running && ref_state.status == SimStatus::Running)
        .collect();
    for i in 0..pairs {
        if !active[i] {
            statuses[i] = if lat_states[i].status == SimStatus::BlownUp {
                SimStatus::BlownUp
            } else {
                SimStatus::Done
            };
        }
    }

    let steps = cfg.steps();
    for s in 1..=steps {
        if !active.iter().any(|&a| a) {
            break;
        }
        let t = s as f64 * cfg.dt;
        let draws = noise.next_step();
        ref_scales.increment_into(draws, &mut ref_inc)?;
        reference.step(&mut ref_state, &ref_tables, &ref_inc)?;
        let ref_blew = ref_state.status == SimStatus::BlownUp;

        for i in 0..pairs {
            if !active[i] {
                continue;
            }
            lat_scales[i].increment_into(draws, &mut lat_incs[i])?;
            lattices[i].step(&mut lat_states[i], &lat_tables[i], &lat_incs[i])?;
        }

        let checkpoint = s % cfg.norm_every == 0 || s == steps;
        for i in 0..pairs {
            if !active[i] {
                continue;
            }
            let lat_blew = lat_states[i].status == SimStatus::BlownUp;
            let stopping = ref_blew || lat_blew || s == steps;
            if checkpoint || stopping {
                // The stopping step's field is the stopped sample; it is
                // recorded, and nothing past it is.
                let e =
                    eval_error(&lat_states[i].phi, &ref_state.phi, cfg.z, &part, cfg.oversample)?;
                errors[i].push((t, e));
            }
            if stopping {
                active[i] = false;
                stop_times[i] = t;
                statuses[i] = if lat_blew { SimStatus::BlownUp } else { SimStatus::Done };
            }
        }
        if checkpoint || ref_blew || !active.iter().any(|&a| a) {
            top_shell_max = top_shell_max.max(top_shell_fraction(&ref_state.phi, cut));
        }
    }
    if ref_state.status == SimStatus::Running {
        ref_state.status = SimStatus::Done;
    }

    let sup_error = errors
        .iter()
        .map(|curve| curve.iter().map(|&(_, e)| e).fold(0.0f64, f64::max))
        .collect();
    Ok(CoupledRun {
        errors,
        sup_error,
        stop_times,
        statuses,
        ref_status: ref_state.status,
        top_shell_max,
    })
}

/// Configuration of a single lattice run that also tracks its own
/// stochastic convolution.
#[derive(Debug, Clone)]
pub struct LatticeRunConfig {
    pub n: i64,
    pub t_final: f64,
    pub dt: f64,
    pub z: f64,
    pub threshold: f64,
    /// Steps between recorded snapshots.
    pub record_every: usize,
    pub init_band: i64,
    pub oversample: f64,
    /// Mass coefficient of the linear drift, usually the renormalization
    /// shift; zero turns renormalization off.
    pub drift: f64,
    pub cube_on: bool,
}

/// A lattice trajectory together with the stochastic convolution driven by
/// the identical increments, sampled on a common uniform time grid.
#[derive(Debug, Clone)]
pub struct LatticeRun {
    pub phi: SpectralPath,
    pub u1: SpectralPath,
    pub status: SimStatus,
    pub stop_time: f64,
}

/// Integrate one lattice trajectory and its pure stochastic convolution on
/// the same draws. Snapshots are recorded every `record_every` steps from
/// time zero; on blow-up the recorded path ends at the last snapshot
/// boundary before the stop, keeping the grid uniform, while `stop_time`
/// reports the exact stopped time.
pub fn run_lattice_with_convolution(
    cfg: &LatticeRunConfig,
    master: u64,
    replica: u64,
) -> Result<LatticeRun> {
    if cfg.record_every == 0 {
        return Err(Error::InvalidParameter("snapshot spacing must be >= 1".into()));
    }
    if cfg.init_band < 1 || cfg.init_band > cfg.n {
        return Err(Error::InvalidParameter(format!(
            "initial-data band {} must lie in [1, {}]",
            cfg.init_band, cfg.n
        )));
    }
    let mut phi_int = Integrator::new(IntegratorConfig {
        variant: Variant::Lattice,
        band: cfg.n,
        noise_band: cfg.n,
        drift: cfg.drift,
        cube_on: cfg.cube_on,
        z: cfg.z,
        threshold: cfg.threshold,
        oversample: cfg.oversample,
    })?;
    // The convolution is linear, so it is never threshold-stopped.
    let mut u1_int = Integrator::new(IntegratorConfig {
        variant: Variant::Lattice,
        band: cfg.n,
        noise_band: cfg.n,
        drift: 0.0,
        cube_on: false,
        z: cfg.z,
        threshold: f64::INFINITY,
        oversample: cfg.oversample,
    })?;
    let tables = phi_int.prepare(cfg.dt)?;
    let scales = phi_int.noise_scales(&tables);

    let phi0 = initial_data(cfg.init_band, master, replica)?;
    let mut phi_state = phi_int.initial_state(&phi0)?;
    let mut u1_state = u1_int.initial_state(&phi0)?;
    let mut noise = SharedNoise::new(cfg.n, master, replica)?;
    let mut inc = SpectralField::zero(cfg.n)?;

    let steps = (cfg.t_final / cfg.dt).round() as usize;
    if steps == 0 || (steps as f64 * cfg.dt - cfg.t_final).abs() > 1e-9 * cfg.t_final.max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "step {} does not divide horizon {}",
            cfg.dt, cfg.t_final
        )));
    }
    let mut phi_snaps = vec![phi_state.phi.clone()];
    let mut u1_snaps = vec![u1_state.phi.clone()];
    let mut stop_time = 0.0;
    if phi_state.status == SimStatus::Running {
        for s in 1..=steps {
            scales.increment_into(noise.next_step(), &mut inc)?;
            phi_int.step(&mut phi_state, &tables, &inc)?;
            u1_int.step(&mut u1_state, &tables, &inc)?;
            stop_time = s as f64 * cfg.dt;
            if s % cfg.record_every == 0 && phi_state.status != SimStatus::BlownUp {
                phi_snaps.push(phi_state.phi.clone());
                u1_snaps.push(u1_state.phi.clone());
            }
            if phi_state.status == SimStatus::BlownUp {
                break;
            }
        }
    }
    if phi_state.status == SimStatus::Running {
        phi_state.status = SimStatus::Done;
    }
    let dt_rec = cfg.dt * cfg.record_every as f64;
    Ok(LatticeRun {
        phi: SpectralPath::new(dt_rec, phi_snaps)?,
        u1: SpectralPath::new(dt_rec, u1_snaps)?,
        status: phi_state.status,
        stop_time,
    })
}
