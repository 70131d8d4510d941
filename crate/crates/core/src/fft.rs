//! Fast transforms between coefficient cubes and periodic grids.
//!
//! With the wrapped site convention `x_j = 2j/m mod [-1, 1)` the evaluation
//! of a band-`B` field at the `m^3` grid is an honest discrete Fourier sum:
//!
//! ```text
//! Y_j = Σ_k c_k e^{iπ k · x_j} = Σ_k c_k ω^{k·j},   ω = e^{2πi/m},
//! ```
//!
//! i.e. frequency `k` lands in bin `k mod m` with no phase twiddles. The
//! inverse direction divides by `m^3`. On the native lattice (`m = 2N + 1`,
//! `B = N`) the two maps are mutually inverse bijections; on larger grids
//! they sample the trigonometric interpolant exactly. When `m < 2B + 1`
//! several frequencies share a bin; the folded sum still evaluates the
//! interpolant exactly *at those grid sites*, which is precisely spectral
//! aliasing.
//!
//! Band-limited data occupies only `2B + 1` of the `m` bins per axis, so
//! the 3D passes skip lanes that are identically zero (going to the grid)
//! or whose outputs are never read (coming back to a band). The skipped
//! work is exactly zero, so pruning does not change any result bit.
//!
//! All plans are cached; transforms of the same size reuse them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::field::{LatticeField, SpectralField};
use crate::grid::GridSpec;

const CZERO: Complex64 = Complex64::new(0.0, 0.0);

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    map.entry((len, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        })
        .clone()
}

/// Smallest 7-smooth integer `>= n` (fast FFT length).
pub fn next_fast_len(n: usize) -> usize {
    fn smooth(mut v: usize) -> bool {
        for p in [2, 3, 5, 7] {
            while v % p == 0 {
                v /= p;
            }
        }
        v == 1
    }
    let mut v = n.max(1);
    while !smooth(v) {
        v += 1;
    }
    v
}

/// Whether axis bin `i` can carry a band-`band` frequency (`bin = k mod m`).
#[inline]
fn bin_in_band(i: usize, m: usize, band: i64) -> bool {
    let i = i as i64;
    i <= band || i >= m as i64 - band
}

/// One 1D pass over the chosen axis of an `m^3` row-major cube, restricted
/// to lanes whose two cross-axis indices satisfy `active`.
fn fft_axis(
    data: &mut [Complex64],
    m: usize,
    axis: usize,
    fft: &Arc<dyn Fft<f64>>,
    scratch: &mut [Complex64],
    lane: &mut [Complex64],
    active: impl Fn(usize, usize) -> bool,
) {
    match axis {
        // Lane (i0, i1), contiguous along i2.
        2 => {
            for a in 0..m {
                for b in 0..m {
                    if active(a, b) {
                        let base = (a * m + b) * m;
                        fft.process_with_scratch(&mut data[base..base + m], scratch);
                    }
                }
            }
        }
        // Lane (i0, i2), stride m along i1.
        1 => {
            for a in 0..m {
                for b in 0..m {
                    if active(a, b) {
                        let base = a * m * m + b;
                        for t in 0..m {
                            lane[t] = data[base + t * m];
                        }
                        fft.process_with_scratch(lane, scratch);
                        for t in 0..m {
                            data[base + t * m] = lane[t];
                        }
                    }
                }
            }
        }
        // Lane (i1, i2), stride m^2 along i0.
        0 => {
            for a in 0..m {
                for b in 0..m {
                    if active(a, b) {
                        let base = a * m + b;
                        for t in 0..m {
                            lane[t] = data[base + t * m * m];
                        }
                        fft.process_with_scratch(lane, scratch);
                        for t in 0..m {
                            data[base + t * m * m] = lane[t];
                        }
                    }
                }
            }
        }
        _ => unreachable!(),
    }
}

/// Inverse 3D pass taking band-limited bins to grid values (unnormalized).
/// Bins outside the band are assumed (and required) to be zero.
pub(crate) fn fft3_from_band(data: &mut [Complex64], m: usize, band: i64) {
    assert!(m >= (2 * band + 1) as usize, "band {band} does not fit {m} bins");
    let fft = plan(m, true);
    let mut scratch = vec![CZERO; fft.get_inplace_scratch_len()];
    let mut lane = vec![CZERO; m];
    // Axis 0 first while both cross indices are still band-sparse.
    fft_axis(data, m, 0, &fft, &mut scratch, &mut lane, |i1, i2| {
        bin_in_band(i1, m, band) && bin_in_band(i2, m, band)
    });
    fft_axis(data, m, 1, &fft, &mut scratch, &mut lane, |_i0, i2| {
        bin_in_band(i2, m, band)
    });
    fft_axis(data, m, 2, &fft, &mut scratch, &mut lane, |_, _| true);
}

/// Forward 3D pass from grid values, producing valid bins only inside the
/// band (everything else is left unnormalized garbage and must be ignored).
pub(crate) fn fft3_to_band(data: &mut [Complex64], m: usize, band: i64) {
    assert!(m >= (2 * band + 1) as usize, "band {band} does not fit {m} bins");
    let fft = plan(m, false);
    let mut scratch = vec![CZERO; fft.get_inplace_scratch_len()];
    let mut lane = vec![CZERO; m];
    fft_axis(data, m, 2, &fft, &mut scratch, &mut lane, |_, _| true);
    fft_axis(data, m, 1, &fft, &mut scratch, &mut lane, |_i0, b2| {
        bin_in_band(b2, m, band)
    });
    fft_axis(data, m, 0, &fft, &mut scratch, &mut lane, |b1, b2| {
        bin_in_band(b1, m, band) && bin_in_band(b2, m, band)
    });
}

/// Full in-place 3D FFT (all lanes), used where no band structure applies.
pub(crate) fn fft3(data: &mut [Complex64], m: usize, inverse: bool) {
    assert_eq!(data.len(), m * m * m, "cube size mismatch");
    let fft = plan(m, inverse);
    let mut scratch = vec![CZERO; fft.get_inplace_scratch_len()];
    let mut lane = vec![CZERO; m];
    for axis in [2usize, 1, 0] {
        fft_axis(data, m, axis, &fft, &mut scratch, &mut lane, |_, _| true);
    }
}

/// Scatter band coefficients into FFT bins (`bin = k mod m`), summing on
/// collisions. `data` is zeroed first.
pub(crate) fn pack_spectrum(data: &mut [Complex64], spec: &SpectralField, m: usize) {
    data.fill(CZERO);
    let mi = m as i64;
    let idx = spec.indexer();
    for (i, &c) in spec.coeffs().iter().enumerate() {
        if c != CZERO {
            let k = idx.freq(i);
            let b0 = k[0].rem_euclid(mi) as usize;
            let b1 = k[1].rem_euclid(mi) as usize;
            let b2 = k[2].rem_euclid(mi) as usize;
            data[(b0 * m + b1) * m + b2] += c;
        }
    }
}

/// Read band coefficients back out of FFT bins, scaling each by `scale`.
/// Requires `m >= 2 band + 1` so every frequency owns its bin.
pub(crate) fn extract_band(
    data: &[Complex64],
    m: usize,
    band: i64,
    scale: f64,
) -> Result<SpectralField> {
    let mut out = SpectralField::zero(band)?;
    extract_band_into(data, m, scale, &mut out)?;
    Ok(out)
}

/// As [`extract_band`], writing into an existing cube of the target band.
pub(crate) fn extract_band_into(
    data: &[Complex64],
    m: usize,
    scale: f64,
    out: &mut SpectralField,
) -> Result<()> {
    let band = out.band();
    if m < (2 * band + 1) as usize {
        return Err(Error::InvalidParameter(format!(
            "grid of {m} points cannot resolve band {band}"
        )));
    }
    let mi = m as i64;
    let idx = out.indexer();
    let n = out.coeffs().len();
    let coeffs = out.coeffs_mut();
    for i in 0..n {
        let k = idx.freq(i);
        let b0 = k[0].rem_euclid(mi) as usize;
        let b1 = k[1].rem_euclid(mi) as usize;
        let b2 = k[2].rem_euclid(mi) as usize;
        coeffs[i] = data[(b0 * m + b1) * m + b2] * scale;
    }
    coeffs[idx.index([0, 0, 0])] = CZERO;
    Ok(())
}

/// Evaluate a spectral field on an `m^3` complex grid (exact at the sites),
/// reusing `data` as the output buffer.
pub(crate) fn spectral_into_cgrid(spec: &SpectralField, m: usize, data: &mut Vec<Complex64>) {
    data.resize(m * m * m, CZERO);
    pack_spectrum(data, spec, m);
    if m >= (2 * spec.band() + 1) as usize {
        fft3_from_band(data, m, spec.band());
    } else {
        // Folded packing fills bins densely; prune nothing.
        fft3(data, m, true);
    }
}

/// Evaluate a spectral field on an `m^3` complex grid (exact at the sites).
pub(crate) fn spectral_to_cgrid(spec: &SpectralField, m: usize) -> Vec<Complex64> {
    let mut data = Vec::new();
    spectral_into_cgrid(spec, m, &mut data);
    data
}

/// Forward-transform an `m^3` complex grid and keep band `band`.
/// The grid buffer is consumed as scratch.
pub(crate) fn cgrid_to_spectral(
    mut data: Vec<Complex64>,
    m: usize,
    band: i64,
) -> Result<SpectralField> {
    let mut out = SpectralField::zero(band)?;
    cgrid_into_spectral(&mut data, m, &mut out)?;
    Ok(out)
}

/// As [`cgrid_to_spectral`] with caller-owned buffers.
pub(crate) fn cgrid_into_spectral(
    data: &mut [Complex64],
    m: usize,
    out: &mut SpectralField,
) -> Result<()> {
    fft3_to_band(data, m, out.band());
    extract_band_into(data, m, 1.0 / (m * m * m) as f64, out)
}

/// Discrete Fourier transform of a lattice field (native resolution only).
/// Returns the coefficient cube of band `N`; the mean is projected away.
pub fn dft_forward(field: &LatticeField, grid: &GridSpec) -> Result<SpectralField> {
    if field.m() != grid.side() {
        return Err(Error::InvalidParameter(format!(
            "lattice field has {} points per axis, grid expects {}",
            field.m(),
            grid.side()
        )));
    }
    let m = field.m();
    let data: Vec<Complex64> = field
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    cgrid_to_spectral(data, m, grid.n())
}

/// Inverse transform onto the native lattice. The field must be Hermitian
/// (real-valued samples) and fit inside band `N`.
pub fn dft_inverse(spec: &SpectralField, grid: &GridSpec) -> Result<LatticeField> {
    if spec.band() > grid.n() {
        return Err(Error::UnsupportedBand(format!(
            "band {} exceeds lattice resolution {}",
            spec.band(),
            grid.n()
        )));
    }
    hermitian_gate(spec)?;
    real_samples(spec, grid.side())
}

/// Sample the trigonometric interpolant of a spectral field on an arbitrary
/// `m^3` wrapped grid. Exact at the sites for every `m >= 1`; for
/// `m < 2 band + 1` distinct frequencies share sites and the values are the
/// aliased ones.
pub fn ext_sample(spec: &SpectralField, m: usize) -> Result<LatticeField> {
    if m == 0 {
        return Err(Error::InvalidParameter("grid size must be >= 1".into()));
    }
    hermitian_gate(spec)?;
    real_samples(spec, m)
}

/// Forward transform from an oversampled grid, keeping band `band`.
/// Exact when the grid data is band-limited to `(m - 1) / 2`.
pub fn grid_to_spectral(field: &LatticeField, band: i64) -> Result<SpectralField> {
    let m = field.m();
    if m < (2 * band + 1) as usize {
        return Err(Error::InvalidParameter(format!(
            "grid of {m} points cannot resolve band {band}"
        )));
    }
    let data: Vec<Complex64> = field
        .values()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    cgrid_to_spectral(data, m, band)
}

fn hermitian_gate(spec: &SpectralField) -> Result<()> {
    let scale = 1.0 + spec.coeffs().iter().fold(0.0f64, |a, c| a.max(c.norm()));
    spec.require_hermitian(1e-9 * scale)
}

fn real_samples(spec: &SpectralField, m: usize) -> Result<LatticeField> {
    let data = spectral_to_cgrid(spec, m);
    let scale = 1.0 + data.iter().fold(0.0f64, |a, c| a.max(c.re.abs()));
    let mut worst = 0.0f64;
    let values: Vec<f64> = data
        .iter()
        .map(|c| {
            worst = worst.max(c.im.abs());
            c.re
        })
        .collect();
    if worst > 1e-8 * scale {
        return Err(Error::SymmetryViolation(format!(
            "imaginary residual {worst:.3e} after inverse transform"
        )));
    }
    LatticeField::from_values(m, values)
}
