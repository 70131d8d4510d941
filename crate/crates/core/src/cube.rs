//! Pointwise products and cubes of spectral fields.
//!
//! Two flavors of cube appear in the dynamics:
//!
//! * the **lattice cube**: values are cubed at the `(2N+1)^3` sites and
//!   transformed back, so frequencies beyond the band fold in (aliasing);
//!   spectrally this equals the exact triple convolution followed by
//!   [`crate::fold::fold_to_band`];
//! * the **dealiased cube**: the exact triple convolution of the
//!   coefficients, evaluated by zero-padded transforms on a grid large
//!   enough that no folding touches the retained band.
//!
//! For a band-`B` input the product has band `3B`. Retaining band `R`, a
//! padded grid of `M ≥ 3B + R + 1` points per axis is exact: a spurious
//! image `q ± M e_j` of a product frequency `q` (`|q|_∞ ≤ 3B`) can only
//! reach bins with `|k|_∞ ≥ M - 3B > R`. Retaining the full product band
//! (`R = 3B`) this is the usual `2·3B + 1` rule. The same bound with
//! product band `B_f + B_g` governs binary products.

use crate::error::{Error, Result};
use crate::fft::{cgrid_into_spectral, next_fast_len, spectral_into_cgrid};
use crate::field::SpectralField;
use crate::fold::fold_to_band;
use crate::grid::GridSpec;

use num_complex::Complex64;

/// Cube at the native lattice sites, folded back into band `N`.
/// Input must be Hermitian with band at most `N`.
pub fn lattice_cube(spec: &SpectralField, grid: &GridSpec) -> Result<SpectralField> {
    if spec.band() > grid.n() {
        return Err(Error::UnsupportedBand(format!(
            "band {} field cannot live on the resolution-{} lattice",
            spec.band(),
            grid.n()
        )));
    }
    let field = crate::fft::dft_inverse(spec, grid)?;
    let cubed = field.map(|v| v * v * v);
    crate::fft::dft_forward(&cubed, grid)
}

/// Exact triple convolution, retaining band `retain ≤ 3B`.
pub fn spectral_cube_truncated(spec: &SpectralField, retain: i64) -> Result<SpectralField> {
    let mut engine = CubeEngine::new(spec.band(), retain)?;
    let mut out = SpectralField::zero(retain)?;
    engine.cube_into(spec, &mut out)?;
    Ok(out)
}

/// Exact triple convolution on the full product band `3B`.
pub fn spectral_cube(spec: &SpectralField) -> Result<SpectralField> {
    spectral_cube_truncated(spec, 3 * spec.band())
}

/// Exact product of two fields on the full band `B_f + B_g`.
pub fn spectral_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    let band = f.band() + g.band();
    let m = next_fast_len((2 * band + 1) as usize);
    let mut a = crate::fft::spectral_to_cgrid(f, m);
    let b = crate::fft::spectral_to_cgrid(g, m);
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x *= y;
    }
    crate::fft::cgrid_to_spectral(a, m, band)
}

/// Spatial mean of the pointwise product `f·g` over the torus.
///
/// Spectral fields carry no zero mode, so products lose their constant
/// part; this returns it. The mean is the zeroth product coefficient,
/// `Σ_k f̂(k) ĝ(−k)`, real for Hermitian inputs.
pub fn mean_of_product(f: &SpectralField, g: &SpectralField) -> f64 {
    let band = f.band().min(g.band());
    let mut acc = 0.0;
    for (k, c) in f.iter() {
        if k.iter().all(|x| x.abs() <= band) {
            acc += (c * g.coeff(crate::grid::neg(k))).re;
        }
    }
    acc
}

/// Reusable cube pipeline: fixed input band and retained band, one padded
/// grid buffer. The hot loop of the Galerkin integrator drives this.
pub struct CubeEngine {
    input_band: i64,
    retain: i64,
    m: usize,
    buf: Vec<Complex64>,
}

impl CubeEngine {
    pub fn new(input_band: i64, retain: i64) -> Result<Self> {
        if input_band < 1 || retain < 1 || retain > 3 * input_band {
            return Err(Error::InvalidParameter(format!(
                "cube of band {input_band} cannot retain band {retain}"
            )));
        }
        let m = next_fast_len((3 * input_band + retain + 1) as usize);
        Ok(CubeEngine {
            input_band,
            retain,
            m,
            buf: Vec::new(),
        })
    }

    /// Points per axis of the padded grid.
    pub fn grid_size(&self) -> usize {
        self.m
    }

    /// `out ← (spec)^3` truncated to the retained band. `out` must already
    /// have the retained band; `spec` at most the input band.
    pub fn cube_into(&mut self, spec: &SpectralField, out: &mut SpectralField) -> Result<()> {
        if spec.band() > self.input_band {
            return Err(Error::UnsupportedBand(format!(
                "engine sized for band {}, got {}",
                self.input_band,
                spec.band()
            )));
        }
        if out.band() != self.retain {
            return Err(Error::InvalidParameter(format!(
                "output band {} does not match retained band {}",
                out.band(),
                self.retain
            )));
        }
        spectral_into_cgrid(spec, self.m, &mut self.buf);
        for v in self.buf.iter_mut() {
            *v = *v * *v * *v;
        }
        cgrid_into_spectral(&mut self.buf, self.m, out)
    }
}

/// Fold the exact cube into the lattice band: reference path for the
/// aliased cube (slower, used by oracles and tests).
pub fn folded_spectral_cube(spec: &SpectralField, grid: &GridSpec) -> Result<SpectralField> {
    let full = spectral_cube(spec)?;
    fold_to_band(&full, grid.n())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::{cgrid_to_spectral, spectral_to_cgrid};
    use crate::grid::{is_canonical, iter_band, neg};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(band: i64, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = SpectralField::zero(band).unwrap();
        for k in iter_band(band) {
            if is_canonical(k) {
                let c = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
                f.set(k, c).unwrap();
                f.set(neg(k), c.conj()).unwrap();
            }
        }
        f
    }

    #[test]
    fn cosine_cube_has_closed_form() {
        // cos^3(θ) = (3 cos θ + cos 3θ) / 4, so the coefficient 1/2 at ±k0
        // becomes 3/8 at ±k0 and 1/8 at ±3k0.
        let mut f = SpectralField::zero(1).unwrap();
        f.set([1, 0, 0], Complex64::new(0.5, 0.0)).unwrap();
        f.set([-1, 0, 0], Complex64::new(0.5, 0.0)).unwrap();
        let c = spectral_cube(&f).unwrap();
        for (k, v) in c.iter() {
            let want = match k {
                [1, 0, 0] | [-1, 0, 0] => 0.375,
                [3, 0, 0] | [-3, 0, 0] => 0.125,
                _ => 0.0,
            };
            assert!(
                (v - Complex64::new(want, 0.0)).norm() < 1e-14,
                "coefficient at {k:?} is {v}"
            );
        }
    }

    #[test]
    fn truncated_cube_matches_conservative_grid() {
        // Sharp padding bound 3B + R + 1 against the 2(3B) + 1 rule.
        let f = random_hermitian(3, 91);
        for retain in [1i64, 3, 5, 9] {
            let sharp = spectral_cube_truncated(&f, retain).unwrap();
            let m = (2 * 3 * f.band() + 1) as usize;
            let mut grid = spectral_to_cgrid(&f, m);
            for v in grid.iter_mut() {
                *v = *v * *v * *v;
            }
            let conservative = cgrid_to_spectral(grid, m, retain).unwrap();
            let scale = 1.0 + conservative.coeffs().iter().fold(0.0f64, |a, c| a.max(c.norm()));
            for (k, v) in sharp.iter() {
                assert!(
                    (v - conservative.coeff(k)).norm() < 1e-13 * scale,
                    "retain {retain}, k {k:?}"
                );
            }
        }
    }

    #[test]
    fn lattice_cube_equals_folded_exact_cube() {
        for n in [1i64, 2] {
            let grid = GridSpec::new(n).unwrap();
            let f = random_hermitian(n, 92 + n as u64);
            let fast = lattice_cube(&f, &grid).unwrap();
            let reference = folded_spectral_cube(&f, &grid).unwrap();
            let scale = 1.0 + reference.coeffs().iter().fold(0.0f64, |a, c| a.max(c.norm()));
            for (k, v) in fast.iter() {
                assert!(
                    (v - reference.coeff(k)).norm() < 1e-12 * scale,
                    "N={n}, k={k:?}: {v} vs {}",
                    reference.coeff(k)
                );
            }
        }
    }

    #[test]
    fn product_mean_matches_grid_quadrature() {
        let f = random_hermitian(3, 95);
        let g = random_hermitian(2, 96);
        let m = (f.band() + g.band() + 1) as usize;
        let fg = spectral_to_cgrid(&f, m);
        let gg = spectral_to_cgrid(&g, m);
        let quad: f64 = fg
            .iter()
            .zip(gg.iter())
            .map(|(a, b)| (a * b).re)
            .sum::<f64>()
            / (m * m * m) as f64;
        let fast = mean_of_product(&f, &g);
        assert!((fast - quad).abs() < 1e-13, "{fast} vs {quad}");
        // Symmetric in its arguments.
        assert!((mean_of_product(&g, &f) - fast).abs() < 1e-15);
    }

    #[test]
    fn binary_product_matches_direct_convolution() {
        let f = random_hermitian(2, 93);
        let g = random_hermitian(1, 94);
        let p = spectral_product(&f, &g).unwrap();
        // Direct convolution sum.
        for (k, v) in p.iter() {
            let mut want = Complex64::new(0.0, 0.0);
            for (q, a) in f.iter() {
                let r = [k[0] - q[0], k[1] - q[1], k[2] - q[2]];
                want += a * g.coeff(r);
            }
            if k == [0, 0, 0] {
                want = Complex64::new(0.0, 0.0);
            }
            assert!((v - want).norm() < 1e-13, "k={k:?}");
        }
    }
}
