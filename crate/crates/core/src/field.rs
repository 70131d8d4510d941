//! Field containers: spectral coefficient cubes and real grid values.
//!
//! A [`SpectralField`] of band `B` stores the coefficients `c_k` of the
//! trigonometric polynomial
//!
//! ```text
//! Y(x) = Σ_{|k|_∞ ≤ B} c_k e^{i π k·x},   x ∈ [-1, 1]^3,
//! ```
//!
//! densely on the full cube `{-B, ..., B}^3`. Real-valued fields satisfy the
//! Hermitian constraint `c_{-k} = conj(c_k)`. The zero mode is kept at zero
//! throughout: every dynamical object here is mean-free, and any operation
//! that would produce a mean projects it away.
//!
//! A [`LatticeField`] stores real samples on an `m^3` wrapped grid (see
//! [`crate::grid`] for the site convention); `m` is the lattice side `2N+1`
//! for honest lattice data, or any larger sampling size for interpolated
//! evaluations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{iter_band, neg, norm_inf, CubeIndexer, Freq};

/// Dense complex coefficient cube over `{-B..B}^3`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    idx: CubeIndexer,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    /// Zero field of the given band.
    pub fn zero(band: i64) -> Result<Self> {
        if band < 1 {
            return Err(Error::InvalidParameter(format!(
                "spectral band must be >= 1, got {band}"
            )));
        }
        let idx = CubeIndexer::new(band);
        Ok(SpectralField {
            idx,
            coeffs: vec![Complex64::new(0.0, 0.0); idx.len()],
        })
    }

    /// Wrap an existing coefficient cube (row-major over `{-B..B}^3`).
    /// The zero mode is projected away; values must be finite.
    pub fn from_coeffs(band: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        let idx = CubeIndexer::new(band.max(0));
        if band < 1 || coeffs.len() != idx.len() {
            return Err(Error::InvalidData(format!(
                "coefficient cube for band {band} needs {} entries, got {}",
                idx.len(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidData(
                "non-finite spectral coefficient".into(),
            ));
        }
        let mut f = SpectralField { idx, coeffs };
        f.coeffs[f.idx.index([0, 0, 0])] = Complex64::new(0.0, 0.0);
        Ok(f)
    }

    /// Build from a closure over frequencies. The zero mode is ignored.
    pub fn from_fn(band: i64, mut f: impl FnMut(Freq) -> Complex64) -> Result<Self> {
        let mut out = SpectralField::zero(band)?;
        for i in 0..out.coeffs.len() {
            let k = out.idx.freq(i);
            if k != [0, 0, 0] {
                let v = f(k);
                out.coeffs[i] = v;
            }
        }
        Ok(out)
    }

    #[inline]
    pub fn band(&self) -> i64 {
        self.idx.band()
    }

    #[inline]
    pub fn indexer(&self) -> CubeIndexer {
        self.idx
    }

    /// Coefficient at `k`; zero outside the stored band.
    #[inline]
    pub fn coeff(&self, k: Freq) -> Complex64 {
        if self.idx.contains(k) {
            self.coeffs[self.idx.index(k)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Set the coefficient at `k` (must lie in band; `k = 0` is a no-op).
    pub fn set(&mut self, k: Freq, v: Complex64) -> Result<()> {
        if !self.idx.contains(k) {
            return Err(Error::UnsupportedBand(format!(
                "frequency {k:?} outside band {}",
                self.band()
            )));
        }
        if k != [0, 0, 0] {
            self.coeffs[self.idx.index(k)] = v;
        }
        Ok(())
    }

    /// Raw coefficient slice, row-major lexicographic over the cube.
    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Iterate `(k, c_k)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (Freq, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.idx.freq(i), c))
    }

    /// Largest Hermitian defect `max_k |c_{-k} - conj(c_k)|`.
    pub fn hermitian_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (k, c) in self.iter() {
            let d = (self.coeff(neg(k)) - c.conj()).norm();
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    /// Project onto the Hermitian subspace:
    /// `c_k ← (c_k + conj(c_{-k})) / 2`. Idempotent; fields already
    /// Hermitian are fixed points. The zero mode stays zero.
    pub fn hermitian_project(&self) -> Self {
        let mut out = self.clone();
        for i in 0..out.coeffs.len() {
            let k = out.idx.freq(i);
            let avg = (self.coeff(k) + self.coeff(neg(k)).conj()) * 0.5;
            out.coeffs[i] = avg;
        }
        out.coeffs[out.idx.index([0, 0, 0])] = Complex64::new(0.0, 0.0);
        out
    }

    /// Error unless the Hermitian defect is at most `tol`.
    pub fn require_hermitian(&self, tol: f64) -> Result<()> {
        let r = self.hermitian_residual();
        if r > tol {
            return Err(Error::SymmetryViolation(format!(
                "hermitian residual {r:.3e} exceeds {tol:.3e}"
            )));
        }
        Ok(())
    }

    /// Copy into a (possibly) different band: enlarging pads with zeros,
    /// shrinking requires the dropped shell to be empty.
    pub fn resize_band(&self, band: i64) -> Result<Self> {
        let mut out = SpectralField::zero(band)?;
        for (k, c) in self.iter() {
            if c != Complex64::new(0.0, 0.0) {
                if norm_inf(k) > band {
                    return Err(Error::UnsupportedBand(format!(
                        "nonzero coefficient at {k:?} outside target band {band}"
                    )));
                }
                out.coeffs[out.idx.index(k)] = c;
            }
        }
        Ok(out)
    }

    /// Truncate to `band`, discarding anything outside (sharp projection).
    pub fn truncate_band(&self, band: i64) -> Result<Self> {
        let mut out = SpectralField::zero(band)?;
        for k in iter_band(band.min(self.band())) {
            out.coeffs[out.idx.index(k)] = self.coeff(k);
        }
        out.coeffs[out.idx.index([0, 0, 0])] = Complex64::new(0.0, 0.0);
        Ok(out)
    }

    /// Pointwise linear combination `self + w * other` on the larger band.
    pub fn add_scaled(&self, other: &SpectralField, w: Complex64) -> Result<Self> {
        let band = self.band().max(other.band());
        let mut out = self.resize_band(band)?;
        for (k, c) in other.iter() {
            if c != Complex64::new(0.0, 0.0) {
                let i = out.idx.index(k);
                out.coeffs[i] += w * c;
            }
        }
        Ok(out)
    }

    /// Multiply every coefficient by `s` in place.
    pub fn scale(&mut self, s: f64) {
        for c in &mut self.coeffs {
            *c *= s;
        }
    }

    /// Apply a real radial-in-`k` multiplier `c_k ← w(k) c_k` in place.
    /// Real multipliers preserve the Hermitian constraint.
    pub fn apply_multiplier(&mut self, mut w: impl FnMut(Freq) -> f64) {
        for i in 0..self.coeffs.len() {
            let k = self.idx.freq(i);
            self.coeffs[i] *= w(k);
        }
        let zi = self.idx.index([0, 0, 0]);
        self.coeffs[zi] = Complex64::new(0.0, 0.0);
    }

    /// `Σ_k |c_k|^2`.
    pub fn coeff_energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest `|k|_∞` carrying a nonzero coefficient (0 if empty).
    pub fn active_band(&self) -> i64 {
        let mut b = 0;
        for (k, c) in self.iter() {
            if c != Complex64::new(0.0, 0.0) {
                b = b.max(norm_inf(k));
            }
        }
        b
    }
}

/// Real samples on an `m^3` wrapped periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeField {
    m: usize,
    values: Vec<f64>,
}

impl LatticeField {
    /// Zero field on an `m^3` grid, `m ≥ 1`.
    pub fn zero(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("grid size must be >= 1".into()));
        }
        Ok(LatticeField {
            m,
            values: vec![0.0; m * m * m],
        })
    }

    /// Wrap existing samples (row-major, last axis fastest, finite).
    pub fn from_values(m: usize, values: Vec<f64>) -> Result<Self> {
        if m == 0 || values.len() != m * m * m {
            return Err(Error::InvalidData(format!(
                "grid of size {m} needs {} samples, got {}",
                m * m * m,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData("non-finite grid sample".into()));
        }
        Ok(LatticeField { m, values })
    }

    /// Build from a closure over wrapped coordinates.
    pub fn from_fn(m: usize, mut f: impl FnMut([f64; 3]) -> f64) -> Result<Self> {
        let mut out = LatticeField::zero(m)?;
        for j0 in 0..m {
            let x0 = crate::grid::wrap_coord(j0, m);
            for j1 in 0..m {
                let x1 = crate::grid::wrap_coord(j1, m);
                for j2 in 0..m {
                    let x2 = crate::grid::wrap_coord(j2, m);
                    out.values[(j0 * m + j1) * m + j2] = f([x0, x1, x2]);
                }
            }
        }
        Ok(out)
    }

    /// Points per axis.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Raw samples, row-major with the last axis fastest.
    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Sample at grid index `(j0, j1, j2)`.
    #[inline]
    pub fn at(&self, j: [usize; 3]) -> f64 {
        self.values[(j[0] * self.m + j[1]) * self.m + j[2]]
    }

    /// Sample at the lattice point `ε·mv` (indices wrapped modulo `m`).
    #[inline]
    pub fn at_site(&self, mv: [i64; 3]) -> f64 {
        let m = self.m as i64;
        let w = |c: i64| (c.rem_euclid(m)) as usize;
        self.at([w(mv[0]), w(mv[1]), w(mv[2])])
    }

    /// Wrapped coordinate of index `j` along one axis.
    #[inline]
    pub fn coord(&self, j: usize) -> f64 {
        crate::grid::wrap_coord(j, self.m)
    }

    /// Mean value over the grid.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Maximum absolute sample.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
    }

    /// `(volume-normalized mean of |u|^p)`; the torus has volume 8, so the
    /// grid quadrature of `∫ |u|^p dx` is `8 × mean(|u|^p)`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.max_abs();
        }
        let mean_p = self
            .values
            .iter()
            .map(|v| v.abs().powf(p))
            .sum::<f64>()
            / self.values.len() as f64;
        (8.0 * mean_p).powf(1.0 / p)
    }

    /// Pointwise map.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        LatticeField {
            m: self.m,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_mode_is_pinned() {
        let mut f = SpectralField::zero(2).unwrap();
        f.set([0, 0, 0], c(3.0, 1.0)).unwrap();
        assert_eq!(f.coeff([0, 0, 0]), c(0.0, 0.0));
        let g = SpectralField::from_fn(1, |_| c(1.0, 1.0)).unwrap();
        assert_eq!(g.coeff([0, 0, 0]), c(0.0, 0.0));
        assert_eq!(g.coeff([1, 0, 0]), c(1.0, 1.0));
    }

    #[test]
    fn hermitian_projection_is_idempotent_and_fixes_hermitian_fields() {
        let f = SpectralField::from_fn(2, |k| {
            c(k[0] as f64 + 0.5, k[1] as f64 - k[2] as f64 * 0.25)
        })
        .unwrap();
        let p = f.hermitian_project();
        assert!(p.hermitian_residual() < 1e-15);
        let pp = p.hermitian_project();
        for (a, b) in p.coeffs().iter().zip(pp.coeffs().iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn out_of_band_reads_are_zero_and_writes_fail() {
        let mut f = SpectralField::zero(1).unwrap();
        assert_eq!(f.coeff([5, 0, 0]), c(0.0, 0.0));
        assert!(f.set([2, 0, 0], c(1.0, 0.0)).is_err());
    }

    #[test]
    fn band_resize_checks_dropped_shell() {
        let mut f = SpectralField::zero(3).unwrap();
        f.set([3, 0, 0], c(1.0, 0.0)).unwrap();
        assert!(f.resize_band(2).is_err());
        let g = f.resize_band(5).unwrap();
        assert_eq!(g.coeff([3, 0, 0]), c(1.0, 0.0));
        let t = f.truncate_band(2).unwrap();
        assert_eq!(t.coeff([3, 0, 0]), c(0.0, 0.0));
    }

    #[test]
    fn lattice_field_site_addressing_wraps() {
        let g = crate::grid::GridSpec::new(1).unwrap();
        let f = LatticeField::from_fn(g.side(), |x| x[0] + 10.0 * x[1] + 100.0 * x[2]).unwrap();
        // Site (-1, 0, 1) has wrapped indices (2, 0, 1).
        let eps = g.eps();
        let want = -eps + 100.0 * eps;
        assert!((f.at_site([-1, 0, 1]) - want).abs() < 1e-14);
        assert!((f.at_site([2, 0, 1]) - f.at_site([-1, 0, 1])).abs() == 0.0);
    }

    #[test]
    fn lp_norm_of_constant_accounts_for_volume() {
        let f = LatticeField::from_values(5, vec![2.0; 125]).unwrap();
        // ||2||_{L^p}^p = 8 * 2^p on the volume-8 torus.
        assert!((f.lp_norm(2.0) - (8.0f64 * 4.0).sqrt()).abs() < 1e-14);
        assert!((f.lp_norm(f64::INFINITY) - 2.0).abs() < 1e-15);
    }
}
