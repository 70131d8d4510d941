//! Frequency folding and sharp band projections.
//!
//! Pointwise products on the `(2N+1)^3` lattice alias: the product of
//! band-`N` fields has frequencies up to `3N`, and at lattice sites the
//! mode `k` is indistinguishable from `k - (2N+1) i` for integer shifts
//! `i`. Folding pushes every frequency back into the band by the unique
//! such shift:
//!
//! ```text
//! fold(k)_j = k_j - (2N+1) i_j,   i_j ∈ {-1, 0, 1} chosen so |fold(k)_j| ≤ N,
//! ```
//!
//! which is well defined whenever `|k|_∞ ≤ 3N`. Splitting contributions by
//! their shift vector `i = (i_1, i_2, i_3)` decomposes the lattice product
//! into the direct (in-band) part `i = 0` and 26 aliased parts; spectrally,
//! the aliased part with shift `i` is a sharp box selection followed by a
//! modulation by `e^{-iπ(2N+1) i·x}`, a character that equals 1 at every
//! lattice site.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Freq;

/// The 26 nonzero shift vectors in `{-1, 0, 1}^3`, lexicographic order.
pub fn alias_shifts() -> [Freq; 26] {
    let mut out = [[0i64; 3]; 26];
    let mut n = 0;
    for a in -1..=1i64 {
        for b in -1..=1i64 {
            for c in -1..=1i64 {
                if (a, b, c) != (0, 0, 0) {
                    out[n] = [a, b, c];
                    n += 1;
                }
            }
        }
    }
    out
}

/// Shift vector that folds `k` into band `n`: `i_j = sign` of the excess.
/// Returns an error if some component needs more than one shift.
pub fn fold_shift(k: Freq, n: i64) -> Result<Freq> {
    let side = 2 * n + 1;
    let mut i = [0i64; 3];
    for j in 0..3 {
        if k[j] > n {
            i[j] = 1;
        } else if k[j] < -n {
            i[j] = -1;
        }
        if (k[j] - side * i[j]).abs() > n {
            return Err(Error::UnsupportedBand(format!(
                "frequency {k:?} cannot be folded into band {n} with one shift"
            )));
        }
    }
    Ok(i)
}

/// Fold every frequency of `spec` into band `n`, summing coefficients that
/// land on the same mode. Requires `spec.band() ≤ 3n`. Contributions folding
/// onto `k = 0` are projected away (mean-free convention).
pub fn fold_to_band(spec: &SpectralField, n: i64) -> Result<SpectralField> {
    if spec.band() > 3 * n {
        return Err(Error::UnsupportedBand(format!(
            "band {} exceeds the single-shift folding range 3N = {}",
            spec.band(),
            3 * n
        )));
    }
    let side = 2 * n + 1;
    let mut out = SpectralField::zero(n)?;
    let idx = out.indexer();
    let zero_i = idx.index([0, 0, 0]);
    {
        let coeffs = out.coeffs_mut();
        for (k, c) in spec.iter() {
            if c != Complex64::new(0.0, 0.0) {
                let i = fold_shift(k, n)?;
                let kk = [k[0] - side * i[0], k[1] - side * i[1], k[2] - side * i[2]];
                coeffs[idx.index(kk)] += c;
            }
        }
        coeffs[zero_i] = Complex64::new(0.0, 0.0);
    }
    Ok(out)
}

/// Sharp projection onto `{ |k|_∞ ≤ n }` (identity for already-narrow bands).
pub fn project_low(spec: &SpectralField, n: i64) -> Result<SpectralField> {
    spec.truncate_band(n)
}

/// Whether `k` lies in the box selected by shift `i` relative to band `n`:
/// component `j` must exceed `n` in the direction `i_j` (or stay in band
/// when `i_j = 0`).
#[inline]
pub fn in_shift_box(k: Freq, i: Freq, n: i64) -> bool {
    for j in 0..3 {
        let ok = match i[j] {
            0 => k[j].abs() <= n,
            1 => k[j] > n,
            -1 => k[j] < -n,
            _ => false,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Restrict to the box of shift `i` (zero elsewhere). Same band as input.
pub fn project_shift_box(spec: &SpectralField, i: Freq, n: i64) -> Result<SpectralField> {
    if i.iter().any(|&c| !(-1..=1).contains(&c)) || i == [0, 0, 0] {
        return Err(Error::InvalidParameter(format!(
            "shift vector must be a nonzero element of {{-1,0,1}}^3, got {i:?}"
        )));
    }
    let mut out = spec.clone();
    let idx = out.indexer();
    let len = out.coeffs().len();
    let coeffs = out.coeffs_mut();
    for t in 0..len {
        if !in_shift_box(idx.freq(t), i, n) {
            coeffs[t] = Complex64::new(0.0, 0.0);
        }
    }
    Ok(out)
}

/// Sum of all 26 out-of-band boxes: the aliased complement of the sharp
/// projection, `spec = project_low + project_high` for `spec.band() ≤ 3n`.
pub fn project_high(spec: &SpectralField, n: i64) -> Result<SpectralField> {
    let mut out = spec.clone();
    let idx = out.indexer();
    let len = out.coeffs().len();
    let coeffs = out.coeffs_mut();
    for t in 0..len {
        if idx.freq(t).iter().all(|&c| c.abs() <= n) {
            coeffs[t] = Complex64::new(0.0, 0.0);
        }
    }
    Ok(out)
}

/// Multiply by the lattice character `e^{-iπ(2n+1) i·x}`: spectrally a
/// translation `k ↦ k - (2n+1) i`. The character equals 1 at every lattice
/// site of resolution `n`, so aliased boxes modulated this way re-enter the
/// band without changing lattice values.
pub fn modulate(spec: &SpectralField, i: Freq, n: i64) -> Result<SpectralField> {
    if i.iter().any(|&c| !(-1..=1).contains(&c)) {
        return Err(Error::InvalidParameter(format!(
            "shift vector components must lie in {{-1,0,1}}, got {i:?}"
        )));
    }
    let side = 2 * n + 1;
    let shift_inf = i.iter().map(|c| c.abs()).max().unwrap();
    let band = spec.band() + side * shift_inf;
    let mut out = SpectralField::zero(band)?;
    let idx = out.indexer();
    let zero_i = idx.index([0, 0, 0]);
    {
        let coeffs = out.coeffs_mut();
        for (k, c) in spec.iter() {
            if c != Complex64::new(0.0, 0.0) {
                let kk = [k[0] - side * i[0], k[1] - side * i[1], k[2] - side * i[2]];
                coeffs[idx.index(kk)] += c;
            }
        }
        coeffs[zero_i] = Complex64::new(0.0, 0.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::iter_band;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn shifts_enumerate_the_26_neighbors() {
        let s = alias_shifts();
        assert_eq!(s.len(), 26);
        let mut seen = std::collections::HashSet::new();
        for i in s {
            assert!(i != [0, 0, 0]);
            assert!(i.iter().all(|&v| (-1..=1).contains(&v)));
            assert!(seen.insert(i));
        }
    }

    #[test]
    fn single_mode_folds_across_the_band_edge() {
        let n = 1i64;
        let mut f = SpectralField::zero(3 * n).unwrap();
        f.set([n + 1, 0, 0], c(1.0, 0.0)).unwrap();
        f.set([-(n + 1), 0, 0], c(1.0, 0.0)).unwrap();
        let g = fold_to_band(&f, n).unwrap();
        // k = N+1 folds to N+1 - (2N+1) = -N.
        assert_eq!(g.coeff([-n, 0, 0]), c(1.0, 0.0));
        assert_eq!(g.coeff([n, 0, 0]), c(1.0, 0.0));
    }

    #[test]
    fn folding_onto_zero_is_projected_away() {
        let n = 1i64;
        let mut f = SpectralField::zero(3).unwrap();
        f.set([3, 0, 0], c(2.0, 0.0)).unwrap(); // folds to 0 when side = 3
        f.set([-3, 0, 0], c(2.0, 0.0)).unwrap();
        let g = fold_to_band(&f, n).unwrap();
        assert_eq!(g.coeff([0, 0, 0]), c(0.0, 0.0));
    }

    #[test]
    fn boxes_partition_the_wide_cube() {
        let n = 1i64;
        for k in iter_band(3 * n) {
            let in_band = k.iter().all(|&v| v.abs() <= n);
            let mut hits = usize::from(in_band);
            for i in alias_shifts() {
                if in_shift_box(k, i, n) {
                    hits += 1;
                }
            }
            assert_eq!(hits, 1, "frequency {k:?} covered {hits} times");
        }
    }

    #[test]
    fn box_restriction_plus_modulation_equals_folding() {
        let n = 2i64;
        let mut f = SpectralField::zero(3 * n).unwrap();
        let mut v = 0.1;
        for k in iter_band(3 * n) {
            if k != [0, 0, 0] {
                f.set(k, c(v, -v / 2.0)).unwrap();
                v += 0.01;
            }
        }
        // Direct part plus modulated boxes, truncated to band n.
        let mut recon = project_low(&f, n).unwrap();
        for i in alias_shifts() {
            let boxed = project_shift_box(&f, i, n).unwrap();
            let moved = modulate(&boxed, i, n).unwrap().truncate_band(n).unwrap();
            recon = recon.add_scaled(&moved, c(1.0, 0.0)).unwrap();
        }
        let folded = fold_to_band(&f, n).unwrap();
        for (k, want) in folded.iter() {
            assert!(
                (recon.coeff(k) - want).norm() < 1e-12,
                "mismatch at {k:?}"
            );
        }
    }

    #[test]
    fn folding_rejects_bands_beyond_one_shift() {
        let f = SpectralField::zero(4).unwrap();
        let err = fold_to_band(&f, 1).unwrap_err();
        assert_eq!(err.code(), "unsupported-band");
    }
}
