//! Dyadic partition of unity on the frequency side.
//!
//! The profiles are radial: `χ` equals 1 on `|z| ≤ 1/2` and 0 on `|z| ≥ 1`
//! (exponential-bump smoothstep in between), and `θ(z) = χ(z/2) − χ(z)`,
//! supported in the annulus `1/2 ≤ |z| ≤ 2`. Blocks evaluate the profiles
//! at the analytic frequency `πk` of `e^{iπk·x}`:
//!
//! ```text
//! Δ_{-1}u = F^{-1}(χ(π·) F u),   Δ_j u = F^{-1}(θ(2^{-j}π·) F u)  (j ≥ 0),
//! ```
//!
//! so the `j`-th shell holds `|πk| ≈ 2^j`. Because `θ` is *defined* as a
//! difference of `χ` values, partial sums telescope exactly in floating
//! point: `χ(z) + Σ_{j≤J} θ(2^{-j}z) = χ(2^{-(J+1)}z)`, which is exactly 1
//! once `2^{J+1}` exceeds `2|z|`. The partition built for resolution `N`
//! covers fields of band `3N` (the widest band the dynamics produces).
//!
//! On this torus the frequencies are integers, so `|πk| ≥ π` for `k ≠ 0`:
//! blocks `-1` and `0` vanish on every mean-free field and the first active
//! shell is `j = 1`.

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::{norm_sq, Freq};
use crate::symbols::smooth_step;

/// Low-frequency bump: 1 on `r ≤ 1/2`, 0 on `r ≥ 1`, smooth and monotone.
#[inline]
pub fn chi(r: f64) -> f64 {
    smooth_step(2.0 * r.abs() - 1.0)
}

/// Annulus profile `θ(r) = χ(r/2) − χ(r)`, supported in `[1/2, 2]`.
#[inline]
pub fn theta(r: f64) -> f64 {
    chi(0.5 * r) - chi(r)
}

/// Immutable dyadic partition sized for a lattice resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicPartition {
    n: i64,
    jmax: i32,
}

impl DyadicPartition {
    /// Partition adequate for fields of band `3N`:
    /// `jmax = ⌈log2(√3 π (3N+1))⌉ + 1`.
    pub fn build(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(format!(
                "partition resolution must be >= 1, got {n}"
            )));
        }
        let reach = 3.0f64.sqrt() * std::f64::consts::PI * (3 * n + 1) as f64;
        let jmax = reach.log2().ceil() as i32 + 1;
        Ok(DyadicPartition { n, jmax })
    }

    /// Resolution the partition was built for.
    pub fn n(&self) -> i64 {
        self.n
    }

    /// Largest active block index: `Δ_j ≡ 0` on band-`3N` fields for
    /// `j > jmax`.
    pub fn jmax(&self) -> i32 {
        self.jmax
    }

    /// Block indices `-1 ..= jmax`.
    pub fn blocks(&self) -> impl Iterator<Item = i32> {
        -1..=self.jmax
    }

    /// Multiplier of block `j` at frequency `k`.
    pub fn block_weight(&self, j: i32, k: Freq) -> Result<f64> {
        if j < -1 {
            return Err(Error::InvalidParameter(format!(
                "block index must be >= -1, got {j}"
            )));
        }
        let r = std::f64::consts::PI * norm_sq(k).sqrt();
        Ok(if j == -1 {
            chi(r)
        } else {
            theta(r * 0.5f64.powi(j))
        })
    }

    /// Multiplier of the partial sum `S_j = Σ_{i ≤ j-1} Δ_i` at `k`:
    /// `χ(2^{-j} π|k|)` for `j ≥ 0`, zero for `j < 0`.
    pub fn low_weight(&self, j: i32, k: Freq) -> f64 {
        if j < 0 {
            return 0.0;
        }
        let r = std::f64::consts::PI * norm_sq(k).sqrt();
        chi(r * 0.5f64.powi(j))
    }

    /// Largest `|k|_∞` block `j` can touch: `θ(2^{-j}π|k|)` vanishes for
    /// `|k|_2 ≥ 2^{j+1}/π` and `|k|_∞ ≤ |k|_2`.
    pub fn block_band(&self, j: i32) -> i64 {
        if j == -1 {
            return 0; // χ(π|k|) = 0 for every integer k ≠ 0
        }
        (2.0f64.powi(j + 1) / std::f64::consts::PI).floor() as i64
    }

    /// Whether block `j` can be nonzero on a band-`band` field: the annulus
    /// must reach down below the largest available radius `√3·band`.
    pub fn block_active(&self, j: i32, band: i64) -> bool {
        if j == -1 {
            return false; // mean-free fields have no zero mode
        }
        let lower = 2.0f64.powi(j - 1) / std::f64::consts::PI; // smallest |k|_2 in supp
        self.block_band(j) >= 1 && lower < 3.0f64.sqrt() * band as f64
    }

    /// Littlewood–Paley block `Δ_j u`, truncated to the block's band.
    pub fn lp_block(&self, u: &SpectralField, j: i32) -> Result<SpectralField> {
        if j < -1 {
            return Err(Error::InvalidParameter(format!(
                "block index must be >= -1, got {j}"
            )));
        }
        let bb = self.block_band(j).min(u.band()).max(1);
        let mut out = u.truncate_band(bb)?;
        let jj = j;
        out.apply_multiplier(|k| self.block_weight(jj, k).unwrap());
        Ok(out)
    }

    /// Low-frequency partial sum `S_j u = Σ_{i ≤ j-1} Δ_i u`.
    pub fn low_block(&self, u: &SpectralField, j: i32) -> Result<SpectralField> {
        let mut out = u.clone();
        out.apply_multiplier(|k| self.low_weight(j, k));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_have_the_required_supports() {
        assert_eq!(chi(0.0), 1.0);
        assert_eq!(chi(0.5), 1.0);
        assert_eq!(chi(1.0), 0.0);
        assert!(chi(0.75) > 0.0 && chi(0.75) < 1.0);
        assert_eq!(theta(0.0), 0.0);
        assert_eq!(theta(0.4), 0.0);
        assert_eq!(theta(1.0), 1.0); // χ(1/2) − χ(1) = 1 − 0
        assert_eq!(theta(2.0), 0.0);
        assert_eq!(theta(2.5), 0.0);
    }

    #[test]
    fn partition_sums_to_one_over_the_active_range() {
        let part = DyadicPartition::build(8).unwrap();
        let reach = 3.0f64.sqrt() * std::f64::consts::PI * 25.0;
        let mut state = 0x12345u64;
        for _ in 0..200 {
            // Cheap deterministic pseudo-random radii in (0, reach].
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let r = reach * ((state >> 11) as f64 / (1u64 << 53) as f64);
            let mut total = chi(r);
            for j in 0..=part.jmax() {
                total += theta(r * 0.5f64.powi(j));
            }
            assert!((total - 1.0).abs() <= 1e-12, "radius {r}: sum {total}");
        }
    }

    #[test]
    fn blocks_two_apart_have_disjoint_supports() {
        for r in [0.3f64, 0.7, 1.0, 1.5, 2.3, 4.0, 7.9, 16.0] {
            for i in 0..8i32 {
                let j = i + 2;
                let prod = theta(r * 0.5f64.powi(i)) * theta(r * 0.5f64.powi(j));
                assert_eq!(prod, 0.0, "r={r}, i={i}, j={j}");
            }
        }
    }

    #[test]
    fn jmax_matches_the_frozen_formula() {
        // N = 8: √3·π·25 ≈ 136.04, log2 ≈ 7.09, ⌈⌉ = 8, +1 = 9.
        assert_eq!(DyadicPartition::build(8).unwrap().jmax(), 9);
        // N = 4: √3·π·13 ≈ 70.7, log2 ≈ 6.14, ⌈⌉ = 7, +1 = 8.
        assert_eq!(DyadicPartition::build(4).unwrap().jmax(), 8);
    }

    #[test]
    fn single_mode_splits_across_adjacent_shells() {
        use num_complex::Complex64;
        let part = DyadicPartition::build(2).unwrap();
        let mut u = SpectralField::zero(1).unwrap();
        u.set([1, 0, 0], Complex64::new(1.0, 0.0)).unwrap();
        u.set([-1, 0, 0], Complex64::new(1.0, 0.0)).unwrap();
        // |πk| = π: θ(π/2) and θ(π/4) are the only nonzero weights.
        let mut total = Complex64::new(0.0, 0.0);
        for j in part.blocks() {
            let b = part.lp_block(&u, j).unwrap();
            let c = b.coeff([1, 0, 0]);
            if j == 1 || j == 2 {
                assert!(c.re > 0.0, "block {j} empty");
            } else {
                assert_eq!(c, Complex64::new(0.0, 0.0), "block {j} should vanish");
            }
            total += c;
        }
        assert!((total - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
        assert!(!part.block_active(-1, 1));
        assert!(!part.block_active(0, 1));
        assert!(part.block_active(1, 1));
    }

    #[test]
    fn low_sum_matches_accumulated_blocks() {
        use num_complex::Complex64;
        let mut u = SpectralField::zero(3).unwrap();
        for (i, k) in [[1i64, 0, 0], [2, -1, 0], [3, 3, 3], [-2, 2, 1]].iter().enumerate() {
            let c = Complex64::new(0.3 + i as f64 * 0.2, -0.1);
            u.set(*k, c).unwrap();
            u.set([-k[0], -k[1], -k[2]], c.conj()).unwrap();
        }
        let part = DyadicPartition::build(1).unwrap();
        for j in 0..=part.jmax() {
            let s = part.low_block(&u, j).unwrap();
            let mut acc = SpectralField::zero(u.band()).unwrap();
            for i in -1..=(j - 1) {
                acc = acc
                    .add_scaled(&part.lp_block(&u, i).unwrap(), Complex64::new(1.0, 0.0))
                    .unwrap();
            }
            for (k, c) in s.iter() {
                assert!(
                    (c - acc.coeff(k)).norm() <= 1e-12,
                    "j={j}, k={k:?}"
                );
            }
        }
    }

    #[test]
    fn block_index_below_minus_one_is_rejected() {
        let part = DyadicPartition::build(1).unwrap();
        let u = SpectralField::zero(1).unwrap();
        assert_eq!(
            part.lp_block(&u, -2).unwrap_err().code(),
            "invalid-parameter"
        );
    }
}
