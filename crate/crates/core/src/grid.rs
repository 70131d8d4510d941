//! Discretization bookkeeping for the periodic cube `[-1, 1]^3`.
//!
//! The spatial lattice at resolution `N` is
//! `Λ_N = { ε m : m ∈ {-N, ..., N}^3 }` with spacing `ε = 2 / (2N + 1)`,
//! so each axis carries an odd number of sites, `side = 2N + 1`, and the
//! lattice is exactly the set of `side`-th roots of unity rescaled to the
//! torus. Frequencies live on integer vectors `k ∈ Z^3`; a field "of band
//! `B`" has coefficients supported on `{ |k|_∞ ≤ B }`.
//!
//! Grid values are stored row-major with the *last* axis fastest and the
//! index `j ∈ {0, ..., m-1}` standing for the site `x_j = 2 j / m` wrapped
//! into `[-1, 1)`. For the odd lattice (`m = side`) this is the same point
//! set as `{ ε m : |m|_∞ ≤ N }`, reindexed by `j ≡ m (mod side)`; the
//! wrapped convention makes the fast transforms phase-free.

use crate::error::{Error, Result};

/// Integer frequency vector.
pub type Freq = [i64; 3];

/// `|k|_∞`.
#[inline]
pub fn norm_inf(k: Freq) -> i64 {
    k[0].abs().max(k[1].abs()).max(k[2].abs())
}

/// `|k|^2` as a float.
#[inline]
pub fn norm_sq(k: Freq) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64
}

/// `-k`.
#[inline]
pub fn neg(k: Freq) -> Freq {
    [-k[0], -k[1], -k[2]]
}

/// Spatial lattice descriptor: everything is derived from the resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    n: i64,
}

impl GridSpec {
    /// Lattice of resolution `n ≥ 1` (band `n`, side `2n + 1`).
    pub fn new(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(format!(
                "grid resolution must be >= 1, got {n}"
            )));
        }
        Ok(GridSpec { n })
    }

    /// Resolution `N`: largest retained frequency per axis.
    #[inline]
    pub fn n(&self) -> i64 {
        self.n
    }

    /// Sites per axis, `2N + 1` (always odd).
    #[inline]
    pub fn side(&self) -> usize {
        (2 * self.n + 1) as usize
    }

    /// Lattice spacing `ε = 2 / (2N + 1)`.
    #[inline]
    pub fn eps(&self) -> f64 {
        2.0 / self.side() as f64
    }

    /// Total number of sites, `side^3`.
    #[inline]
    pub fn sites(&self) -> usize {
        let s = self.side();
        s * s * s
    }

    /// Coordinate of grid index `j ∈ {0, ..., side-1}`, wrapped to `[-1, 1)`.
    #[inline]
    pub fn coord(&self, j: usize) -> f64 {
        wrap_coord(j, self.side())
    }
}

/// Coordinate `2j/m` wrapped into `[-1, 1)` for an `m`-point axis.
#[inline]
pub fn wrap_coord(j: usize, m: usize) -> f64 {
    let x = 2.0 * j as f64 / m as f64;
    if x >= 1.0 {
        x - 2.0
    } else {
        x
    }
}

/// Dense indexer for a full frequency cube `{-B, ..., B}^3` stored row-major
/// (first component slowest). The zero frequency sits at the exact center.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubeIndexer {
    band: i64,
    side: usize,
}

impl CubeIndexer {
    /// Indexer for band `band ≥ 0`.
    #[inline]
    pub fn new(band: i64) -> Self {
        debug_assert!(band >= 0);
        CubeIndexer {
            band,
            side: (2 * band + 1) as usize,
        }
    }

    #[inline]
    pub fn band(&self) -> i64 {
        self.band
    }

    /// Entries per axis, `2B + 1`.
    #[inline]
    pub fn side(&self) -> usize {
        self.side
    }

    /// Total entries, `(2B + 1)^3`.
    #[inline]
    pub fn len(&self) -> usize {
        self.side * self.side * self.side
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Whether `k` lies inside the cube.
    #[inline]
    pub fn contains(&self, k: Freq) -> bool {
        norm_inf(k) <= self.band
    }

    /// Linear index of `k`; caller guarantees `contains(k)`.
    #[inline]
    pub fn index(&self, k: Freq) -> usize {
        debug_assert!(self.contains(k));
        let b = self.band;
        (((k[0] + b) as usize * self.side) + (k[1] + b) as usize) * self.side
            + (k[2] + b) as usize
    }

    /// Frequency at linear index `i`.
    #[inline]
    pub fn freq(&self, i: usize) -> Freq {
        let s = self.side;
        let b = self.band;
        let k2 = (i % s) as i64 - b;
        let k1 = ((i / s) % s) as i64 - b;
        let k0 = (i / (s * s)) as i64 - b;
        [k0, k1, k2]
    }

    /// Iterate frequencies in linear-index order (lexicographic).
    pub fn iter(&self) -> impl Iterator<Item = Freq> + '_ {
        (0..self.len()).map(move |i| self.freq(i))
    }
}

/// Iterate all `k` with `|k|_∞ ≤ band` in lexicographic order.
pub fn iter_band(band: i64) -> impl Iterator<Item = Freq> {
    let idx = CubeIndexer::new(band);
    (0..idx.len()).map(move |i| idx.freq(i))
}

/// Canonical representative test for the Hermitian orbit `{k, -k}`:
/// the first nonzero component is positive. `k = 0` is not canonical.
#[inline]
pub fn is_canonical(k: Freq) -> bool {
    for &c in &k {
        if c > 0 {
            return true;
        }
        if c < 0 {
            return false;
        }
    }
    false
}

/// All canonical orbit representatives with `0 < |k|_∞ ≤ band`, in
/// lexicographic order. Exactly half of the nonzero cube.
pub fn orbit_representatives(band: i64) -> Vec<Freq> {
    iter_band(band).filter(|&k| is_canonical(k)).collect()
}
