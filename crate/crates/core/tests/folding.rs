//! Aliasing oracles: the spectral cube is checked against a direct triple
//! convolution (no transforms anywhere), and the lattice cube identity
//!
//! ```text
//! DFT( (pointwise cube at sites) ) == fold_to_band( exact cube )
//! ```
//!
//! is verified with the lattice side computed by direct evaluation sums.

use num_complex::Complex64;
use phi4_core::cube::{lattice_cube, spectral_cube};
use phi4_core::fold::fold_to_band;
use phi4_core::grid::{is_canonical, iter_band, neg, CubeIndexer, GridSpec};
use phi4_core::SpectralField;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(band: i64, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zero(band).unwrap();
    for k in iter_band(band) {
        if is_canonical(k) {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            f.set(k, c).unwrap();
            f.set(neg(k), c.conj()).unwrap();
        }
    }
    f
}

/// Direct convolution of coefficient cubes: `(f ⋆ g)(k) = Σ f(q) g(k - q)`.
fn convolve_direct(f: &SpectralField, g: &SpectralField) -> Vec<Complex64> {
    let band = f.band() + g.band();
    let idx = CubeIndexer::new(band);
    let mut out = vec![Complex64::new(0.0, 0.0); idx.len()];
    for (q, a) in f.iter() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (r, b) in g.iter() {
            if b != Complex64::new(0.0, 0.0) {
                let k = [q[0] + r[0], q[1] + r[1], q[2] + r[2]];
                out[idx.index(k)] += a * b;
            }
        }
    }
    out
}

/// Direct triple convolution as a raw band-3B cube (zero mode intact).
fn cube_direct(f: &SpectralField) -> (CubeIndexer, Vec<Complex64>) {
    let pair = convolve_direct(f, f);
    let pidx = CubeIndexer::new(2 * f.band());
    let oidx = CubeIndexer::new(3 * f.band());
    let mut out = vec![Complex64::new(0.0, 0.0); oidx.len()];
    for (i, &a) in pair.iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let q = pidx.freq(i);
        for (r, b) in f.iter() {
            if b != Complex64::new(0.0, 0.0) {
                out[oidx.index([q[0] + r[0], q[1] + r[1], q[2] + r[2]])] += a * b;
            }
        }
    }
    (oidx, out)
}

#[test]
fn exact_cube_matches_direct_triple_convolution() {
    for (n, seed) in [(1i64, 101u64), (2, 102)] {
        let f = random_hermitian(n, seed);
        let fast = spectral_cube(&f).unwrap();
        let (oidx, slow) = cube_direct(&f);
        let scale = 1.0 + slow.iter().fold(0.0f64, |a, c| a.max(c.norm()));
        for (k, v) in fast.iter() {
            if k == [0, 0, 0] {
                continue; // containers are mean-free by convention
            }
            let d = (v - slow[oidx.index(k)]).norm();
            assert!(d < 1e-12 * scale, "N={n}, k={k:?}: {d:.3e}");
        }
    }
}

#[test]
fn lattice_cube_is_the_folded_exact_cube() {
    for (n, seed) in [(1i64, 111u64), (2, 112), (3, 113)] {
        let grid = GridSpec::new(n).unwrap();
        let f = random_hermitian(n, seed);
        let aliased = lattice_cube(&f, &grid).unwrap();
        let folded = fold_to_band(&spectral_cube(&f).unwrap(), n).unwrap();
        let scale = 1.0 + folded.coeffs().iter().fold(0.0f64, |a, c| a.max(c.norm()));
        for (k, v) in aliased.iter() {
            let d = (v - folded.coeff(k)).norm();
            assert!(d < 1e-10 * scale, "N={n}, k={k:?}: {d:.3e}");
        }
    }
}

#[test]
fn folding_moves_every_box_by_its_shift() {
    // Single out-of-band modes: fold(k) = k - (2N+1) i with i the shift of
    // the box containing k.
    let n = 2i64;
    let side = 2 * n + 1;
    for shift in phi4_core::fold::alias_shifts() {
        let k = [
            shift[0] * (n + 1),
            shift[1] * (n + 2).min(3 * n),
            shift[2] * (n + 1),
        ];
        let mut f = SpectralField::zero(3 * n).unwrap();
        f.set(k, Complex64::new(1.0, 0.5)).unwrap();
        f.set(neg(k), Complex64::new(1.0, -0.5)).unwrap();
        let g = fold_to_band(&f, n).unwrap();
        let kk = [
            k[0] - side * shift[0],
            k[1] - side * shift[1],
            k[2] - side * shift[2],
        ];
        if kk == [0, 0, 0] {
            assert_eq!(g.coeff(kk), Complex64::new(0.0, 0.0));
        } else {
            assert_eq!(g.coeff(kk), Complex64::new(1.0, 0.5), "shift {shift:?}");
        }
    }
}
