//! Bony paraproducts and the trilinear commutator.
//!
//! For block decompositions `f = Σ_i Δ_i f`, `g = Σ_j Δ_j g` the product
//! splits into
//!
//! ```text
//! π_<(f,g) = Σ_j S_{j-1}f · Δ_j g   (low-high),
//! π_0(f,g) = Σ_{|i-j|≤1} Δ_i f · Δ_j g   (resonant),
//! π_>(f,g) = π_<(g,f)   (high-low),
//! ```
//!
//! and `π_< + π_0 + π_> = fg` exactly as long as the partition covers both
//! bands. All block products are evaluated pseudo-spectrally on one common
//! grid of at least `2(B_f + B_g) + 1` points per axis, so no folded image
//! can reach the retained band: the results are exact convolutions.
//!
//! The sweep over `j` keeps a running low-pass grid (`S_{j-1}f`, updated by
//! adding `Δ_{j-1}f`, which telescopes exactly) and a three-block window of
//! `f` grids for the resonant part, so each block is transformed once.

use num_complex::Complex64;

use crate::cube::spectral_product;
use crate::error::Result;
use crate::fft::{cgrid_to_spectral, next_fast_len, spectral_to_cgrid};
use crate::field::SpectralField;

use super::partition::DyadicPartition;

const CZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Which Bony component to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParaKind {
    /// `π_<`: low modes of the first argument times blocks of the second.
    Low,
    /// `π_0`: resonant block-diagonal part.
    Resonant,
    /// `π_>`: high-low, `π_>(f,g) = π_<(g,f)`.
    High,
}

/// Grid of one Littlewood–Paley block, `None` when identically zero.
fn block_grid(
    u: &SpectralField,
    j: i32,
    part: &DyadicPartition,
    m: usize,
) -> Result<Option<Vec<Complex64>>> {
    if j < -1 || j > part.jmax() || !part.block_active(j, u.band()) {
        return Ok(None);
    }
    let block = part.lp_block(u, j)?;
    if block.coeff_energy() == 0.0 {
        return Ok(None);
    }
    Ok(Some(spectral_to_cgrid(&block, m)))
}

fn add_assign(acc: &mut [Complex64], add: &[Complex64]) {
    for (a, b) in acc.iter_mut().zip(add.iter()) {
        *a += b;
    }
}

fn mul_acc(acc: &mut [Complex64], a: &[Complex64], b: &[Complex64]) {
    for ((t, &x), &y) in acc.iter_mut().zip(a.iter()).zip(b.iter()) {
        *t += x * y;
    }
}

/// Compute `π_<(f,g)` and/or `π_0(f,g)` in one block sweep.
fn low_and_resonant(
    f: &SpectralField,
    g: &SpectralField,
    part: &DyadicPartition,
    want_low: bool,
    want_res: bool,
) -> Result<(Option<SpectralField>, Option<SpectralField>)> {
    let band = f.band() + g.band();
    let m = next_fast_len((2 * band + 1) as usize);
    let sz = m * m * m;

    let mut acc_low = want_low.then(|| vec![CZERO; sz]);
    let mut acc_res = want_res.then(|| vec![CZERO; sz]);
    let mut sf: Option<Vec<Complex64>> = None; // S_{j-1} f on the grid

    // Sliding window (Δ_{j-1}f, Δ_jf, Δ_{j+1}f).
    let mut fprev: Option<Vec<Complex64>> = None;
    let mut fcur = block_grid(f, -1, part, m)?;
    let mut fnext = block_grid(f, 0, part, m)?;

    for j in -1..=part.jmax() {
        if let Some(gj) = block_grid(g, j, part, m)? {
            if want_low {
                if let Some(s) = &sf {
                    mul_acc(acc_low.as_mut().unwrap(), s, &gj);
                }
            }
            if want_res {
                let acc = acc_res.as_mut().unwrap();
                for fw in [&fprev, &fcur, &fnext] {
                    if let Some(fg) = fw {
                        mul_acc(acc, fg, &gj);
                    }
                }
            }
        }
        // S_j = S_{j-1} + Δ_{j-1}: consume fprev before rotating.
        if want_low {
            if let Some(fp) = &fprev {
                match &mut sf {
                    Some(s) => add_assign(s, fp),
                    None => sf = Some(fp.clone()),
                }
            }
        }
        fprev = fcur.take();
        fcur = fnext.take();
        fnext = block_grid(f, j + 2, part, m)?;
    }

    let finish = |acc: Option<Vec<Complex64>>| -> Result<Option<SpectralField>> {
        match acc {
            Some(data) => Ok(Some(cgrid_to_spectral(data, m, band)?)),
            None => Ok(None),
        }
    };
    Ok((finish(acc_low)?, finish(acc_res)?))
}

/// One Bony component of the product `fg`, on the exact output band
/// `B_f + B_g`. The partition must cover both input bands.
pub fn paraproduct(
    f: &SpectralField,
    g: &SpectralField,
    kind: ParaKind,
    part: &DyadicPartition,
) -> Result<SpectralField> {
    let (lo, res) = match kind {
        ParaKind::Low => low_and_resonant(f, g, part, true, false)?,
        ParaKind::Resonant => low_and_resonant(f, g, part, false, true)?,
        ParaKind::High => low_and_resonant(g, f, part, true, false)?,
    };
    Ok(lo.or(res).expect("requested component was computed"))
}

/// The paraproduct commutator
/// `C(f,g,h) = π_0(π_<(f,g), h) − f·π_0(g,h)`.
pub fn commutator(
    f: &SpectralField,
    g: &SpectralField,
    h: &SpectralField,
    part: &DyadicPartition,
) -> Result<SpectralField> {
    let low_fg = paraproduct(f, g, ParaKind::Low, part)?;
    let first = paraproduct(&low_fg, h, ParaKind::Resonant, part)?;
    let res_gh = paraproduct(g, h, ParaKind::Resonant, part)?;
    let second = spectral_product(f, &res_gh)?;
    first.add_scaled(&second, Complex64::new(-1.0, 0.0))
}
