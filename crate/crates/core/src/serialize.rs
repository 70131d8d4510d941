//! Flat binary container for spectral and lattice fields.
//!
//! The format is deliberately dumb so any language can parse it:
//!
//! ```text
//! offset  size  content
//! 0       4     magic  b"PH4F"
//! 4       4     u32 LE  format version, currently 1
//! 8       4     u32 LE  kind: 0 = spectral, 1 = lattice
//! 12      8     u64 LE  size parameter: band B (spectral) or side M (lattice)
//! 20      ...   payload, f64 LE throughout
//! ```
//!
//! A spectral payload holds `(2B+1)^3` coefficient pairs `(re, im)` in
//! row-major frequency order over `{-B..B}^3` with the first component
//! slowest (the in-memory [`CubeIndexer`](crate::grid::CubeIndexer) order).
//! A lattice payload holds `M^3` real samples in row-major site order with
//! the last axis fastest. Values are written exactly as stored, so a
//! write/read round trip is bitwise.
//!
//! Readers validate the header before allocating and re-validate the
//! payload through the field constructors (finiteness, zero-mode
//! projection); sizes beyond [`MAX_BAND`] / [`MAX_SIDE`] are rejected as
//! malformed rather than honored with multi-gigabyte allocations.

use std::io::{Read, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{LatticeField, SpectralField};

/// Header magic identifying the container.
pub const MAGIC: [u8; 4] = *b"PH4F";

/// Current format version.
pub const FORMAT_VERSION: u32 = 1;

/// Largest spectral band a reader will accept.
pub const MAX_BAND: u64 = 1024;

/// Largest lattice side a reader will accept.
pub const MAX_SIDE: u64 = 4096;

const KIND_SPECTRAL: u32 = 0;
const KIND_LATTICE: u32 = 1;

fn write_header(w: &mut impl Write, kind: u32, size: u64) -> Result<()> {
    w.write_all(&MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&kind.to_le_bytes())?;
    w.write_all(&size.to_le_bytes())?;
    Ok(())
}

fn read_header(r: &mut impl Read, expect_kind: u32) -> Result<u64> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(Error::InvalidData(format!(
            "bad magic {magic:02x?}, expected {MAGIC:02x?}"
        )));
    }
    let mut word = [0u8; 4];
    r.read_exact(&mut word)?;
    let version = u32::from_le_bytes(word);
    if version != FORMAT_VERSION {
        return Err(Error::InvalidData(format!(
            "unsupported format version {version}, expected {FORMAT_VERSION}"
        )));
    }
    r.read_exact(&mut word)?;
    let kind = u32::from_le_bytes(word);
    if kind != expect_kind {
        return Err(Error::InvalidData(format!(
            "container holds kind {kind}, expected {expect_kind}"
        )));
    }
    let mut size = [0u8; 8];
    r.read_exact(&mut size)?;
    Ok(u64::from_le_bytes(size))
}

fn read_f64s(r: &mut impl Read, count: usize) -> Result<Vec<f64>> {
    let mut bytes = vec![0u8; count * 8];
    r.read_exact(&mut bytes)?;
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}

/// Write a spectral field to `w` in the documented container format.
pub fn write_spectral(field: &SpectralField, w: &mut impl Write) -> Result<()> {
    write_header(w, KIND_SPECTRAL, field.band() as u64)?;
    for c in field.coeffs() {
        w.write_all(&c.re.to_le_bytes())?;
        w.write_all(&c.im.to_le_bytes())?;
    }
    Ok(())
}

/// Read a spectral field written by [`write_spectral`].
pub fn read_spectral(r: &mut impl Read) -> Result<SpectralField> {
    let band = read_header(r, KIND_SPECTRAL)?;
    if band == 0 || band > MAX_BAND {
        return Err(Error::InvalidData(format!(
            "spectral band {band} outside the readable range 1..={MAX_BAND}"
        )));
    }
    let side = 2 * band as usize + 1;
    let raw = read_f64s(r, side * side * side * 2)?;
    let coeffs = raw
        .chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect();
    SpectralField::from_coeffs(band as i64, coeffs)
}

/// Write a lattice field to `w` in the documented container format.
pub fn write_lattice(field: &LatticeField, w: &mut impl Write) -> Result<()> {
    write_header(w, KIND_LATTICE, field.m() as u64)?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Read a lattice field written by [`write_lattice`].
pub fn read_lattice(r: &mut impl Read) -> Result<LatticeField> {
    let m = read_header(r, KIND_LATTICE)?;
    if m == 0 || m > MAX_SIDE {
        return Err(Error::InvalidData(format!(
            "lattice side {m} outside the readable range 1..={MAX_SIDE}"
        )));
    }
    let m = m as usize;
    let values = read_f64s(r, m * m * m)?;
    LatticeField::from_values(m, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_spectral(band: i64) -> SpectralField {
        SpectralField::from_fn(band, |k| {
            Complex64::new(
                (k[0] * 9 + k[1] * 2 + k[2]) as f64 * 0.01,
                (k[0] - k[2]) as f64 * 0.003,
            )
        })
        .unwrap()
    }

    #[test]
    fn spectral_round_trip_is_bitwise() {
        let f = sample_spectral(3);
        let mut buf = Vec::new();
        write_spectral(&f, &mut buf).unwrap();
        assert_eq!(buf.len(), 20 + 7 * 7 * 7 * 16);
        let g = read_spectral(&mut buf.as_slice()).unwrap();
        assert_eq!(f.band(), g.band());
        assert_eq!(f.coeffs(), g.coeffs());
    }

    #[test]
    fn lattice_round_trip_is_bitwise() {
        let f = LatticeField::from_fn(5, |x| x[0] + 2.0 * x[1] * x[2]).unwrap();
        let mut buf = Vec::new();
        write_lattice(&f, &mut buf).unwrap();
        assert_eq!(buf.len(), 20 + 125 * 8);
        let g = read_lattice(&mut buf.as_slice()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn malformed_headers_are_rejected() {
        let f = sample_spectral(1);
        let mut buf = Vec::new();
        write_spectral(&f, &mut buf).unwrap();

        let mut bad_magic = buf.clone();
        bad_magic[0] = b'X';
        assert!(read_spectral(&mut bad_magic.as_slice()).is_err());

        let mut bad_version = buf.clone();
        bad_version[4] = 99;
        assert!(read_spectral(&mut bad_version.as_slice()).is_err());

        // Spectral container read as lattice and vice versa.
        assert!(read_lattice(&mut buf.as_slice()).is_err());

        // Truncated payload.
        let cut = &buf[..buf.len() - 8];
        assert!(read_spectral(&mut &cut[..]).is_err());

        // Absurd band refused before allocation.
        let mut huge = buf.clone();
        huge[12..20].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(read_spectral(&mut huge.as_slice()).is_err());
    }

    #[test]
    fn zero_mode_is_projected_on_read() {
        // Hand-craft a container with a nonzero center entry; the reader
        // must deliver a mean-free field.
        let f = sample_spectral(1);
        let mut buf = Vec::new();
        write_spectral(&f, &mut buf).unwrap();
        let center = f.indexer().index([0, 0, 0]);
        let off = 20 + center * 16;
        buf[off..off + 8].copy_from_slice(&1.5f64.to_le_bytes());
        let g = read_spectral(&mut buf.as_slice()).unwrap();
        assert_eq!(g.coeff([0, 0, 0]), Complex64::new(0.0, 0.0));
    }
}
