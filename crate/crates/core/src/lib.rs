//! Spectral toolkit and renormalized integrators for the dynamical `Φ^4`
//! model on the three-dimensional torus `[-1, 1]^3`.
//!
//! The crate is organized bottom-up:
//!
//! * [`grid`], [`field`], [`fft`]: lattice bookkeeping, coefficient cubes,
//!   and the exact transform pair between them;
//! * [`fold`]: frequency folding and the sharp band projections that express
//!   lattice aliasing spectrally;
//! * [`symbols`]: the discrete Laplacian symbol, heat semigroups, stationary
//!   covariances, and smooth frequency cutoffs;
//! * [`cube`]: aliased (lattice) and dealiased (Galerkin) cubic
//!   nonlinearities;
//! * [`quad`]: Gauss–Legendre quadrature used by the renormalization
//!   integrals;
//! * [`para`]: dyadic partition of unity, Besov norms, paraproducts, and the
//!   paraproduct commutator;
//! * [`stoch`]: seeded Gaussian streams, the stationary linear (Ornstein–
//!   Uhlenbeck) flow, Wick powers, renormalization constants, correctors,
//!   and the explicit second-order driver objects;
//! * [`dynamics`]: exponential-integrator steppers for the renormalized
//!   equation (lattice and Galerkin variants), coupled convergence runs,
//!   and the paracontrolled remainder decomposition;
//! * [`serialize`]: flat binary round-trip format for fields.
//!
//! All coefficients are stored relative to the plain exponentials
//! `e^{iπk·x}`; normalization constants tied to other basis conventions are
//! applied at the interfaces that need them and documented there.

pub mod error;
pub mod fft;
pub mod field;
pub mod grid;

pub use error::{Error, Result};
pub use field::{LatticeField, SpectralField};
pub use grid::{Freq, GridSpec};

pub mod cube;
pub mod dynamics;
pub mod fold;
pub mod para;
pub mod quad;
pub mod serialize;
pub mod stoch;
pub mod symbols;

