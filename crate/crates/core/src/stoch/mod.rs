//! Stochastic layer: noise streams, the exact OU flow, renormalization
//! constants, Wick powers, and the Duhamel driver objects built from them.

pub mod driver;
pub mod ou;
pub mod renorm;
pub mod rng;
pub mod wick;

pub use driver::{
    compute_k, compute_k_mean, compute_u2, ou_coefficient_path, resonant_renormalized,
    wick_square_path, MeanTrackedPath, RenormalizedResonant, SpectralPath,
};
pub use ou::{amplitude_scale, OuEvolver, OuState, OuStep};
pub use renorm::{
    compute_c0, compute_c11, compute_c11_direct, compute_c12, compute_c12_direct,
    compute_correctors, continuum_phi1, renorm_table, Correctors, QuadSpec, RenormConstants,
};
pub use rng::{NoiseSource, StreamTag, RNG_SCHEME};
pub use wick::{wick_power, WickOrder};
