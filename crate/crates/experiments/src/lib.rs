//! Study drivers for the lattice Phi^4_3 toolkit.
//!
//! This crate turns the primitives of `phi4-core` into reproducible numerical
//! studies: renormalization-constant scaling sweeps, distributional checks of
//! the Ornstein-Uhlenbeck driver, coupled block-variance estimates, stability
//! runs for the renormalized resonant product, full nonlinear simulations, and
//! two-scale convergence studies. The shared plumbing lives beside them:
//! configuration loading ([`config`]), deterministic tabular output
//! ([`output`]), log-log rate fitting ([`ratefit`]), and replica scheduling
//! ([`runner`]). The `phi4` binary is a thin command-line front end over
//! [`studies`].
//!
//! Every study is a pure function of its configuration and a master seed:
//! replicas draw from counter-based streams keyed `(seed, replica)`, so
//! results are independent of thread count and byte-identical across reruns.

pub mod config;
pub mod output;
pub mod ratefit;
pub mod runner;
pub mod studies;
