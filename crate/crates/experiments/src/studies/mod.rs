//! Concrete study drivers behind the `phi4` subcommands.
//!
//! Each driver takes a validated [`crate::config::StudyConfig`], runs its
//! replicas deterministically, and returns a [`crate::output::StudyOutput`]
//! holding comma-separated tables, a run manifest, and a human-readable
//! summary. Drivers never print or touch the filesystem; the front end
//! decides where the output goes.

pub mod blocks;
pub mod converge;
pub mod enhance;
pub mod oulaw;
pub mod renorm;
pub mod simulate;
