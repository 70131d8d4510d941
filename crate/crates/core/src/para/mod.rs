//! Littlewood–Paley analysis: dyadic partition, Besov norms, paraproducts.

pub mod besov;
pub mod paraproduct;
pub mod partition;

pub use besov::{besov_norm, block_lp_norms, holder_norm, BesovIndex};
pub use paraproduct::{commutator, paraproduct, ParaKind};
pub use partition::DyadicPartition;
