//! Time integration of the renormalized dynamics: per-resolution steppers,
//! the coupled lattice-versus-reference driver on shared noise, and the
//! remainder decomposition of simulated trajectories.

mod coupled;
mod remainder;
mod sim;

pub use coupled::{
    initial_data, run_coupled, run_lattice_with_convolution, ConstantSet, CoupledConfig,
    CoupledRun, LatticeRun, LatticeRunConfig, SharedNoise,
};
pub use remainder::{decompose_remainder, RemainderPath};
pub use sim::{Integrator, IntegratorConfig, NoiseScales, SimState, SimStatus, StepTables};
