//! Direct state-vector simulation of a spin-1/2 particle in a partitioned box
//! whose right wall is a quantum rotor with an optional position wavepacket.
//!
//! Units: hbar = 1. Angular momenta are in units of hbar.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod flux;
pub mod momentum;
pub mod rotor;
pub mod shift;
mod spectral;
pub mod spin;
pub mod state;
pub mod tolerance;
pub mod wall;

pub use config::{ExperimentConfig, ReflectionMode, RotorParams};
pub use dynamics::{
    apply_period, apply_period_inverse, evolve, evolve_inverse, survival_amplitude, PeriodUnitary,
    WallOrientation,
};
pub use error::{Error, Result};
pub use flux::{analytic_flux, flux_profile, run_flux_experiment, FluxProfile, FluxSample};
pub use momentum::{
    analytic_p_transfer, fit_kappa, run_momentum_experiment, sweep_vanishing, MomentumReport,
    SweepRow,
};
pub use num_complex::Complex64;
pub use rotor::{PacketFamily, RotorPacket};
pub use shift::{
    backward_check, conditional_wall_state, run_shift_experiment, shift_for_packet, ShiftReport,
};
pub use spin::{spin_rotation, SpinMatrix, SpinOutcome, SpinVector};
pub use state::{fidelity, JointState, Overlap, ParticleMode};
pub use wall::{WallPacket, WallPacketParams};
