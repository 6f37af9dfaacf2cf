//! Post-selected momentum transfer in two-path interferometers.
//!
//! A particle split into two arms, kicked by `+δ` in one arm only and
//! recombined, can leave a chosen exit port with a *negative* mean momentum.
//! This crate simulates that effect on a momentum grid, checks it against
//! closed-form Gaussian results, validates the rigid-kick model with a
//! split-step propagator, estimates parameters for an electron experiment,
//! and models the same sequence with the internal states of cold atoms.
//!
//! Natural units (ħ = 1) are used throughout; momenta are in units of the
//! initial Gaussian width `W` unless stated otherwise.

pub mod bec;
pub mod circuitfile;
pub mod cli;
pub mod error;
pub mod feasibility;
pub mod gaussian_oracle;
pub mod interferometer;
pub mod schrodinger;
pub mod wavepacket;

pub use error::{Error, Result};
pub use interferometer::{run_mzi, PhaseSetting, Port, PortOutcome};
pub use wavepacket::{gaussian_init, GaussianParams, GridSpec, MomentumWavefunction};
