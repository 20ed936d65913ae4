//! Quantum time-of-flight measurements with a clock coupled to a free
//! particle, either continuously or through periodic kicks.
//!
//! The particle moves on a periodic 1D grid; the clock is represented in its
//! angular-momentum basis, so the joint state is one spatial wavefunction per
//! clock channel. See [`propagate::run_experiment`] for the entry point and
//! [`analysis`] for turning final states into reading-time distributions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config_file;
pub mod error;
pub mod experiment;
pub mod model;
pub mod oracles;
pub mod presets;
pub mod propagate;
pub mod regime;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
pub use experiment::{CouplingMode, ExperimentConfig, Guards, Placement};
pub use model::{ChannelState, ClockSpec, PhysicalConfig, RegionSpec, SpatialGrid, WavepacketSpec};
pub use propagate::{run_experiment, RunOptions, RunResult};
