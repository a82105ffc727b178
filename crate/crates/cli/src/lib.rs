//! Experiment driver behind the `hetero-dro` binary: ε sweeps, CSV output
//! and convergence-rate fits.

pub mod csv_out;
pub mod experiment;
pub mod format;
pub mod rate;
