//! Command-line front end for coverage analysis of heterogeneous Poisson
//! cellular networks: scenario files, single evaluations, sweeps and
//! analytic-versus-simulation comparisons, all emitted as CSV.

pub mod commands;
pub mod engine;
pub mod error;
pub mod output;
pub mod scenario;

pub use error::CliError;
