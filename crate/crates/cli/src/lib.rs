//! Command-line front end for `subrad-core`: point evaluation, cached
//! parallel sweeps, figure data, validation and timing.

pub mod bench;
pub mod cache;
pub mod config;
mod error;
pub mod eval;
pub mod figures;
pub mod sweep;
pub mod validate;

pub use error::CliError;
