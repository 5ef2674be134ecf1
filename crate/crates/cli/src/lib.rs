//! Command-line front end for `tlsfit-core`: CSV ingestion, fit and
//! comparison reports, economy indicators, and SVG/scene emission.
//!
//! Commands are plain functions returning their standard output and any
//! artifact files, so `main` only parses flags and does the writing.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;
pub mod scene;
pub mod svg;

pub use commands::{
    dataset_csv, gen_bumblebee, run_compare, run_economy, run_fit, Artifact, CommandOutput,
    CompareRequest, EconomyRequest, FitRequest, Geometry,
};
pub use error::{CliError, Result};
pub use report::OutputFormat;

/// Version string carried in report metadata.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable naming the directory for plot and scene files.
pub const OUT_DIR_ENV: &str = "TLSFIT_OUT_DIR";
