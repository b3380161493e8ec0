//! Configuration, orchestration, CSV output and the command line.

pub mod cli;
pub mod config;
pub mod csvio;
pub mod pipeline;

pub use config::{load_config, RunConfig};
pub use pipeline::{run_pipeline, RowCounts, RunManifest};
