//! Experiment runner for the `molga-core` SELFIES genetic algorithm:
//! dataset and alphabet files, fragment tables, run configuration, and
//! the commands behind the `molga` binary.

pub mod alphabet_file;
pub mod config;
pub mod dataset;
pub mod experiments;
pub mod fragments;
pub mod output;
pub mod report;

use std::path::Path;

pub use config::{Kind, Overrides, RunConfig};
pub use experiments::{run_kind, Context, RunOutcome};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("dataset: {0}")]
    Dataset(String),
    #[error("config: {0}")]
    Config(String),
    #[error("alphabet: {0}")]
    Alphabet(String),
    #[error("fragment table: {0}")]
    Fragments(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("run directory {dir} is missing {}", missing.join(", "))]
    MissingFiles { dir: String, missing: Vec<String> },
    #[error(transparent)]
    Ga(#[from] molga_core::ga::GaError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Error {
        Error::Io { path: path.as_ref().display().to_string(), source }
    }
}
