//! Experiment runner and property-suite driver.
//!
//! Everything here is seeded: trial `t` of a run draws from its own ChaCha
//! stream, trials may run in parallel, and results are folded in trial order,
//! so a config and seed always produce the same [`Report`].

mod config;
mod experiment;
pub mod oracle;
mod report;
mod sample;
mod suites;

use thiserror::Error;

pub use config::{default_eps_grid, ExperimentConfig};
pub use experiment::{eta_uniformity_scan, run_eta_scan, run_u1_experiment, EtaScan};
pub use report::{
    Aggregates, HitRate, OracleCheck, Probe, Report, SuiteReport, TrialRecord, BANNER,
};
pub use sample::{sample_family, stream_rng, OrdinalSampler};
pub use suites::{
    replay, run_property_suite, suite_painters, Check, CheckContext, Counterexample, ReplayOutcome, Suite,
};

use crate::coloring::ColoringError;
use crate::cseq::CSeqError;
use crate::walks::WalkError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("window holds {available} ordinals but {needed} are needed")]
    InsufficientWindow { needed: usize, available: u64 },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    CSeq(#[from] CSeqError),
}

impl HarnessError {
    fn config(line: usize, msg: impl Into<String>) -> Self {
        HarnessError::Config { line, msg: msg.into() }
    }
}
