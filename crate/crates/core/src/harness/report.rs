use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::suites::Counterexample;
use super::{ExperimentConfig, HarnessError};
use crate::coloring::{Color, FamilySample, U1Outcome};
use crate::cseq::ClauseProfile;
use crate::ordinal::Ordinal;

pub const BANNER: &str =
    "finite-sample, non-refuting: hit rates describe sampled families only and cannot show a principle fails";

/// The machine-readable output of an experiment, scan or suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub banner: String,
    /// Wall-clock seconds since the Unix epoch; ignored by [`Report::canonical_json`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
    pub config: ExperimentConfig,
    /// What the configured builder guarantees; absent only for unknown builders.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builder_clauses: Option<ClauseProfile>,
    pub trials: Vec<TrialRecord>,
    pub aggregates: Aggregates,
    pub suites: BTreeMap<String, SuiteReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub family: FamilySample,
    pub separated_pairs: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub realized_colors: Vec<Color>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<Probe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_scan: Option<super::EtaScan>,
}

/// One `ε` probe of one trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub eps: Color,
    pub hit: bool,
    pub tau: Option<Color>,
    pub pair: Option<(usize, usize)>,
    pub scanned_pairs: usize,
}

impl Probe {
    pub fn from_outcome(eps: Color, outcome: &U1Outcome) -> Self {
        match outcome {
            U1Outcome::Witness {
                a,
                b,
                tau,
                scanned_pairs,
            } => Probe {
                eps,
                hit: true,
                tau: Some(tau.clone()),
                pair: Some((*a, *b)),
                scanned_pairs: *scanned_pairs,
            },
            U1Outcome::Exhausted { scanned_pairs } => Probe {
                eps,
                hit: false,
                tau: None,
                pair: None,
                scanned_pairs: *scanned_pairs,
            },
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hit_rates: Vec<HitRate>,
    /// Separated pairs per monochromatic color, summed over trials.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub color_histogram: BTreeMap<Color, u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub oracle_checks: Vec<OracleCheck>,
    /// Uniform blocks per `η`, summed over trials.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub eta_histogram: BTreeMap<Ordinal, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitRate {
    pub eps: Color,
    pub hits: u64,
    pub trials: u64,
    pub rate: f64,
}

/// Agreement of the fast paths with an exhaustive recomputation on one trial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub trial: u64,
    pub witness_agrees: bool,
    pub trace_set_agrees: bool,
    pub pr1_agrees: bool,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.witness_agrees && self.trace_set_agrees && self.pr1_agrees
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub passed: bool,
    /// Per check name: `[runs, violations]`.
    pub checks: BTreeMap<String, [u64; 2]>,
    /// Counters that are informative but not pass/fail, e.g. which branch of
    /// a dichotomy fired.
    pub observations: BTreeMap<String, u64>,
    /// Suite-level requirements that were not met.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<Counterexample>,
}

impl Report {
    pub fn new(config: ExperimentConfig) -> Self {
        Report {
            banner: BANNER.to_string(),
            generated_at: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs()),
            builder_clauses: config.build_seq().ok().map(|seq| seq.clauses()),
            config,
            trials: Vec::new(),
            aggregates: Aggregates::default(),
            suites: BTreeMap::new(),
        }
    }

    /// True unless some suite failed or an oracle comparison disagreed.
    pub fn passed(&self) -> bool {
        self.suites.values().all(|s| s.passed) && self.aggregates.oracle_checks.iter().all(OracleCheck::passed)
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The JSON form with the timestamp removed, for run-to-run comparison.
    pub fn canonical_json(&self) -> Result<String, HarnessError> {
        let mut copy = self.clone();
        copy.generated_at = None;
        copy.to_json()
    }

    pub fn write_json(&self, path: &Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_json()? + "\n").map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    /// One `(trial, eps, hit, tau)` row per probe.
    pub fn write_csv(&self, path: &Path) -> Result<(), HarnessError> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["trial", "eps", "hit", "tau"])?;
        for t in &self.trials {
            for p in &t.probes {
                w.write_record([
                    t.trial.to_string(),
                    p.eps.to_string(),
                    p.hit.to_string(),
                    p.tau.as_ref().map(|c| c.to_string()).unwrap_or_default(),
                ])?;
            }
        }
        w.flush().map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}
