use std::collections::BTreeMap;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oracle::ExhaustiveScan;
use super::report::{HitRate, OracleCheck, Probe, Report, TrialRecord};
use super::{sample_family, stream_rng, ExperimentConfig, HarnessError};
use crate::coloring::{Color, ColorFn, Colorer, FamilySample, PairTable};
use crate::cseq::CSeq;
use crate::ordinal::Ordinal;
use crate::walks::{eta_index_of, walk, WalkError};

/// Trials re-checked against the exhaustive oracle in every experiment run.
pub const ORACLE_TRIALS: usize = 5;

/// Stream reserved for choosing the oracle trials; trial streams count up from 0.
const ORACLE_PICK_STREAM: u64 = u64::MAX;

/// Samples `trials` families and probes each with every `ε` of the grid.
pub fn run_u1_experiment(config: &ExperimentConfig) -> Result<Report, HarnessError> {
    config.validate()?;
    let seq = config.build_seq()?;
    let colorer = Colorer::new(seq.as_ref(), config.painter.clone(), config.params()?)?;

    let runs: Vec<(TrialRecord, PairTable)> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let family = sample_family(config, &mut stream_rng(config.seed, t), t)?;
            let table = colorer.pair_table(&family)?;
            let probes = config
                .eps_grid
                .iter()
                .map(|eps| Probe::from_outcome(eps.clone(), &table.witness_above(eps)))
                .collect();
            let record = TrialRecord {
                trial: t,
                separated_pairs: table.cells.len(),
                realized_colors: table.realized().into_iter().collect(),
                probes,
                family,
                eta_scan: None,
            };
            Ok((record, table))
        })
        .collect::<Result<_, HarnessError>>()?;

    let mut report = Report::new(config.clone());
    for (k, eps) in config.eps_grid.iter().enumerate() {
        let hits = runs.iter().filter(|(r, _)| r.probes[k].hit).count() as u64;
        report.aggregates.hit_rates.push(HitRate {
            eps: eps.clone(),
            hits,
            trials: runs.len() as u64,
            rate: hits as f64 / runs.len() as f64,
        });
    }
    for (_, table) in &runs {
        for color in table.cells.iter().filter_map(|(_, _, c)| c.as_ref()) {
            *report.aggregates.color_histogram.entry(color.clone()).or_default() += 1;
        }
    }
    let picks = oracle_trials(config);
    report.aggregates.oracle_checks = picks
        .par_iter()
        .map(|&t| {
            let (record, table) = &runs[t as usize];
            oracle_check(config, seq.as_ref(), &colorer, &record.family, table, t)
        })
        .collect::<Result<_, HarnessError>>()?;
    report.trials = runs.into_iter().map(|(r, _)| r).collect();
    Ok(report)
}

fn oracle_trials(config: &ExperimentConfig) -> Vec<u64> {
    let n = config.trials;
    if n <= ORACLE_TRIALS {
        return (0..n as u64).collect();
    }
    let mut rng = stream_rng(config.seed, ORACLE_PICK_STREAM);
    let mut picks: Vec<u64> = index::sample(&mut rng, n, ORACLE_TRIALS)
        .into_iter()
        .map(|i| i as u64)
        .collect();
    picks.sort_unstable();
    picks
}

/// Compares the parallel table, the direct scans and an exhaustive rescan.
fn oracle_check(
    config: &ExperimentConfig,
    seq: &dyn CSeq,
    colorer: &Colorer<'_>,
    family: &FamilySample,
    table: &PairTable,
    trial: u64,
) -> Result<OracleCheck, HarnessError> {
    let params = colorer.params();
    let by_c = ExhaustiveScan::new(seq, &config.painter, params, family, ColorFn::C)?;
    let by_d = ExhaustiveScan::new(seq, &config.painter, params, family, ColorFn::D)?;

    let mut witness_agrees = true;
    for eps in &config.eps_grid {
        let fast = table.witness_above(eps);
        witness_agrees &= fast == colorer.u1_witness(family, eps)? && fast == by_c.witness(eps);
    }

    let realized = table.realized();
    let trace_set_agrees = colorer.color_trace_set(family, ColorFn::C, None)? == by_c.trace_set()
        && realized == by_c.trace_set()
        && colorer.color_trace_set(family, ColorFn::D, None)? == by_d.trace_set();

    let mut pr1_agrees = true;
    let probes: Vec<Color> = realized.iter().chain(&config.eps_grid).cloned().collect();
    for tau in &probes {
        pr1_agrees &= colorer.pr1_hit(family, tau)? == by_c.pr1_hit(tau);
    }
    Ok(OracleCheck {
        trial,
        witness_agrees,
        trace_set_agrees,
        pr1_agrees,
    })
}

/// Outcome of an η-uniformity scan over one family.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaScan {
    /// Blocks lying entirely above δ.
    pub qualifying_blocks: usize,
    /// Qualifying blocks with a single `λ(δ, β)` value `η` and
    /// `ρ₂(δ, β) = η_{δ,β}` throughout.
    pub uniform_blocks: usize,
    /// Uniform blocks per `η`.
    pub histogram: BTreeMap<Ordinal, u64>,
}

/// Tallies, per `η`, the blocks `b` above δ on which `λ(δ, ·)` is constantly
/// `η` and `ρ₂(δ, β)` equals the η-index for every `β ∈ b`.
pub fn eta_uniformity_scan(seq: &dyn CSeq, delta: &Ordinal, family: &FamilySample) -> Result<EtaScan, WalkError> {
    let mut scan = EtaScan::default();
    for block in family.blocks() {
        if block.iter().any(|beta| beta <= delta) {
            continue;
        }
        scan.qualifying_blocks += 1;
        let walks = block
            .iter()
            .map(|beta| walk(seq, delta, beta))
            .collect::<Result<Vec<_>, _>>()?;
        let eta = &walks[0].lambda;
        if walks.iter().any(|w| w.lambda != *eta) {
            continue;
        }
        if walks.iter().all(|w| w.rho2 == eta_index_of(seq, eta, w)) {
            scan.uniform_blocks += 1;
            *scan.histogram.entry(eta.clone()).or_default() += 1;
        }
    }
    Ok(scan)
}

/// Runs [`eta_uniformity_scan`] on one sampled family per trial.
pub fn run_eta_scan(config: &ExperimentConfig, delta: &Ordinal) -> Result<Report, HarnessError> {
    config.validate()?;
    if delta >= &config.bound {
        return Err(HarnessError::InvalidConfig(format!(
            "delta = {delta} must lie below the bound {}",
            config.bound
        )));
    }
    let seq = config.build_seq()?;
    let records: Vec<TrialRecord> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let family = sample_family(config, &mut stream_rng(config.seed, t), t)?;
            let scan = eta_uniformity_scan(seq.as_ref(), delta, &family)?;
            Ok(TrialRecord {
                trial: t,
                separated_pairs: family.separated_pairs().len(),
                realized_colors: Vec::new(),
                probes: Vec::new(),
                family,
                eta_scan: Some(scan),
            })
        })
        .collect::<Result<_, HarnessError>>()?;
    let mut report = Report::new(config.clone());
    for scan in records.iter().filter_map(|r| r.eta_scan.as_ref()) {
        for (eta, n) in &scan.histogram {
            *report.aggregates.eta_histogram.entry(eta.clone()).or_default() += n;
        }
    }
    report.trials = records;
    Ok(report)
}
