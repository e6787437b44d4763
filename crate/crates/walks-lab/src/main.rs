//! `walks-lab`: command-line front end for walks, colorings, experiments and
//! property suites.
//!
//! Exit codes: 0 on success, 1 when a suite or oracle comparison fails (or a
//! replayed counterexample still fails), 2 on usage and input errors.

use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use walks_core::coloring::{ColoringParams, Colorer, Painter, ThetaMode};
use walks_core::cseq::from_token;
use walks_core::harness::{
    replay, run_eta_scan, run_property_suite, run_u1_experiment, Counterexample, ExperimentConfig, Report,
    ReplayOutcome, Suite,
};
use walks_core::walks::walk;
use walks_core::Ordinal;

#[derive(Parser)]
#[command(name = "walks-lab", version, about = "Minimal walks, walk colorings and their property suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Walk from beta down to alpha and print trace, rho2, lambda and lambda2.
    Walk(PairArgs),
    /// Print the labeled trace and the colors d and c of one pair.
    Color {
        #[command(flatten)]
        pair: PairArgs,
        /// paper, hash:<seed> or table:<file>
        #[arg(long, default_value = "paper")]
        painter: String,
        #[arg(long, default_value_t = 8)]
        mu: u64,
        #[arg(long, default_value = "small")]
        mode: ThetaMode,
        #[arg(long, default_value_t = 3)]
        chi: u64,
    },
    /// Sample families and probe them for monochromatic pairs.
    Experiment {
        #[command(flatten)]
        io: ConfigArgs,
    },
    /// Tally blocks on which lambda(delta, -) and the eta-index are uniform.
    Scan {
        #[command(flatten)]
        io: ConfigArgs,
        #[arg(long)]
        delta: Ordinal,
    },
    /// Run property suites, or replay a recorded counterexample.
    Verify {
        #[command(flatten)]
        io: ConfigArgs,
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// A counterexample or a whole report; every payload in it is re-run.
        #[arg(long, conflicts_with_all = ["suite", "config", "out", "csv"])]
        replay: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PairArgs {
    /// ladder, single-term, maximal or holed-single-term
    #[arg(long, default_value = "single-term")]
    seq: String,
    #[arg(long)]
    alpha: Ordinal,
    #[arg(long)]
    beta: Ordinal,
    /// Working bound; defaults to beta.
    #[arg(long)]
    bound: Option<Ordinal>,
}

#[derive(Args)]
struct ConfigArgs {
    /// key=value config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write (trial, eps, hit, tau) rows here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl ConfigArgs {
    fn load(&self) -> Result<ExperimentConfig, String> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path).map_err(|e| e.to_string())?,
            None => ExperimentConfig::default(),
        };
        if self.out.is_some() {
            cfg.out.clone_from(&self.out);
        }
        if self.csv.is_some() {
            cfg.csv.clone_from(&self.csv);
        }
        Ok(cfg)
    }
}

enum Failure {
    Violation,
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("walks-lab: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{}", serde_json::to_string_pretty(value)?) {
        // a closed pipe (`| head`) is not worth a panic or an error
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit(report: &Report, cfg: &ExperimentConfig) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => report.write_json(path)?,
        None => print_json(report)?,
    }
    if let Some(path) = &cfg.csv {
        report.write_csv(path)?;
    }
    if report.passed() {
        Ok(())
    } else {
        for (name, suite) in report.suites.iter().filter(|(_, s)| !s.passed) {
            eprintln!("suite {name} failed: {} counterexamples recorded", suite.counterexamples.len());
            for failure in &suite.failures {
                eprintln!("  {failure}");
            }
        }
        if report.aggregates.oracle_checks.iter().any(|c| !c.passed()) {
            eprintln!("fast scan disagrees with the exhaustive oracle");
        }
        Err(Failure::Violation)
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Walk(pair) => {
            let bound = pair.bound.clone().unwrap_or_else(|| pair.beta.clone());
            let seq = from_token(&pair.seq, bound)?;
            print_json(&walk(seq.as_ref(), &pair.alpha, &pair.beta)?)
        }
        Command::Color {
            pair,
            painter,
            mu,
            mode,
            chi,
        } => {
            let bound = pair.bound.clone().unwrap_or_else(|| pair.beta.clone());
            let seq = from_token(&pair.seq, bound)?;
            let painter = Painter::from_spec(&painter)?;
            let colorer = Colorer::new(seq.as_ref(), painter, ColoringParams::new(mu, mode, chi)?)?;
            let w = walk(seq.as_ref(), &pair.alpha, &pair.beta)?;
            print_json(&json!({
                "trace": w.trace,
                "labels": colorer.tr_h(&pair.alpha, &pair.beta)?,
                "d": colorer.d(&pair.alpha, &pair.beta)?,
                "c": colorer.c(&pair.alpha, &pair.beta)?,
            }))
        }
        Command::Experiment { io } => {
            let cfg = io.load()?;
            emit(&run_u1_experiment(&cfg)?, &cfg)
        }
        Command::Scan { io, delta } => {
            let cfg = io.load()?;
            emit(&run_eta_scan(&cfg, &delta)?, &cfg)
        }
        Command::Verify {
            replay: Some(path), ..
        } => replay_file(&path),
        Command::Verify { io, suite, .. } => {
            let cfg = io.load()?;
            emit(&run_property_suite(&cfg, suite)?, &cfg)
        }
    }
}

fn replay_file(path: &PathBuf) -> Result<(), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let payloads: Vec<Counterexample> = match serde_json::from_str::<Counterexample>(&text) {
        Ok(one) => vec![one],
        Err(_) => {
            let report: Report = serde_json::from_str(&text)
                .map_err(|e| format!("{}: neither a counterexample nor a report: {e}", path.display()))?;
            report.suites.into_values().flat_map(|s| s.counterexamples).collect()
        }
    };
    let mut results = Vec::new();
    let mut reproduced = false;
    for cx in &payloads {
        let outcome = replay(cx)?;
        let (again, message) = match outcome {
            ReplayOutcome::Reproduced(m) => (true, Some(m)),
            ReplayOutcome::NotReproduced => (false, None),
        };
        reproduced |= again;
        results.push(json!({ "check": cx.name, "reproduced": again, "message": message }));
    }
    print_json(&json!({ "replayed": results.len(), "results": results }))?;
    if reproduced {
        Err(Failure::Violation)
    } else {
        Ok(())
    }
}
