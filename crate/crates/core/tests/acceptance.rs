//! Acceptance gate. Runs every criterion at full size and prints one
//! PASS/FAIL line each; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use walks_core::coloring::{Color, Colorer, ColoringParams, Painter, ThetaMode};
use walks_core::harness::{
    oracle::ExhaustiveScan, replay, run_property_suite, run_u1_experiment, stream_rng, sample_family, Check,
    ExperimentConfig, Report, ReplayOutcome, Suite,
};
use walks_core::walks::{eta_index, labeled_trace, walk};
use walks_core::{CSeq, CSeqBuilder, CSeqKind, Ordinal};

const SAMPLES: usize = 10_000;
const SEED: u64 = 20_240_917;
const BUILDERS: [&str; 3] = ["ladder", "single-term", "maximal"];

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn config(builder: &str) -> ExperimentConfig {
    ExperimentConfig {
        builder: builder.into(),
        bound: o("w^5"),
        window_hi: o("w^5"),
        samples: SAMPLES,
        seed: SEED,
        ..ExperimentConfig::default()
    }
}

type Outcome = Result<String, String>;

macro_rules! require {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// `[runs, violations]` of a check in a suite.
fn tally(report: &Report, suite: &str, check: &str) -> [u64; 2] {
    report.suites[suite].checks.get(check).copied().unwrap_or([0, 0])
}

fn seen(report: &Report, suite: &str, key: &str) -> u64 {
    report.suites[suite].observations.get(key).copied().unwrap_or(0)
}

/// Walks suite per builder, computed once and shared by criteria 1 and 2.
fn walk_runs() -> &'static BTreeMap<&'static str, (Report, Duration)> {
    static RUNS: OnceLock<BTreeMap<&'static str, (Report, Duration)>> = OnceLock::new();
    RUNS.get_or_init(|| {
        BUILDERS
            .iter()
            .map(|&b| {
                let start = Instant::now();
                let report = run_property_suite(&config(b), Suite::Walks).expect("walks suite runs");
                (b, (report, start.elapsed()))
            })
            .collect()
    })
}

fn concatenation() -> Outcome {
    let mut parts = Vec::new();
    for (b, (report, elapsed)) in walk_runs() {
        let [runs, bad] = tally(report, "walks", "concatenation");
        let unmet = seen(report, "walks", "concatenation: precondition-unmet");
        require!(runs - unmet >= SAMPLES as u64, "{b}: only {} qualifying triples", runs - unmet);
        require!(bad == 0, "{b}: {bad} violations");
        require!(*elapsed < Duration::from_secs(60), "{b}: walks suite took {elapsed:?}");
        parts.push(format!("{b} {runs} triples in {:.1}s", elapsed.as_secs_f64()));
    }
    Ok(parts.join(", "))
}

fn lambda2() -> Outcome {
    let mut parts = Vec::new();
    for (b, (report, _)) in walk_runs() {
        let [pairs, bad_bound] = tally(report, "walks", "lambda2-bound");
        let [triples, bad_dich] = tally(report, "walks", "lambda2-dichotomy");
        let unmet = seen(report, "walks", "lambda2-dichotomy: precondition-unmet");
        require!(pairs >= SAMPLES as u64 && bad_bound == 0, "{b}: bound {pairs} pairs, {bad_bound} violations");
        require!(
            triples - unmet >= SAMPLES as u64 && bad_dich == 0,
            "{b}: dichotomy {} triples, {bad_dich} violations",
            triples - unmet
        );
        let through = seen(report, "walks", "lambda2-dichotomy: branch-through-gamma");
        let acc = seen(report, "walks", "lambda2-dichotomy: branch-accumulation");
        if *b == "single-term" {
            require!(through >= 50 && acc >= 50, "single-term branches: through {through}, accumulation {acc}");
        }
        parts.push(format!("{b} branches {through}/{acc}"));
    }
    Ok(parts.join(", "))
}

fn coherence() -> Outcome {
    let single = run_property_suite(&config("single-term"), Suite::Cseq).map_err(|e| e.to_string())?;
    let [runs, bad] = tally(&single, "cseq", "coherence");
    let accs = seen(&single, "cseq", "coherence: accumulation-points");
    require!(runs >= (SAMPLES / 10) as u64, "single-term: only {runs} limit alphas");
    require!(bad == 0, "single-term: {bad} coherence violations");
    require!(accs > 0, "single-term: no accumulation points found");
    require!(single.suites["cseq"].passed, "single-term cseq suite failed");

    let ladder = run_property_suite(&config("ladder"), Suite::Cseq).map_err(|e| e.to_string())?;
    let [_, bad_iso] = tally(&ladder, "cseq", "isolation");
    let elements = seen(&ladder, "cseq", "isolation: elements");
    require!(elements >= SAMPLES as u64, "ladder: only {elements} elements checked");
    require!(bad_iso == 0 && ladder.suites["cseq"].passed, "ladder: {bad_iso} isolation violations");
    Ok(format!(
        "single-term {runs} alphas, {accs} accumulation points; ladder {elements} elements isolated"
    ))
}

fn coloring_runs() -> &'static Report {
    static RUN: OnceLock<Report> = OnceLock::new();
    RUN.get_or_init(|| run_property_suite(&config("single-term"), Suite::Coloring).expect("coloring suite runs"))
}

fn image_identity() -> Outcome {
    let report = coloring_runs();
    let mut parts = Vec::new();
    for painter in ["paper", "hash", "table"] {
        let name = format!("image-identity/{painter}");
        let [runs, bad] = tally(report, "coloring", &name);
        let unmet = seen(report, "coloring", &format!("{name}: precondition-unmet"))
            + seen(report, "coloring", &format!("{name}: skipped-no-accumulation"));
        require!(runs - unmet >= SAMPLES as u64, "{painter}: only {} qualifying triples", runs - unmet);
        require!(bad == 0, "{painter}: {bad} violations");
        parts.push(format!("{painter} {}", runs - unmet));
    }
    Ok(parts.join(", "))
}

fn d_closedness() -> Outcome {
    let report = coloring_runs();
    let mut parts = Vec::new();
    for painter in ["paper", "hash", "table"] {
        let name = format!("d-closedness/{painter}");
        let [runs, bad] = tally(report, "coloring", &name);
        let nonempty = seen(report, "coloring", &format!("{name}: nonempty-sequences"));
        require!(runs >= (SAMPLES / 10) as u64, "{painter}: only {runs} (beta, i) pairs");
        require!(bad == 0, "{painter}: {bad} violations");
        require!(nonempty > 0, "{painter}: every constructed sequence was empty");
        parts.push(format!("{painter} {runs} pairs ({nonempty} nonempty)"));
    }
    require!(report.suites["coloring"].passed, "coloring suite failed: {:?}", report.suites["coloring"].failures);
    Ok(parts.join(", "))
}

fn hand_oracles() -> Outcome {
    let b = o("w^5");
    let ladder = CSeqBuilder::new(CSeqKind::Ladder, b.clone());
    let single = CSeqBuilder::new(CSeqKind::SingleTerm, b.clone());
    for seq in [&ladder, &single] {
        let r = walk(seq, &o("3"), &o("w")).map_err(|e| e.to_string())?;
        require!(r.trace == [o("w")] && r.rho2 == 1 && r.lambda == o("2"), "{}: walk(3, w) = {r:?}", seq.name());
    }
    let r = walk(&single, &o("w+1"), &o("w^2")).map_err(|e| e.to_string())?;
    require!(
        r.trace == [o("w^2"), o("w*2")] && r.rho2 == 2 && r.lambda == o("w") && r.lambda2 == o("w"),
        "walk(w+1, w^2) = {r:?}"
    );
    let eta = |e: &str| eta_index(&single, &o(e), &o("w+1"), &o("w^2")).unwrap();
    require!(eta("w*3") == 1 && eta("w+2") == 2, "eta indices {} {}", eta("w*3"), eta("w+2"));

    let table = Painter::table_from_str("0 1\nw 2\n").map_err(|e| e.to_string())?;
    let small4 = ColoringParams::new(4, ThetaMode::Small, 3).unwrap();
    let large4 = ColoringParams::new(4, ThetaMode::Large, 3).unwrap();
    let paper = Colorer::new(&single, Painter::Paper, small4).unwrap();
    let tab_small = Colorer::new(&single, table.clone(), small4).unwrap();
    let tab_large = Colorer::new(&single, table, large4).unwrap();
    let labels = labeled_trace(&single, |x| paper.h(x).unwrap(), &o("w+1"), &o("w^2")).unwrap();
    require!(labels == [0, 0], "paper labels {labels:?}");
    let labels = tab_small.tr_h(&o("w+1"), &o("w^2")).unwrap();
    require!(labels == [1, 2], "table labels {labels:?}");
    let d = tab_small.d(&o("w+1"), &o("w^2")).unwrap();
    require!(d == Color::from(2), "table d(w+1, w^2) = {d}");
    let d = paper.d(&o("3"), &o("w")).unwrap();
    require!(d == Color::from(0), "paper d(3, w) = {d}");
    let c = tab_large.c(&o("w+1"), &o("w^2")).unwrap();
    require!(c == Color(o("w*2")), "large c(w+1, w^2) = {c}");
    require!(paper.h(&o("w*2")).unwrap() == 0 && tab_small.h(&o("w*2")).unwrap() == 2, "h(w*2) mismatch");
    Ok("walks (3,w) x2, (w+1,w^2); eta 1,2; labels [0,0] [1,2]; d = 2, 0; c = w*2".into())
}

fn oracle_equivalence() -> Outcome {
    let cfg = ExperimentConfig {
        builder: "single-term".into(),
        painter: Painter::Hash { seed: 77 },
        mu: 8,
        sigma: 2,
        blocks: 100,
        trials: 100,
        seed: SEED,
        ..ExperimentConfig::default()
    };
    let report = run_u1_experiment(&cfg).map_err(|e| e.to_string())?;
    let checks = &report.aggregates.oracle_checks;
    require!(checks.len() == 5, "{} oracle trials", checks.len());
    require!(checks.iter().all(|c| c.passed()), "disagreement: {checks:?}");

    // Recompute the sampled trials' probes here too, from scratch.
    let seq = cfg.build_seq().unwrap();
    let params = cfg.params().unwrap();
    for check in checks {
        let family = sample_family(&cfg, &mut stream_rng(cfg.seed, check.trial), check.trial).unwrap();
        let record = &report.trials[check.trial as usize];
        require!(record.family == family, "trial {} family is not reproducible", check.trial);
        let scan = ExhaustiveScan::new(seq.as_ref(), &cfg.painter, &params, &family, walks_core::coloring::ColorFn::C)
            .map_err(|e| e.to_string())?;
        for probe in &record.probes {
            let expect = scan.witness(&probe.eps);
            require!(
                probe.tau.as_ref() == expect.tau(),
                "trial {} eps {}: report {:?}, rescan {:?}",
                check.trial,
                probe.eps,
                probe.tau,
                expect
            );
        }
    }
    let trials: Vec<u64> = checks.iter().map(|c| c.trial).collect();
    Ok(format!("trials {trials:?} agree with the exhaustive rescan"))
}

fn determinism() -> Outcome {
    let cfg = ExperimentConfig {
        painter: Painter::Hash { seed: 3 },
        trials: 12,
        seed: SEED,
        ..ExperimentConfig::default()
    };
    let a = run_u1_experiment(&cfg).map_err(|e| e.to_string())?;
    let b = run_u1_experiment(&cfg).map_err(|e| e.to_string())?;
    require!(a.canonical_json().unwrap() == b.canonical_json().unwrap(), "experiment reports differ");
    let suite_cfg = ExperimentConfig { samples: 500, ..cfg };
    let a = run_property_suite(&suite_cfg, Suite::All).map_err(|e| e.to_string())?;
    let b = run_property_suite(&suite_cfg, Suite::All).map_err(|e| e.to_string())?;
    require!(a.canonical_json().unwrap() == b.canonical_json().unwrap(), "suite reports differ");
    Ok("experiment and suite reports are byte-identical across runs".into())
}

fn fault_injection() -> Outcome {
    let report = run_property_suite(&config("holed-single-term"), Suite::Cseq).map_err(|e| e.to_string())?;
    let suite = &report.suites["cseq"];
    let [runs, bad] = tally(&report, "cseq", "closedness");
    require!(!suite.passed && bad > 0, "holed builder passed closedness ({runs} checks)");
    let cx = suite
        .counterexamples
        .iter()
        .find(|c| c.name == "closedness")
        .ok_or("no closedness counterexample")?;
    let Check::Closedness { alpha, xi } = &cx.check else {
        return Err(format!("unexpected payload {:?}", cx.check));
    };
    let json = serde_json::to_string(cx).unwrap();
    let back = serde_json::from_str(&json).unwrap();
    require!(matches!(replay(&back), Ok(ReplayOutcome::Reproduced(_))), "counterexample does not replay");
    Ok(format!("{bad}/{runs} closedness violations, e.g. alpha = {alpha}, xi = {xi}; replay reproduces"))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "concatenation identity", concatenation),
        (2, "lambda2 bound and dichotomy", lambda2),
        (3, "coherence and ladder isolation", coherence),
        (4, "image identity for three painters", image_identity),
        (5, "closedness of d", d_closedness),
        (6, "hand-computed walks and colors", hand_oracles),
        (7, "oracle equivalence", oracle_equivalence),
        (8, "determinism", determinism),
        (9, "planted defect detected", fault_injection),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, name, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} FAIL  {name}: {why} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
