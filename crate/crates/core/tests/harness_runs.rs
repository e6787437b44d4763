use std::collections::BTreeMap;

use walks_core::coloring::Painter;
use walks_core::cseq::ClauseStatus;
use walks_core::harness::{
    eta_uniformity_scan, replay, run_eta_scan, run_property_suite, run_u1_experiment, sample_family, stream_rng,
    Counterexample, ExperimentConfig, HarnessError, ReplayOutcome, Suite, BANNER,
};
use walks_core::walks::{eta_index, walk};
use walks_core::{CSeqBuilder, CSeqKind, Ordinal};

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

#[test]
fn config_file_with_table_painter() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("labels.txt"), "# min -> color\n0 1\nw 2\nw^2 3\n").unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "builder=single-term\npainter=table:labels.txt\nmu=4\ntrials=3\nblocks=6\nout=report.json\ncsv=rows.csv\n",
    )
    .unwrap();
    let cfg = ExperimentConfig::from_file(dir.path().join("run.cfg")).unwrap();
    let Painter::Table { entries } = &cfg.painter else {
        panic!("expected a table painter");
    };
    assert_eq!(entries.get(&o("w^2")), Some(&3));
    assert_eq!(cfg.out.as_deref(), Some(dir.path().join("report.json").as_path()));

    let report = run_u1_experiment(&cfg).unwrap();
    report.write_json(cfg.out.as_deref().unwrap()).unwrap();
    report.write_csv(cfg.csv.as_deref().unwrap()).unwrap();
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    for key in ["config", "trials", "aggregates", "suites", "banner"] {
        assert!(json.get(key).is_some(), "report lacks {key}");
    }
    assert_eq!(json["banner"], BANNER);
    assert_eq!(json["builder_clauses"]["coherence"], "holds");
    assert_eq!(json["builder_clauses"]["stationary_min_classes"], "unattainable");
    // the table travels inline, so the report alone is enough to rerun
    assert_eq!(json["config"]["painter"]["entries"]["w^2"], 3);
    let rows = std::fs::read_to_string(dir.path().join("rows.csv")).unwrap();
    assert_eq!(rows.lines().next(), Some("trial,eps,hit,tau"));
    assert_eq!(rows.lines().count(), 1 + 3 * cfg.eps_grid.len());
}

#[test]
fn table_colors_must_fit_mu() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("labels.txt"), "0 9\n").unwrap();
    assert!(ExperimentConfig::from_text("painter=table:labels.txt\nmu=4", Some(dir.path())).is_err());
    assert!(ExperimentConfig::from_text("painter=table:labels.txt\nmu=10", Some(dir.path())).is_ok());
}

#[test]
fn insufficient_window() {
    let cfg = ExperimentConfig {
        sigma: 3,
        chi: 4,
        blocks: 10,
        window_lo: o("w^2"),
        window_hi: o("w^2+20"),
        ..ExperimentConfig::default()
    };
    assert!(matches!(
        sample_family(&cfg, &mut stream_rng(0, 0), 0),
        Err(HarnessError::InsufficientWindow { .. })
    ));
    assert!(run_u1_experiment(&cfg).is_err());
}

#[test]
fn eta_scan_recomputed_by_hand() {
    let cfg = ExperimentConfig {
        window_lo: o("w^2+1"),
        blocks: 30,
        seed: 8,
        ..ExperimentConfig::default()
    };
    let seq = CSeqBuilder::new(CSeqKind::SingleTerm, o("w^5"));
    let delta = o("w");
    let fam = sample_family(&cfg, &mut stream_rng(cfg.seed, 0), 0).unwrap();
    let scan = eta_uniformity_scan(&seq, &delta, &fam).unwrap();
    assert_eq!(scan.qualifying_blocks, 30);

    let mut by_hand: BTreeMap<Ordinal, u64> = BTreeMap::new();
    for block in fam.blocks() {
        let lambdas: Vec<Ordinal> = block.iter().map(|b| walk(&seq, &delta, b).unwrap().lambda).collect();
        if lambdas.iter().any(|l| *l != lambdas[0]) {
            continue;
        }
        let eta = &lambdas[0];
        let uniform = block
            .iter()
            .all(|b| walk(&seq, &delta, b).unwrap().rho2 == eta_index(&seq, eta, &delta, b).unwrap());
        if uniform {
            *by_hand.entry(eta.clone()).or_default() += 1;
        }
    }
    assert_eq!(scan.histogram, by_hand);

    let report = run_eta_scan(&cfg, &delta).unwrap();
    assert_eq!(report.trials[0].eta_scan.as_ref().unwrap(), &scan);
    let total: u64 = report.aggregates.eta_histogram.values().sum();
    let per_trial: u64 = report.trials.iter().map(|t| t.eta_scan.as_ref().unwrap().uniform_blocks as u64).sum();
    assert_eq!(total, per_trial);
}

#[test]
fn ladder_walk_suite_at_full_size() {
    let cfg = ExperimentConfig {
        builder: "ladder".into(),
        samples: 10_000,
        ..ExperimentConfig::default()
    };
    let report = run_property_suite(&cfg, Suite::Walks).unwrap();
    let walks = &report.suites["walks"];
    assert!(walks.passed, "{walks:?}");
    assert_eq!(walks.checks["concatenation"], [10_000, 0]);
}

#[test]
fn counterexamples_survive_a_json_round_trip() {
    let cfg = ExperimentConfig {
        builder: "holed-single-term".into(),
        samples: 400,
        ..ExperimentConfig::default()
    };
    let report = run_property_suite(&cfg, Suite::Cseq).unwrap();
    assert!(!report.passed());
    assert_eq!(report.builder_clauses.unwrap().closed, ClauseStatus::Fails);
    let parsed: walks_core::harness::Report = serde_json::from_str(&report.to_json().unwrap()).unwrap();
    let cxs: &Vec<Counterexample> = &parsed.suites["cseq"].counterexamples;
    assert!(!cxs.is_empty());
    for cx in cxs {
        assert!(matches!(replay(cx).unwrap(), ReplayOutcome::Reproduced(_)), "{cx:?}");
    }
    // the same payload against the intact builder passes
    let mut healed = cxs[0].clone();
    healed.config.builder = "single-term".into();
    assert_eq!(replay(&healed).unwrap(), ReplayOutcome::NotReproduced);
}
