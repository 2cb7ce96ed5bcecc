//! End-to-end checks of the `dpsqkd` binary: exit codes, output headers,
//! config-file precedence, and the emitted file set.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_dpsqkd")
}

fn tmp() -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn dpsqkd")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "dpsqkd {args:?} exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn unknown_flags_exit_2() {
    assert_eq!(run(&["rate", "--frobnicate", "1"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--protocols", "bb85"]).status.code(), Some(2));
    assert_eq!(
        run(&["optimize", "--protocol", "bb84-single", "--loss-db", "5"])
            .status
            .code(),
        Some(2),
        "no free nbar to optimize is a usage error"
    );
    assert_eq!(
        run(&["rate", "--protocol", "dps", "--loss-db", "20"]).status.code(),
        Some(2),
        "missing --nbar"
    );
}

#[test]
fn domain_violations_exit_3() {
    assert_eq!(
        run(&[
            "rate",
            "--protocol",
            "dps",
            "--loss-db",
            "20",
            "--nbar",
            "0.7"
        ])
        .status
        .code(),
        Some(3),
        "DPS nbar above 1/2"
    );
    assert_eq!(
        run(&[
            "rate",
            "--protocol",
            "dps",
            "--loss-db",
            "20",
            "--nbar",
            "0.2",
            "--baseline-error",
            "0.7"
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        run(&[
            "simulate",
            "--attack",
            "none",
            "--nbar",
            "0.5",
            "--transmission",
            "0.5",
            "--pulses",
            "1000"
        ])
        .status
        .code(),
        Some(3),
        "outside the one-click-per-slot regime"
    );
}

#[test]
fn beyond_cutoff_exits_4() {
    assert_eq!(
        run(&["optimize", "--protocol", "bb84-poisson", "--loss-db", "25"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn outputs_carry_version_params_and_schema() {
    let text = stdout(&["rate", "--protocol", "dps", "--loss-db", "20", "--nbar", "0.2"]);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# dpsqkd v"));
    assert_eq!(lines.next().unwrap(), "# command: rate");
    let params = lines.next().unwrap();
    assert!(params.starts_with("# params:"));
    for needle in ["loss_db=20", "nbar=0.2", "dark_count=0.00001", "baseline_error=0.01"] {
        assert!(params.contains(needle), "{params} missing {needle}");
    }
    assert!(lines.next().unwrap().starts_with("# columns: loss_db,"));
    assert_eq!(lines.count(), 1, "exactly one data row");
}

#[test]
fn sweep_row_count_matches_grid() {
    let text = stdout(&[
        "sweep",
        "--loss-min",
        "0",
        "--loss-max",
        "60",
        "--loss-step",
        "1",
        "--protocols",
        "dps,bb84-poisson,bb84-single,dps-seq",
    ]);
    let data_rows = text.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(data_rows, 61 * 4);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tmp();
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        "loss_db = 10\nnbar = 0.1\nprotocol = dps\ndark_count = 0\nbaseline_error = 0\n",
    )
    .unwrap();
    let from_config = stdout(&["rate", "--config", cfg.to_str().unwrap()]);
    assert!(from_config.contains("\n10,"), "loss from config:\n{from_config}");
    // Flag wins over the config value; everything else still comes from it.
    let overridden = stdout(&["rate", "--config", cfg.to_str().unwrap(), "--loss-db", "20"]);
    assert!(overridden.contains("\n20,"), "loss from flag:\n{overridden}");
    assert!(overridden.contains("nbar=0.1"));
    // Unknown keys are rejected.
    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "frobnicate = 1\n").unwrap();
    assert_eq!(
        run(&["rate", "--config", bad.to_str().unwrap(), "--nbar", "0.1"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn error_correction_table_lowers_the_rate() {
    let dir = tmp();
    let table = dir.join("fec.tsv");
    std::fs::write(&table, "0.00 1.15\n0.05 1.25\n0.12 1.35\n").unwrap();
    let base = stdout(&["rate", "--protocol", "dps", "--loss-db", "10", "--nbar", "0.2"]);
    let realistic = stdout(&[
        "rate",
        "--protocol",
        "dps",
        "--loss-db",
        "10",
        "--nbar",
        "0.2",
        "--f-ec",
        table.to_str().unwrap(),
    ]);
    let rate_of = |text: &str| -> f64 {
        text.lines()
            .find(|l| !l.starts_with('#'))
            .unwrap()
            .rsplit(',')
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(
        rate_of(&realistic) < rate_of(&base),
        "a code above the Shannon limit must cost key"
    );
}

#[test]
fn oracle_emits_gap_table() {
    let text = stdout(&["oracle", "--grid-points", "40", "--e-tol", "0.004"]);
    assert!(text.contains("# columns: e_bin,analytic_pc0,bruteforce_pc0,gap"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 16);
    // First bin is the no-attack point.
    assert!(rows[0].starts_with("0,0.5,"));
}

#[test]
fn figures_emit_csv_and_svg() {
    let dir = tmp().join("figs");
    let out = run(&["figures", "--out-dir", dir.to_str().unwrap()]);
    assert!(out.status.success());
    for name in [
        "rate_vs_loss.csv",
        "rate_vs_loss.svg",
        "individual_vs_sequential.csv",
        "individual_vs_sequential.svg",
    ] {
        let path = dir.join(name);
        let content = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("missing {}: {e}", path.display()));
        if name.ends_with(".csv") {
            assert!(content.starts_with("# dpsqkd v"));
        } else {
            assert!(content.starts_with("<svg"));
            assert!(content.trim_end().ends_with("</svg>"));
        }
    }
    // The comparison chart carries both curves.
    let svg = std::fs::read_to_string(dir.join("individual_vs_sequential.svg")).unwrap();
    assert!(svg.contains("individual attacks") && svg.contains("sequential attacks"));
}

#[test]
fn simulate_echoes_seed_and_is_quiet_on_timing() {
    let out = run(&[
        "simulate",
        "--attack",
        "beamsplitter-delayed",
        "--pulses",
        "100000",
        "--nbar",
        "0.1",
        "--transmission",
        "0.5",
        "--seed",
        "77",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("seed=77"), "params echo the seed");
    let row = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(row.starts_with("77,beamsplitter-delayed,100000,"));
    // Timing lives on stderr so stdout stays byte-stable.
    assert!(String::from_utf8(out.stderr).unwrap().contains("wall time"));
    assert!(!text.contains("wall time"));
}
