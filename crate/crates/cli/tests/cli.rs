//! End-to-end checks of the command-line surface: exit codes, output
//! schemas, CSV/JSON value equivalence and byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bchubbard"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn usage_errors_exit_with_code_2() {
    let out = run(&["phase", "--grid", "oops"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "scan", "--region", "I", "--axis", "sideways", "--range", "-1:0", "--u", "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_with_code_3() {
    // range crossing out of the requested phase
    let out = run(&[
        "scan", "--region", "I", "--axis", "mu", "--range", "-3:1", "--points", "5", "--u", "4",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // unknown phase for this scan machinery
    let out = run(&[
        "scan", "--region", "IV", "--axis", "mu", "--range", "-3:-1", "--points", "5", "--u", "9",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn phase_single_point_and_region_ii_line() {
    let out = run(&[
        "phase",
        "--u-range",
        "-0.5:0.5",
        "--mu-range",
        "-0.5:0.5",
        "--grid",
        "3x3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut ii_rows = Vec::new();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 7);
        if cols[2] == "II" {
            ii_rows.push(cols[1].to_string());
        }
    }
    // the three-species cells sit on the mu = 0 line only
    assert!(!ii_rows.is_empty());
    for mu in ii_rows {
        assert_eq!(mu.parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn phase_single_point_query() {
    let out = run(&[
        "phase",
        "--u-range",
        "0:0",
        "--mu-range",
        "0:0",
        "--grid",
        "1x1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].split(',').nth(2).unwrap(), "II");
}

#[test]
fn csv_and_json_outputs_carry_identical_values() {
    let args = [
        "phase",
        "--u-range",
        "-6:6",
        "--mu-range",
        "-4:4",
        "--grid",
        "7x5",
    ];
    let csv = stdout(&run(&args));
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let json_text = stdout(&run(&json_args));
    let parsed: serde_json::Value = serde_json::from_str(&json_text).unwrap();
    let rows = parsed.as_array().unwrap();
    let csv_rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), csv_rows.len());
    for (jrow, crow) in rows.iter().zip(&csv_rows) {
        let cols: Vec<&str> = crow.split(',').collect();
        for (key, idx) in [
            ("u", 0usize),
            ("mu", 1),
            ("n_s", 3),
            ("n_d", 4),
            ("energy", 5),
            ("odlro", 6),
        ] {
            let jv = jrow[key].as_f64().unwrap();
            let cv: f64 = cols[idx].parse().unwrap();
            assert_eq!(jv.to_bits(), cv.to_bits(), "field {key}");
        }
        assert_eq!(jrow["phase"].as_str().unwrap(), cols[2]);
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = std::env::temp_dir();
    let a = dir.join("bch_cli_det_a.csv");
    let b = dir.join("bch_cli_det_b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "scan",
            "--region",
            "II",
            "--axis",
            "u",
            "--range",
            "-3:-1",
            "--points",
            "4",
            "--n",
            "0.5",
            "--r",
            "1",
            "--samples",
            "400",
            "--seed",
            "12",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b);
}

#[test]
fn kspace_iso_correlation_column() {
    let out = run(&[
        "kspace",
        "--n",
        "1",
        "--u-range",
        "-3.9:3.9",
        "--points",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for line in stdout(&out).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let q: f64 = cols[4].parse().unwrap();
        assert!((q - 0.5).abs() < 1e-12);
    }
}

#[test]
fn monogamy_eta_table_decreases_with_length() {
    let out = run(&["monogamy", "--family", "eta", "--l-max", "20", "--nd", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let ratios: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(7).unwrap().parse().unwrap())
        .collect();
    assert!(ratios.len() > 10);
    for w in ratios.windows(2) {
        assert!(w[1] < w[0], "ratio not decreasing: {} -> {}", w[0], w[1]);
    }
}

#[test]
fn region1_scan_with_derivatives_and_fit() {
    let out = bin()
        .args([
            "scan",
            "--region",
            "I",
            "--axis",
            "mu",
            "--range",
            "-0.0201:-0.0001",
            "--points",
            "41",
            "--u",
            "4",
            "--r",
            "1",
            "--derivatives",
            "--fit",
            "0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "r,mu,i_bits,c_bits,q_bits,concurrence,negativity,s_single_bits,method,di,dc,dq"
    );
    // interior rows carry derivative values, endpoints stay empty
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows[0].ends_with(",,,"));
    assert!(!rows[rows.len() / 2].ends_with(",,"));
    // fit summaries land on stderr
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("dq_algebraic"), "stderr: {err}");
}

#[test]
fn config_file_supplies_defaults_but_flags_win() {
    let dir = std::env::temp_dir();
    let cfg = dir.join("bch_cli_cfg.toml");
    std::fs::write(&cfg, "samples = 400\nseed = 12\nformat = \"csv\"\n").unwrap();
    let base: Vec<String> = [
        "scan", "--region", "II", "--axis", "u", "--range", "-3:-1", "--points", "3", "--n", "0.5",
        "--r", "1",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();

    // config-driven run matches the explicit-flag run byte for byte
    let out_cfg = dir.join("bch_cli_cfg_out.csv");
    let mut args = base.clone();
    args.extend([
        "--config".into(),
        cfg.to_str().unwrap().into(),
        "--out".into(),
        out_cfg.to_str().unwrap().into(),
    ]);
    assert_eq!(bin().args(&args).output().unwrap().status.code(), Some(0));

    let out_flags = dir.join("bch_cli_flags_out.csv");
    let mut args = base.clone();
    args.extend([
        "--samples".into(),
        "400".into(),
        "--seed".into(),
        "12".into(),
        "--out".into(),
        out_flags.to_str().unwrap().into(),
    ]);
    assert_eq!(bin().args(&args).output().unwrap().status.code(), Some(0));
    assert_eq!(
        std::fs::read(&out_cfg).unwrap(),
        std::fs::read(&out_flags).unwrap()
    );

    // an explicit flag overrides the config value
    let out_override = dir.join("bch_cli_override_out.csv");
    let mut args = base;
    args.extend([
        "--config".into(),
        cfg.to_str().unwrap().into(),
        "--seed".into(),
        "99".into(),
        "--out".into(),
        out_override.to_str().unwrap().into(),
    ]);
    assert_eq!(bin().args(&args).output().unwrap().status.code(), Some(0));
    assert_ne!(
        std::fs::read(&out_cfg).unwrap(),
        std::fs::read(&out_override).unwrap()
    );
}

#[test]
fn verify_monogamy_suite_passes_from_cli() {
    let out = run(&["verify", "--suite", "monogamy"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("PASS 08-monogamy"));
    assert!(text.contains("OK: 1/1"));
    // an unknown suite is a bad flag value
    let out = run(&["verify", "--suite", "everything"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_json_round_trips_the_schema() {
    let out = run(&[
        "scan",
        "--region",
        "III",
        "--axis",
        "n_d",
        "--range",
        "0.05:0.45",
        "--points",
        "5",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let series = parsed.as_array().unwrap();
    assert_eq!(series.len(), 1);
    let points = series[0]["points"].as_array().unwrap();
    assert_eq!(points.len(), 5);
    for p in points {
        assert!(p["record"]["q"].as_f64().unwrap() > 0.0);
        assert_eq!(p["record"]["method"].as_str().unwrap(), "analytic_xstate");
    }
}

#[allow(dead_code)]
fn artifacts() -> PathBuf {
    std::env::temp_dir()
}
