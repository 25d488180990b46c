//! End-to-end checks of the command-line contract: output schemas, exit
//! codes, and byte-determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xxz-ring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn spectrum_json_counts_and_exit() {
    let out = run(&["spectrum", "--L", "8", "--N", "3", "--delta", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut total = 0usize;
    let mut union_holds = false;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        if let Some(evs) = v.get("eigenvalues") {
            total += evs.as_array().unwrap().len();
            // ascending within the fiber
            let nums: Vec<f64> = evs
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_f64().unwrap())
                .collect();
            assert!(nums.windows(2).all(|w| w[0] <= w[1]));
        } else {
            assert_eq!(v["check"], "spectrum_union");
            union_holds = v["holds"].as_bool().unwrap();
        }
    }
    assert_eq!(total, 56);
    assert!(union_holds);
}

#[test]
fn spectrum_trivial_sector_single_row() {
    let out = run(&["spectrum", "--L", "8", "--N", "0", "--delta", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["gamma"], 0);
    assert_eq!(first["eigenvalues"].as_array().unwrap().len(), 1);
    assert_eq!(first["eigenvalues"][0].as_f64().unwrap(), 0.0);
    assert_eq!(text.lines().count(), 2); // the single fiber row plus the union row
}

#[test]
fn malformed_parameters_exit_two() {
    let out = run(&["spectrum", "--L", "abc", "--N", "3", "--delta", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["spectrum", "--L", "8", "--N", "9", "--delta", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["spectrum", "--L", "8", "--N", "3", "--delta", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn entropy_csv_schema_and_determinism() {
    let args = ["entropy", "--N", "2", "--theta", "0.2", "--delta", "50", "--L", "12"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "output must be byte-identical");
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "L,N,gamma,energy,entropy,entropy_over_lnL,ising_reference"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 12);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        let reference: f64 = cols[6].parse().unwrap();
        assert!((reference - 2.0 / 12.0).abs() < 1e-15);
    }
}

#[test]
fn entropy_epsilon_path_reports_skips() {
    let out = run(&[
        "entropy", "--epsilon", "0.05", "--theta", "0.0625", "--delta", "100", "--L", "12,14,16",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let skips = text
        .lines()
        .filter(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            v.get("skipped").map(|s| s.as_bool().unwrap()) == Some(true)
        })
        .count();
    assert_eq!(skips, 3); // ⌊εL⌋ < 2 for every requested ring
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("epsilon/2"));
}

#[test]
fn verify_unknown_suite_and_chain_domain() {
    assert_eq!(run(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    // ε outside (0, 1/16) is a usage error for the chain suite
    let out = run(&["verify", "--suite", "main-chain", "--L", "16", "--epsilon", "0.125"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_ssf_deterministic_and_green() {
    let args = ["verify", "--suite", "ssf", "--seed", "7"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let trials: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    // 200 trials × (3 Lp rows + 1 identity row) + 4 log-norm rows
    assert_eq!(trials.len(), 804);
    assert!(trials.iter().all(|v| v["holds"].as_bool().unwrap()));
    // a different seed changes the stream
    let c = run(&["verify", "--suite", "ssf", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn verify_ct_decay_no_violations() {
    let out = run(&["verify", "--suite", "ct-decay", "--L", "12", "--N", "3", "--delta", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 12); // one row per band state
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["check"], "ct_eigenfunction");
        assert!(v["holds"].as_bool().unwrap());
    }
}

#[test]
fn verify_band_rows_per_fiber() {
    let out = run(&["verify", "--suite", "band", "--L", "9", "--N", "3", "--delta", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 9);
}

#[test]
fn out_flag_matches_stdout_bytes() {
    let tmp = std::env::temp_dir().join("xxz_ring_cli_out_test.json");
    let path = tmp.to_str().unwrap();
    let direct = run(&["verify", "--suite", "fourier", "--L", "8", "--N", "3"]);
    let to_file = run(&["verify", "--suite", "fourier", "--L", "8", "--N", "3", "--out", path]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let written = std::fs::read(path).unwrap();
    assert_eq!(written, direct.stdout);
    let _ = std::fs::remove_file(path);
}

#[test]
fn verify_csv_format_parses() {
    let out = run(&["verify", "--suite", "band", "--L", "8", "--N", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "check,lhs,rhs,slack,holds,params");
    for line in lines {
        assert!(line.starts_with("droplet_band_count,"));
        assert!(line.contains(",true,"));
    }
}
