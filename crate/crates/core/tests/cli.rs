mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::instance_path;
use jacring::cli::ReportDocument;

fn jacring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(cmd: &str, instance: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, instance.to_str().unwrap()];
    args.extend_from_slice(extra);
    jacring(&args)
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn smooth_quintic_torelli_exits_zero() {
    let out = run_on("torelli", &instance_path("fermat_quintic"), &[]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("injective"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = jacring(&["frobnicate", "x.toml"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn missing_file_is_a_usage_error() {
    let out = run_on("analyze", Path::new("/nonexistent/instance.toml"), &[]);
    assert_eq!(code(&out), 1);
}

#[test]
fn nodal_quartic_fails_the_hypotheses() {
    let out = run_on("torelli", &instance_path("nodal_quartic"), &[]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("hypotheses_not_satisfied"));
}

#[test]
fn undeclared_node_fails_the_certificate() {
    let out = run_on(
        "analyze",
        &instance_path("two_node_quintic_one_declared"),
        &[],
    );
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("certificate_failed"));
}

#[test]
fn tiny_budget_exits_four() {
    let out = run_on(
        "hilbert",
        &instance_path("fermat_quartic"),
        &["--degree-range", "0..8", "--budget", "10"],
    );
    assert_eq!(code(&out), 4);
}

#[test]
fn smooth_point_declared_as_singular_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("smooth_point.toml");
    let text = std::fs::read_to_string(instance_path("fermat_quartic"))
        .unwrap()
        .replace(
            "singular_points = []",
            r#"singular_points = [["1", "0", "0", "0"]]"#,
        );
    std::fs::write(&path, text).unwrap();
    let out = run_on("analyze", &path, &[]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("usage_error"));
}

#[test]
fn json_round_trips_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut canon = Vec::new();
    for k in 0..2 {
        let json = dir.path().join(format!("run{k}.json"));
        let out = run_on(
            "duality",
            &instance_path("one_node_quintic"),
            &["--json", json.to_str().unwrap()],
        );
        assert_eq!(code(&out), 0);
        let text = std::fs::read_to_string(&json).unwrap();
        let doc = ReportDocument::from_json(&text).unwrap();
        assert_eq!(doc.to_json(), text);
        assert_eq!(doc.canonical.exit_code, 0);
        canon.push(doc.canonical_json());
    }
    assert_eq!(canon[0], canon[1]);
}

#[test]
fn hilbert_table_matches_the_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("h.json");
    let out = run_on(
        "hilbert",
        &instance_path("fermat_quartic"),
        &["--degree-range", "0..8", "--json", json.to_str().unwrap()],
    );
    assert_eq!(code(&out), 0);
    let doc = ReportDocument::from_json(&std::fs::read_to_string(json).unwrap()).unwrap();
    let jacring::cli::CommandResult::Hilbert { rows } = doc.canonical.result else {
        panic!("not a hilbert report");
    };
    let got: Vec<usize> = rows.iter().map(|r| r.a_mod_j).collect();
    let want: Vec<usize> = (0..=8).map(|m| common::hilbert_oracle(4, 3, m)).collect();
    assert_eq!(got, want);
}

#[test]
fn odd_dimension_warns_unless_strict() {
    let path = instance_path("fermat_cubic_threefold");
    let lax = run_on("hilbert", &path, &["--degree-range", "0..3"]);
    assert_eq!(code(&lax), 0);
    assert!(stdout(&lax).contains("odd"));
    let strict = run_on(
        "hilbert",
        &path,
        &["--degree-range", "0..3", "--strict-parity"],
    );
    assert_eq!(code(&strict), 1);
}

#[test]
fn koszul_rows_are_consistent() {
    let out = run_on(
        "koszul",
        &instance_path("one_node_quintic"),
        &["--degree-range", "0..15"],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("koszul_consistent"));
}
