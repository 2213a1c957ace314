//! End-to-end tests of the `ordermin` binary: flag parsing, config-file
//! merging, exit codes, CSV output, and the acceptance subcommand.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ordermin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordermin"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn budget_prints_the_exact_count() {
    let output = ordermin(&["budget", "--dim", "2", "--delta", "0.1"]);
    assert!(output.status.success(), "{}", stderr(&output));
    assert_eq!(stdout(&output).trim(), "11");

    let output = ordermin(&["budget", "--dim", "20", "--delta", "0.05"]);
    assert_eq!(stdout(&output).trim(), "305");
}

#[test]
fn budget_rejects_out_of_range_accuracy() {
    let output = ordermin(&["budget", "--dim", "2", "--delta", "0"]);
    assert_eq!(output.status.code(), Some(2), "{}", stderr(&output));
    assert!(stderr(&output).contains("delta"), "{}", stderr(&output));
}

#[test]
fn run_prints_a_summary_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let output = ordermin(&[
        "run",
        "--benchmark",
        "quadratic",
        "--dim",
        "2",
        "--algorithm",
        "exact_ngd",
        "--D",
        "5",
        "--iters",
        "50",
        "--seed",
        "3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("status: completed"), "{text}");
    assert!(text.contains("guaranteed projection"), "{text}");
    let lines: Vec<String> = fs::read_to_string(&csv)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(lines.len(), 51, "header + 50 rows");
    assert_eq!(lines[0], "iter,h_k,queries_cum,f_gap,v_f,dist");
}

#[test]
fn comparison_run_reports_its_query_total() {
    let output = ordermin(&[
        "run",
        "--benchmark",
        "quadratic",
        "--dim",
        "2",
        "--algorithm",
        "comparison_adangd",
        "--D",
        "3",
        "--epsilon",
        "0.3",
        "--seed",
        "1",
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(
        text.contains("comparison queries: 21600"),
        "expected the planned 1800 x 12 query total in: {text}"
    );
    assert!(text.contains("(met)"), "{text}");
}

#[test]
fn mode_mismatches_exit_with_config_code() {
    // comparison_adangd derives its iteration count; passing one is a
    // configuration error, not a crash.
    let output = ordermin(&[
        "run",
        "--benchmark",
        "quadratic",
        "--dim",
        "2",
        "--algorithm",
        "comparison_adangd",
        "--D",
        "3",
        "--epsilon",
        "0.3",
        "--iters",
        "100",
    ]);
    assert_eq!(output.status.code(), Some(2), "{}", stderr(&output));
    assert!(stderr(&output).contains("iters"), "{}", stderr(&output));

    let output = ordermin(&[
        "run",
        "--benchmark",
        "quadratic",
        "--dim",
        "2",
        "--algorithm",
        "no_such_algorithm",
        "--D",
        "3",
        "--iters",
        "10",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr(&output).contains("known algorithms"),
        "{}",
        stderr(&output)
    );

    let output = ordermin(&[
        "run",
        "--benchmark",
        "waffle",
        "--dim",
        "2",
        "--algorithm",
        "exact_ngd",
        "--D",
        "3",
        "--iters",
        "10",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("waffle"), "{}", stderr(&output));
}

#[test]
fn config_files_merge_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.conf");
    fs::write(
        &config,
        "# a small exact-gradient run\nbenchmark = quadratic\ndim = 2\nalgorithm = exact_ngd\nD = 5\niters = 50\nseed = 3\n",
    )
    .unwrap();
    let csv = dir.path().join("short.csv");
    let output = ordermin(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--iters",
        "25",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr(&output));
    let rows = fs::read_to_string(&csv).unwrap().lines().count();
    assert_eq!(rows, 26, "the flag's 25 iterations override the file's 50");

    let output = ordermin(&["run", "--config", "/nonexistent/path.conf"]);
    assert_eq!(output.status.code(), Some(2));

    let bad = dir.path().join("bad.conf");
    fs::write(&bad, "benchmark quadratic\n").unwrap();
    let output = ordermin(&["run", "--config", bad.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr(&output).contains("key = value"),
        "{}",
        stderr(&output)
    );
}

#[test]
fn identical_invocations_write_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args = |path: &Path| {
        vec![
            "run".to_string(),
            "--benchmark".into(),
            "log_quadratic".into(),
            "--dim".into(),
            "3".into(),
            "--algorithm".into(),
            "approx_ngd_with_gde".into(),
            "--D".into(),
            "3".into(),
            "--iters".into(),
            "20".into(),
            "--delta".into(),
            "0.2".into(),
            "--seed".into(),
            "9".into(),
            "--out".into(),
            path.to_str().unwrap().into(),
        ]
    };
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    for path in [&first, &second] {
        let output = Command::new(env!("CARGO_BIN_EXE_ordermin"))
            .args(args(path))
            .output()
            .unwrap();
        assert!(output.status.success(), "{}", stderr(&output));
    }
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn verify_runs_the_acceptance_suite() {
    let output = ordermin(&["verify"]);
    let text = stdout(&output);
    assert!(output.status.success(), "stdout:\n{text}\nstderr:\n{}", stderr(&output));
    assert_eq!(
        text.matches("[PASS]").count(),
        7,
        "expected seven passing criteria in:\n{text}"
    );
    assert!(text.contains("acceptance: 7/7 criteria passed"), "{text}");
}
