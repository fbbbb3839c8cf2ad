//! End-to-end tests of the curvestat binary: flag validation, exit codes,
//! output schemas, and reproducibility of the means.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvestat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON record")
}

fn tmp_file(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("curvestat-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn phi_example_matches_the_closed_form_and_reruns_identically() {
    let args = ["phi", "--r", "1", "--R", "4", "--n", "200000", "--seed", "7"];
    let first = stdout_json(&run(&args));
    let mean = first["mean"].as_f64().unwrap();
    let stderr = first["stderr"].as_f64().unwrap();
    let closed = (1.0 + 1.0 / std::f64::consts::TAU).powi(-3)
        - (1.0 + 4.0 / std::f64::consts::TAU).powi(-3);
    assert!(
        (mean - closed).abs() <= 3.0 * stderr,
        "phi estimate {mean} +- {stderr} vs closed form {closed}"
    );

    let second = stdout_json(&run(&args));
    assert_eq!(
        mean.to_bits(),
        second["mean"].as_f64().unwrap().to_bits(),
        "identical seeds must reproduce the mean bit for bit"
    );
}

#[test]
fn validation_failures_exit_2_and_name_the_flag() {
    let cases: &[(&[&str], &str)] = &[
        (&["phi", "--r", "4", "--R", "1", "--n", "10"], "r must be < R"),
        (&["gauss-bonnet", "--lines", "10"], "one of --d and --poly"),
        (&["phi", "--r", "1", "--R", "4", "--n", "10", "--threads", "0"], "threads must be at least 1"),
        (&["phi", "--r", "1", "--R", "4", "--n", "10", "--format", "csv"], "format csv"),
        (&["inflections", "--d", "7"], "d must be between 2 and 6"),
    ];
    for (args, needle) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "stderr for {args:?} was: {err}");
    }
}

#[test]
fn gauss_bonnet_on_a_line_reproduces_four_pi() {
    let out = stdout_json(&run(&["gauss-bonnet", "--d", "1", "--lines", "100", "--seed", "1"]));
    let mean = out["mean"].as_f64().unwrap();
    assert!(
        (mean - 4.0 * std::f64::consts::PI).abs() < 1e-9,
        "total curvature of a line was {mean}"
    );
    assert_eq!(out["details"]["target"].as_f64().unwrap(), 4.0 * std::f64::consts::PI);
}

#[test]
fn csv_tables_carry_the_documented_headers() {
    let cases: &[(&[&str], &str)] = &[
        (
            &["curvature-hist", "--d", "2", "--curves", "2", "--lines", "20", "--bins", "4", "--lo", "0", "--hi", "6.28", "--format", "csv"],
            "bin_lo,bin_hi,mass,count",
        ),
        (
            &["gauss-bonnet", "--d", "2", "--lines", "10", "--format", "csv"],
            "re_x0,im_x0,re_x1,im_x1,re_x2,im_x2,K,discarded",
        ),
        (
            &["lemma-f0", "--grid", "16", "--format", "csv"],
            "re_x0,im_x0,re_x1,im_x1,re_x2,im_x2,K,discarded",
        ),
        (&["bergman", "--d-list", "8,16", "--pairs", "5", "--format", "csv"], "d,sup_err,k"),
        (&["inflections", "--d", "3", "--curves", "1", "--format", "csv"], "curve,count"),
    ];
    for (args, header) in cases {
        let out = run(args);
        assert!(out.status.success(), "args {args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8_lossy(&out.stdout);
        let first = text.lines().next().unwrap_or("");
        assert_eq!(&first, header, "args {args:?}");
        assert!(text.lines().count() > 1, "table for {args:?} has no rows");
    }
}

#[test]
fn thread_count_does_not_change_the_mean() {
    let base = ["expected-kappa", "--d", "4", "--r", "1", "--R", "4", "--curves", "20", "--lines", "50", "--seed", "3"];
    let one = stdout_json(&run(&base));
    let mut with_threads: Vec<&str> = base.to_vec();
    with_threads.extend_from_slice(&["--threads", "4"]);
    let four = stdout_json(&run(&with_threads));
    assert_eq!(
        one["mean"].as_f64().unwrap().to_bits(),
        four["mean"].as_f64().unwrap().to_bits(),
        "band fraction must not depend on the worker count"
    );
}

#[test]
fn out_flag_writes_the_record_to_a_file() {
    let path = tmp_file("out.json");
    let out = run(&[
        "phi", "--r", "1", "--R", "4", "--n", "1000", "--seed", "2", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "with --out nothing goes to stdout");
    let text = std::fs::read_to_string(&path).expect("output file exists");
    std::fs::remove_file(&path).ok();
    let rec: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(rec["command"], "phi");
    assert!(rec["mean"].as_f64().unwrap().is_finite());
}

#[test]
fn scientific_notation_counts_are_accepted() {
    let out = stdout_json(&run(&["phi", "--r", "1", "--R", "4", "--n", "1e3", "--seed", "4"]));
    assert_eq!(out["params"]["n"].as_u64(), Some(1000));
    assert_eq!(out["n"].as_u64(), Some(1000));
}

#[test]
fn fermat_cubic_has_nine_inflections() {
    let path = tmp_file("fermat.json");
    std::fs::write(
        &path,
        r#"{"degree":3,"coeffs":[
            {"i":3,"j":0,"k":0,"re":1.0,"im":0.0},
            {"i":0,"j":3,"k":0,"re":1.0,"im":0.0},
            {"i":0,"j":0,"k":3,"re":1.0,"im":0.0}]}"#,
    )
    .unwrap();
    let out = stdout_json(&run(&["inflections", "--poly", path.to_str().unwrap()]));
    std::fs::remove_file(&path).ok();
    assert_eq!(out["mean"].as_f64(), Some(9.0));
    assert_eq!(out["n"].as_u64(), Some(1));
}

#[test]
fn numerically_degenerate_input_exits_3() {
    // A product of two lines: singular Hessian, no inflection count.
    let path = tmp_file("conic.json");
    std::fs::write(&path, r#"{"degree":2,"coeffs":[{"i":1,"j":1,"k":0,"re":1.0,"im":0.0}]}"#)
        .unwrap();
    let out = run(&["inflections", "--poly", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_poly_file_exits_2() {
    let path = tmp_file("broken.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = run(&["gauss-bonnet", "--poly", path.to_str().unwrap(), "--lines", "10"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
}
