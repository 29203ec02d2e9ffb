//! End-to-end checks of the command-line interface.

use std::io::Write;
use std::process::{Command, Output};

fn phsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn validate_accepts_fixture_pair() {
    let out = phsim(&["validate", "--observable", "eq5.A", "--metric", "eta_pos"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("observable,metric,dim,residual,metric_definiteness\n"));
    assert!(text.contains("eq5.A,eta_pos,3,"));
}

#[test]
fn validate_rejects_identity_metric_for_eq5() {
    let out = phsim(&["validate", "--observable", "eq5.A", "--metric", "identity"]);
    assert!(!out.status.success());
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("stderr is one JSON object");
    assert_eq!(err["error"], "NotPseudoHermitian");
}

#[test]
fn unknown_fixture_name_reports_tag() {
    let out = phsim(&["validate", "--observable", "eq7.A", "--metric", "eta_pos"]);
    assert!(!out.status.success());
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    // eq7.A is not a fixture and not a readable file.
    assert_eq!(err["error"], "Backend");
}

#[test]
fn spectrum_signs_for_indefinite_metric() {
    let out = phsim(&["spectrum", "--observable", "eq6.B", "--metric", "eta_indef"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,eigenvalue,sign,eta_gram_residual,completeness_residual"
    );
    let signs: Vec<&str> = lines
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(signs, ["1", "-1", "1"]);
}

#[test]
fn measure_reports_expectation_at_pi_over_four() {
    let out = phsim(&[
        "measure",
        "--observable",
        "eq5.A",
        "--metric",
        "eta_pos",
        "--theta2",
        "0.7853981633974483",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let data = text.lines().nth(1).unwrap();
    let expectation: f64 = data.split(',').next().unwrap().parse().unwrap();
    assert!((expectation - 0.3).abs() < 1e-12);
}

#[test]
fn sample_columns_and_count_conservation() {
    let out = phsim(&[
        "sample",
        "--observable",
        "eq5.A",
        "--metric",
        "eta_pos",
        "--theta2",
        "1.0",
        "--trials",
        "50000",
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "k,e_k,s_k,n_k,p_kk_analytic,p_hat");
    let mut p_hat_sum = 0.0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 6);
        let s: f64 = fields[2].parse().unwrap();
        let p_hat: f64 = fields[5].parse().unwrap();
        p_hat_sum += s * p_hat;
    }
    assert!((p_hat_sum - 1.0).abs() < 1e-12);
}

#[test]
fn dilate_header_is_stable() {
    let out = phsim(&["dilate", "--observable", "eq5.A", "--metric", "eta_pos"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("k,weight,normalizer,v0_re,v0_im"));
    assert!(header.ends_with("f1_first,f1_theta,f1_alpha,f1_beta"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn uncertainty_row_shape() {
    let out = phsim(&[
        "uncertainty",
        "--observable-a",
        "eq6.A",
        "--observable-b",
        "eq6.B",
        "--metric",
        "eta_indef",
        "--theta2",
        "1.0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta1,theta2,var_a,var_b,re_cross,im_cross,R,mode,std_error_R"
    );
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields[7], "analytic");
    let r: f64 = fields[6].parse().unwrap();
    assert!(r <= 1.0 + 1e-6);
}

#[test]
fn config_file_drives_sample() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.json");
    let mut file = std::fs::File::create(&path).unwrap();
    write!(
        file,
        r#"{{"observable": "eq5.B", "metric": "eta_pos",
            "state": {{"theta1": 0.0, "theta2": 0.5}},
            "trials": 20000, "seed": 9}}"#
    )
    .unwrap();
    let out = phsim(&["sample", "--config", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    let total: u64 = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse::<u64>().unwrap())
        .sum();
    assert!(total <= 20000);
}

#[test]
fn inline_matrix_files_resolve() {
    let dir = tempfile::tempdir().unwrap();
    let obs_path = dir.path().join("obs.json");
    let metric_path = dir.path().join("metric.json");
    // A Hermitian observable under the identity metric.
    std::fs::write(&obs_path, "[[[0,0],[1,0]],[[1,0],[0,0]]]").unwrap();
    std::fs::write(&metric_path, "[[[1,0],[0,0]],[[0,0],[1,0]]]").unwrap();
    let out = phsim(&[
        "validate",
        "--observable",
        obs_path.to_str().unwrap(),
        "--metric",
        metric_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains(",2,"));
}

#[test]
fn json_format_emits_objects() {
    let out = phsim(&[
        "spectrum",
        "--observable",
        "eq5.A",
        "--metric",
        "eta_pos",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[0]["eigenvalue"].is_number());
    assert_eq!(rows[2]["sign"], 1.0);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spectrum.csv");
    let out = phsim(&[
        "spectrum",
        "--observable",
        "eq5.A",
        "--metric",
        "eta_pos",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("k,eigenvalue,sign,"));
}

#[test]
fn reproduce_fig3a_contains_expected_value_at_pi_over_four() {
    // 4 grid points over [0, pi) puts index 1 at theta2 = pi/4.
    let out = phsim(&[
        "reproduce",
        "--figure",
        "fig3a",
        "--grid-points",
        "4",
        "--trials",
        "1000",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(2).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    let expectation: f64 = fields[3].parse().unwrap();
    assert!((expectation - 0.3).abs() < 1e-12);
    assert_eq!(*fields.last().unwrap(), "ok");
}

#[test]
fn reproduce_runs_are_deterministic() {
    let run = || {
        phsim(&[
            "reproduce",
            "--figure",
            "fig4c",
            "--grid-points",
            "5",
            "--trials",
            "10000",
            "--seed",
            "7",
        ])
    };
    let first = run();
    let second = run();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let changed = phsim(&[
        "reproduce",
        "--figure",
        "fig4c",
        "--grid-points",
        "5",
        "--trials",
        "10000",
        "--seed",
        "8",
    ]);
    assert_ne!(first.stdout, changed.stdout);
}
