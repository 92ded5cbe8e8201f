//! Criterion 12: determinism of reports and exit codes for the example jobs.

use assert_cmd::Command;

fn run(job: &str) -> (Vec<u8>, i32) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.json");
    std::fs::write(&path, job).unwrap();
    let out = Command::cargo_bin("lidstone")
        .unwrap()
        .arg(&path)
        .output()
        .unwrap();
    (out.stdout, out.status.code().unwrap())
}

const BASIS_JOB: &str = r#"{"command":"basis","nodes":{"s":["0","1"],"r":[0,0]},"n_max":2}"#;
const DELTA_JOB: &str = r#"{"command":"delta","nodes":{"s":["1","0"],"r":[0,1]}}"#;
const CLASSIFY_JOB: &str = r#"{"command":"classify","function":{"kind":"sin","a":{"re":3.141592653589793}},"nodes":{"s":["0","1"],"r":[0,0]}}"#;

#[test]
fn criterion_12_cli_determinism() {
    for job in [BASIS_JOB, DELTA_JOB, CLASSIFY_JOB] {
        let (first, code) = run(job);
        assert_eq!(code, 0, "job {job}");
        assert!(!first.is_empty());
        for _ in 0..2 {
            let (again, code) = run(job);
            assert_eq!(code, 0);
            assert_eq!(again, first, "report not byte-identical for {job}");
        }
    }
    println!("ACCEPTANCE 12: PASS");
}

#[test]
fn report_contents_match_fixtures() {
    let (out, _) = run(BASIS_JOB);
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    // Lambda_11 = (-1/6)z + (1/6)z^3 in coefficient form
    let lam = v["lambda"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["n"] == 1 && e["j"] == 1)
        .unwrap();
    assert_eq!(lam["coefficients"], serde_json::json!(["0", "-1/6", "0", "1/6"]));
    assert_eq!(lam["display"], "(-1/6)z + (1/6)z^3");

    let (out, _) = run(DELTA_JOB);
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["origin_order"], 0);
    let radius: f64 = v["zero_free_radius"].as_str().unwrap().parse().unwrap();
    assert!((radius - std::f64::consts::FRAC_PI_2).abs() < 1e-9);

    let (out, _) = run(CLASSIFY_JOB);
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["verdict"], "hypotheses_violated");
    assert_eq!(v["reason"], "type");
}

#[test]
fn round_trip_is_byte_identical() {
    for job in [BASIS_JOB, DELTA_JOB, CLASSIFY_JOB] {
        let (out, _) = run(job);
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        let re = serde_json::to_string_pretty(&v).unwrap() + "\n";
        assert_eq!(re.as_bytes(), out, "round trip changed bytes for {job}");
    }
}

#[test]
fn exit_codes() {
    // schema error -> 2
    let (_, code) = run(r#"{"command":"nonsense"}"#);
    assert_eq!(code, 2);
    let (_, code) = run(r#"{"command":"basis"}"#);
    assert_eq!(code, 2);
    // mathematical precondition failure -> 3
    let (_, code) = run(r#"{"command":"delta","nodes":{"s":["0","0"],"r":[0,0]}}"#);
    assert_eq!(code, 3);
    // expansion beyond the admissible type -> 3
    let (_, code) = run(
        r#"{"command":"expand","nodes":{"s":["0","1"],"r":[0,0]},"function":{"kind":"sin","a":{"re":3.141592653589793}}}"#,
    );
    assert_eq!(code, 3);
}

#[test]
fn stdin_and_output_options() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let csv_dir = dir.path().join("csv");
    Command::cargo_bin("lidstone")
        .unwrap()
        .arg("-")
        .arg("--out")
        .arg(&out_path)
        .arg("--csv")
        .arg(&csv_dir)
        .write_stdin(
            r#"{"command":"expand","nodes":{"s":["0","1"],"r":[0,0]},"function":{"kind":"sin","a":{"re":1.0}},"n_max":12}"#,
        )
        .assert()
        .success();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["command"], "expand");
    let csv = std::fs::read_to_string(csv_dir.join("partial_sum.csv")).unwrap();
    assert!(csv.starts_with("power,re,im\n"));
    assert!(csv_dir.join("coefficients.csv").exists());
}
