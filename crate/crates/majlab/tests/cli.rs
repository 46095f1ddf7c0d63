//! End-to-end tests driving the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn majlab(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_majlab"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn majlab")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

const SMALL: &str = r#"
n = 1500
p = 0.4
k = 3
lambda = ["1/3", "1/3", "1/3"]
n_trials = 8
master_seed = 2024
"#;

#[test]
fn simulate_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "exp.toml", SMALL);
    let out_dir = dir.path().join("run");
    let out = majlab(
        &["simulate", "--config", &cfg, "--out", out_dir.to_str().unwrap()],
        &[],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("config.toml").exists());
    assert!(out_dir.join("trials.csv").exists());

    let json_path = dir.path().join("verdicts.json");
    let out = majlab(
        &[
            "verify",
            "--records",
            out_dir.to_str().unwrap(),
            "--claims",
            "UNANIMITY_3,WINNER_IS_LEADER,ANTI_CONC",
            "--ac-trials",
            "100",
            "--json",
            json_path.to_str().unwrap(),
        ],
        &[],
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "stdout: {stdout}");
    let json = std::fs::read_to_string(&json_path).unwrap();
    let lines: Vec<&str> = json.lines().collect();
    assert_eq!(lines.len(), 3);
    for line in &lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let obj = v.as_object().unwrap();
        assert_eq!(obj.len(), 7);
        // Key order in the emitted text is part of the format.
        let mut last = 0;
        for key in [
            "\"claim_id\"",
            "\"pass\"",
            "\"statistic\"",
            "\"threshold\"",
            "\"n_trials\"",
            "\"ci_halfwidth\"",
            "\"notes\"",
        ] {
            let pos = line.find(key).unwrap_or_else(|| panic!("{key} in {line}"));
            assert!(pos > last || (last == 0 && key == "\"claim_id\""), "{key} out of order");
            last = pos;
        }
    }
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "exp.toml", SMALL);
    let mut outputs = Vec::new();
    for (sub, threads) in [("a", "1"), ("b", "3"), ("c", "8")] {
        let out_dir = dir.path().join(sub);
        let out = majlab(
            &["simulate", "--config", &cfg, "--out", out_dir.to_str().unwrap()],
            &[("MAJLAB_THREADS", threads)],
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(std::fs::read(out_dir.join("trials.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn fix_flags_conflict_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "exp.toml", SMALL);
    let out = majlab(
        &[
            "simulate",
            "--config",
            &cfg,
            "--fix-graph",
            "--fix-config",
            "--out",
            dir.path().join("x").to_str().unwrap(),
        ],
        &[],
    );
    assert!(!out.status.success());
}

#[test]
fn sweep_writes_subdirectories_and_scaling_claims_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "base.toml",
        r#"
n = 500
p = 0.3
k = 2
lambda = ["1/2", "1/2"]
n_trials = 30
master_seed = 7
"#,
    );
    // Annealed sweep: the tie-set scaling claim applies; the variance claim
    // conditions on a shared configuration and reports not-applicable.
    let out_dir = dir.path().join("sw");
    let out = majlab(
        &[
            "sweep",
            "--config",
            &cfg,
            "--axis",
            "n",
            "--values",
            "500,1000,2000",
            "--out",
            out_dir.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for sub in ["n_500", "n_1000", "n_2000"] {
        assert!(out_dir.join(sub).join("trials.csv").exists(), "{sub}");
    }
    let out = majlab(
        &["verify", "--records", out_dir.to_str().unwrap()],
        &[],
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("TIE_SET_SCALING  PASS"), "stdout: {stdout}");
    assert!(stdout.contains("VARIANCE_BOUND   NOT-APPLICABLE"), "stdout: {stdout}");
    assert!(out.status.success(), "stdout: {stdout}");

    // Fix-config sweep: the variance claim applies.
    let out_dir2 = dir.path().join("swfc");
    let out = majlab(
        &[
            "sweep",
            "--config",
            &cfg,
            "--axis",
            "n",
            "--values",
            "500,1000,2000",
            "--fix-config",
            "--out",
            out_dir2.to_str().unwrap(),
        ],
        &[],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = majlab(
        &[
            "verify",
            "--records",
            out_dir2.to_str().unwrap(),
            "--claims",
            "VARIANCE_BOUND",
        ],
        &[],
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("VARIANCE_BOUND   PASS"), "stdout: {stdout}");
    assert!(out.status.success(), "stdout: {stdout}");
}

#[test]
fn unknown_claim_id_exits_with_error_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "exp.toml", SMALL);
    let out_dir = dir.path().join("run");
    majlab(
        &["simulate", "--config", &cfg, "--out", out_dir.to_str().unwrap()],
        &[],
    );
    let out = majlab(
        &[
            "verify",
            "--records",
            out_dir.to_str().unwrap(),
            "--claims",
            "NO_SUCH_CLAIM",
        ],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_only_claim_on_single_run_is_not_applicable_but_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "exp.toml", SMALL);
    let out_dir = dir.path().join("run");
    majlab(
        &["simulate", "--config", &cfg, "--out", out_dir.to_str().unwrap()],
        &[],
    );
    let out = majlab(
        &[
            "verify",
            "--records",
            out_dir.to_str().unwrap(),
            "--claims",
            "TIE_SET_SCALING",
        ],
        &[],
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("NOT-APPLICABLE"), "stdout: {stdout}");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn oracle_llt_csv_has_pinned_columns() {
    let out = majlab(
        &[
            "oracle", "llt", "--n-star", "200", "--n-of-v", "40", "--parts", "100,100",
            "--window", "2",
        ],
        &[],
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut lines = stdout.lines();
    assert_eq!(lines.next().unwrap(), "delta_vec,exact,approx,rel_err");
    assert_eq!(lines.count(), 5);

    let out = majlab(
        &[
            "oracle", "llt", "--n-star", "200", "--n-of-v", "40", "--parts", "100,100",
            "--window", "2", "--normalization", "both",
        ],
        &[],
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(
        stdout.lines().next().unwrap(),
        "delta_vec,exact,approx,rel_err,approx_std,rel_err_std"
    );
}

#[test]
fn oracle_profile_matches_hand_computation() {
    // parts (5,4,3), s (2,1,1): C(5,2) C(4,1) C(3,1) / C(12,4) = 120/495.
    let out = majlab(
        &["oracle", "profile", "--parts", "5,4,3", "--s", "2,1,1"],
        &[],
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    let val: f64 = stdout.trim().strip_prefix("probability = ").unwrap().parse().unwrap();
    assert!((val - 120.0 / 495.0).abs() < 1e-15);
}
