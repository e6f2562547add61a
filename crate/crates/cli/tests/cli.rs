use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diamondq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: invalid JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn all_pass(v: &Value) -> bool {
    v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true)
}

fn dir_arg(d: &Path) -> String {
    d.to_str().unwrap().to_string()
}

#[test]
fn verify_scopes_are_green() {
    for scope in ["all", "diamond", "decomp", "qft-identities"] {
        let (code, v) = run_json(&["verify", "--scope", scope]);
        assert_eq!(code, 0, "{scope}");
        assert_eq!(v["command"], "verify");
        assert!(!v["checks"].as_array().unwrap().is_empty(), "{scope}");
        assert!(all_pass(&v));
    }
}

#[test]
fn unknown_scope_is_an_error() {
    let out = run(&["verify", "--scope", "everything"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn qft_on_a_basis_input_matches_reference() {
    let d = tempfile::tempdir().unwrap();
    let od = dir_arg(d.path());
    let (code, v) = run_json(&[
        "qft",
        "--scheme",
        "double-string",
        "--n",
        "4",
        "--input",
        "0110",
        "--out-dir",
        &od,
    ]);
    assert_eq!(code, 0);
    let dev = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "output_matches_reference")
        .unwrap();
    assert!(dev["max_error"].as_f64().unwrap() < 1e-8);
    let csv = std::fs::read_to_string(d.path().join("amplitudes.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("basis_index,re,im"));
    let total = v["results"]["total_qubits"].as_u64().unwrap();
    assert_eq!(csv.lines().count() as u64, (1 << total) + 1);
}

#[test]
fn qft_counts_report_tally_and_closed_forms() {
    let d = tempfile::tempdir().unwrap();
    let (code, v) = run_json(&["qft", "--n", "4", "--counts", "--out-dir", &dir_arg(d.path())]);
    assert_eq!(code, 0);
    let c = &v["results"]["counts"];
    assert_eq!(c["h"], 4);
    assert_eq!(v["results"]["phase_stages"], 10);
    let f = &v["results"]["closed_form_counts"];
    assert_eq!(
        (f["h"].as_u64(), f["x"].as_u64(), f["rn"].as_u64(), f["iswap"].as_u64()),
        (Some(4), Some(20), Some(10), Some(12))
    );
    // the built circuit has one stage fewer of swaps and rotations than the closed forms
    assert_eq!(
        (c["x"].as_u64(), c["rn"].as_u64(), c["iswap"].as_u64()),
        (Some(12), Some(6), Some(6))
    );
}

#[test]
fn diamond_string_checks_reset_purity() {
    let d = tempfile::tempdir().unwrap();
    let (code, v) = run_json(&[
        "qft",
        "--scheme",
        "diamond-string",
        "--n",
        "2",
        "--dump-circuit",
        "--out-dir",
        &dir_arg(d.path()),
    ]);
    assert_eq!(code, 0);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "reset_purity"));
    assert!(v["results"]["resets"].as_u64().unwrap() > 0);
    let text = std::fs::read_to_string(d.path().join("circuit.txt")).unwrap();
    assert!(text.lines().any(|l| l.starts_with("RESET(")));
}

#[test]
fn qft_rejects_bad_input() {
    for args in [
        &["qft", "--n", "3", "--input", "01"][..],
        &["qft", "--n", "2", "--input", "0a"],
        &["qft", "--scheme", "diamond-string", "--n", "9"],
        &["qft", "--scheme", "ring"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn qcl_writes_artifacts() {
    let d = tempfile::tempdir().unwrap();
    let (code, v) = run_json(&["qcl", "--target", "x2", "--seed", "1", "--out-dir", &dir_arg(d.path())]);
    assert_eq!(code, 0);
    for f in ["loss.csv", "fit.csv", "metadata.json"] {
        assert!(d.path().join(f).exists(), "{f}");
    }
    assert!(v["results"]["final_mse"].as_f64().unwrap() < 0.01);
    let loss = std::fs::read_to_string(d.path().join("loss.csv")).unwrap();
    assert_eq!(loss.lines().count(), 302);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("metadata.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 1);
    assert_eq!(meta["config"]["target"], "x2");
}

#[test]
fn text_output_prints_final_mse() {
    let d = tempfile::tempdir().unwrap();
    let out = run(&["qcl", "--epochs", "3", "--out-dir", &dir_arg(d.path())]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("final_mse: ")));
    assert!(text.contains("PASS  loss_finite"));
}

#[test]
fn zero_epochs_fit_is_the_untrained_model() {
    let d = tempfile::tempdir().unwrap();
    let (code, v) = run_json(&[
        "qcl",
        "--target",
        "abs",
        "--epochs",
        "0",
        "--seed",
        "3",
        "--out-dir",
        &dir_arg(d.path()),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["best_epoch"], 0);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("metadata.json")).unwrap()).unwrap();
    let model: diamondq::qml::PqcModel = serde_json::from_value(meta["model"].clone()).unwrap();
    let cfg = diamondq::qml::TrainConfig {
        seed: 3,
        epochs: 0,
        ..Default::default()
    };
    assert_eq!(model, diamondq::qml::train::initial_model(&cfg));
    let fit = std::fs::read_to_string(d.path().join("fit.csv")).unwrap();
    for line in fit.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let want = diamondq::qml::predict_regression(&model, cols[0]).unwrap();
        assert!((cols[2] - want).abs() < 1e-12, "{line}");
    }
}

#[test]
fn classify_separable_blobs_with_one_layer() {
    let d = tempfile::tempdir().unwrap();
    let (code, v) = run_json(&[
        "classify",
        "--shape",
        "1b",
        "--layers",
        "1",
        "--seed",
        "1",
        "--out-dir",
        &dir_arg(d.path()),
    ]);
    assert_eq!(code, 0);
    assert!(v["results"]["accuracy"].as_f64().unwrap() >= 0.99);
    let grid = std::fs::read_to_string(d.path().join("grid.csv")).unwrap();
    assert_eq!(grid.lines().next(), Some("x0,x1,prob"));
    assert_eq!(grid.lines().count(), 51 * 51 + 1);
    let pts = std::fs::read_to_string(d.path().join("points.csv")).unwrap();
    assert_eq!(pts.lines().count(), 201);
}

#[test]
fn unknown_identifiers_exit_with_two() {
    let d = tempfile::tempdir().unwrap();
    let od = dir_arg(d.path());
    assert_eq!(
        run(&["qcl", "--target", "tanh", "--out-dir", &od]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["classify", "--shape", "4a", "--out-dir", &od]).status.code(),
        Some(2)
    );
}

#[test]
fn reports_share_one_schema() {
    let d = tempfile::tempdir().unwrap();
    let od = dir_arg(d.path());
    let runs = [
        run_json(&["verify", "--scope", "diamond"]).1,
        run_json(&["qft", "--n", "2", "--out-dir", &od]).1,
        run_json(&["qcl", "--epochs", "1", "--out-dir", &od]).1,
        run_json(&["classify", "--epochs", "1", "--out-dir", &od]).1,
    ];
    for v in &runs {
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(
            keys,
            ["artifacts", "checks", "command", "config_echo", "results", "wall_time"]
        );
        for c in v["checks"].as_array().unwrap() {
            assert!(c["name"].is_string() && c["pass"].is_boolean() && c["max_error"].is_number());
        }
        for a in v["artifacts"].as_array().unwrap() {
            assert!(Path::new(a.as_str().unwrap()).exists());
        }
        assert!(v["wall_time"].as_f64().unwrap() >= 0.0);
    }
}

#[test]
fn out_flag_writes_the_report() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path().join("nested").join("report.json");
    let out = run(&["verify", "--scope", "decomp", "--out", p.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["command"], "verify");
}

fn read_all(dir: &Path, files: &[&str]) -> Vec<Vec<u8>> {
    files.iter().map(|f| std::fs::read(dir.join(f)).unwrap()).collect()
}

#[test]
fn reruns_are_byte_identical() {
    let csvs = ["loss.csv", "fit.csv"];
    let (a, b, c) = (
        tempfile::tempdir().unwrap(),
        tempfile::tempdir().unwrap(),
        tempfile::tempdir().unwrap(),
    );
    let args = |d: &Path, threads: &str| {
        vec![
            "qcl".to_string(),
            "--target".into(),
            "sin".into(),
            "--epochs".into(),
            "15".into(),
            "--seed".into(),
            "4".into(),
            "--threads".into(),
            threads.into(),
            "--out-dir".into(),
            dir_arg(d),
        ]
    };
    for (d, t) in [(&a, "1"), (&b, "1"), (&c, "3")] {
        let argv = args(d.path(), t);
        let refs: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert!(run(&refs).status.success());
    }
    assert_eq!(read_all(a.path(), &csvs), read_all(b.path(), &csvs));
    assert_eq!(read_all(a.path(), &csvs), read_all(c.path(), &csvs));
    // metadata echoes the out-dir
    let strip = |d: &Path| {
        std::fs::read_to_string(d.join("metadata.json"))
            .unwrap()
            .replace(&dir_arg(d), "OUT")
    };
    assert_eq!(strip(a.path()), strip(b.path()));

    let (x, y) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&x, &y] {
        assert!(run(&[
            "qft",
            "--scheme",
            "cns-chain",
            "--n",
            "3",
            "--input",
            "101",
            "--dump-circuit",
            "--out-dir",
            &dir_arg(d.path())
        ])
        .status
        .success());
    }
    assert_eq!(
        read_all(x.path(), &["amplitudes.csv", "circuit.txt"]),
        read_all(y.path(), &["amplitudes.csv", "circuit.txt"])
    );
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.json");
    std::fs::write(&cfg, r#"{"epochs": 2, "target": "sin", "learning-rate": 0.01}"#).unwrap();
    let od = dir_arg(d.path());
    let (code, v) = run_json(&[
        "qcl",
        "--config",
        cfg.to_str().unwrap(),
        "--epochs",
        "4",
        "--out-dir",
        &od,
    ]);
    assert_eq!(code, 0);
    let echo = &v["config_echo"];
    assert_eq!(echo["epochs"], 4);
    assert_eq!(echo["target"], "sin");
    assert_eq!(echo["learning_rate"], 0.01);
    assert_eq!(echo["layers"], 4);

    std::fs::write(&cfg, r#"{"epochs": {"nested": 1}}"#).unwrap();
    assert_eq!(
        run(&["qcl", "--config", cfg.to_str().unwrap(), "--out-dir", &od])
            .status
            .code(),
        Some(2)
    );
}
