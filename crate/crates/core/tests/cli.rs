use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use reprosel::export::{matrix_from_csv, sha256_file};
use reprosel::MatrixKind;

fn reprosel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reprosel"))
        .args(args)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen(dir: &Path, extra: &[&str]) -> (PathBuf, PathBuf) {
    let mut args = vec!["gen", "--out", p(dir)];
    args.extend_from_slice(extra);
    let o = reprosel(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    (dir.join("config.json"), dir.join("weights.jsonl"))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn validate_reports_ok_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let (config, weights) = gen(tmp.path(), &["--seed", "7"]);
    let o = reprosel(&["validate", "--config", p(&config), "--input", p(&weights)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(
        stderr(&o).contains("OK, n_m=5, n_v=4, records=120"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn validate_reports_every_bad_line() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("config.json");
    std::fs::write(&config, r#"{"n_r": 3, "models": ["a", "b"], "views": ["v"], "modes": ["fs"], "thresholds": [1, 2]}"#).unwrap();
    let weights = tmp.path().join("w.jsonl");
    std::fs::write(
        &weights,
        concat!(
            r#"{"model":"a","view":"v","mode":"fs","run":0,"weights":[1,2]}"#,
            "\n",
            r#"{"model":"b","view":"v","mode":"fs","run":0,"weights":[1,2,3]}"#,
            "\n",
            r#"{"model":"b","view":"v","mode":"fs","run":0,"weights":[1,2,3,4]}"#,
            "\n",
        ),
    )
    .unwrap();
    let o = reprosel(&["validate", "--config", p(&config), "--input", p(&weights)]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("line 1"), "{err}");
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn missing_cells_need_allow_missing() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("config.json");
    std::fs::write(
        &config,
        r#"{"n_r": 3, "models": ["a", "b"], "views": ["v"], "modes": ["fs"], "thresholds": [1]}"#,
    )
    .unwrap();
    let weights = tmp.path().join("w.jsonl");
    std::fs::write(
        &weights,
        "{\"model\":\"a\",\"view\":\"v\",\"mode\":\"fs\",\"run\":0,\"weights\":[1,2,3]}\n",
    )
    .unwrap();

    let o = reprosel(&["validate", "--config", p(&config), "--input", p(&weights)]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("missing cell"), "{}", stderr(&o));

    let o = reprosel(&[
        "validate",
        "--config",
        p(&config),
        "--input",
        p(&weights),
        "--allow-missing",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"));

    let out = tmp.path().join("out");
    let o = reprosel(&[
        "run",
        "--config",
        p(&config),
        "--input",
        p(&weights),
        "--allow-missing",
        "--out",
        p(&out),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("missing cell"));
}

#[test]
fn gen_counts_and_repeats() {
    let tmp = tempfile::tempdir().unwrap();
    let args = [
        "--seed", "7", "--n-r", "35", "--models", "5", "--views", "4", "--modes", "2", "--runs",
        "3",
    ];
    let (_, a) = gen(&tmp.path().join("a"), &args);
    let (_, b) = gen(&tmp.path().join("b"), &args);
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 5 * 4 * 2 * 3);
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
}

#[test]
fn run_writes_manifested_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let (config, weights) = gen(
        &tmp.path().join("s"),
        &[
            "--seed", "3", "--models", "3", "--views", "2", "--modes", "2", "--runs", "2",
        ],
    );
    let out = tmp.path().join("out");
    let o = reprosel(&[
        "run",
        "--config",
        p(&config),
        "--input",
        p(&weights),
        "--out",
        p(&out),
        "--signed-ranking",
        "--thresholds",
        "5,10",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());

    let manifest = read_json(&out.join("manifest.json"));
    assert_eq!(manifest["status"], "complete");
    assert_eq!(manifest["flags"]["signed_ranking"], true);
    assert_eq!(manifest["flags"]["thresholds"], serde_json::json!([5, 10]));
    assert_eq!(
        manifest["inputs"][0]["sha256"],
        sha256_file(&weights).unwrap()
    );
    let outputs = manifest["outputs"].as_array().unwrap();
    for f in outputs {
        let path = out.join(f["path"].as_str().unwrap());
        assert_eq!(f["sha256"], sha256_file(&path).unwrap());
    }
    for required in [
        "scores.csv",
        "scores.json",
        "report.json",
        "winner_weights.csv",
        "heatmaps/grand/overall.csv",
        "heatmaps/modes/mode0/view_average.csv",
    ] {
        assert!(
            outputs.iter().any(|f| f["path"] == required),
            "{required} not listed"
        );
    }

    let scores = std::fs::read_to_string(out.join("scores.csv")).unwrap();
    assert!(scores.starts_with("mode,model,v.a,r.c,a.w.i,a.w.c,s.c,a.r.i,KL,L2\n"));
    assert_eq!(scores.lines().count(), 1 + 3 * 2);
    let weights_csv = std::fs::read_to_string(out.join("winner_weights.csv")).unwrap();
    assert_eq!(weights_csv.lines().count(), 1 + 35);

    let report = read_json(&out.join("report.json"));
    assert_eq!(report["modes"].as_array().unwrap().len(), 2);
    assert_eq!(report["options"]["ranking"], "signed");
    assert!(report["grand"]["winner"].is_string());
}

#[test]
fn planted_model_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let (config, weights) = gen(
        &tmp.path().join("s"),
        &[
            "--scenario",
            "planted-consensus",
            "--planted",
            "2",
            "--consensus",
            "0.6",
            "--n-r",
            "40",
            "--models",
            "3",
            "--views",
            "3",
        ],
    );
    let out = tmp.path().join("out");
    assert!(reprosel(&[
        "run",
        "--config",
        p(&config),
        "--input",
        p(&weights),
        "--out",
        p(&out)
    ])
    .status
    .success());
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["grand"]["winner"], "m2");
    assert_eq!(report["grand"]["tie"], false);
    assert_eq!(report["modes_agree"], true);
}

#[test]
fn identical_models_give_unit_overlap_heatmaps() {
    let tmp = tempfile::tempdir().unwrap();
    let (config, weights) = gen(
        &tmp.path().join("s"),
        &[
            "--scenario",
            "identical-models",
            "--models",
            "3",
            "--views",
            "2",
        ],
    );
    let out = tmp.path().join("out");
    assert!(reprosel(&[
        "run",
        "--config",
        p(&config),
        "--input",
        p(&weights),
        "--out",
        p(&out)
    ])
    .status
    .success());
    let mut checked = 0;
    for mode in ["mode0", "mode1"] {
        let dir = out.join("heatmaps/modes").join(mode);
        let mut files = vec![dir.join("view_average.csv")];
        files.extend(["v0", "v1"].map(|v| dir.join(format!("view_specific/{v}.csv"))));
        for f in files {
            let m = matrix_from_csv(
                &std::fs::read_to_string(&f).unwrap(),
                "t",
                MatrixKind::Averaged,
            )
            .unwrap();
            assert!(m.values().iter().all(|&v| v == 1.0), "{}", f.display());
            checked += 1;
        }
    }
    assert_eq!(checked, 6);
    assert_eq!(read_json(&out.join("report.json"))["grand"]["tie"], true);
}

#[test]
fn scaled_copies_tie() {
    let tmp = tempfile::tempdir().unwrap();
    let (config, weights) = gen(
        &tmp.path().join("s"),
        &["--scenario", "scaled-copies", "--seed", "9"],
    );
    let out = tmp.path().join("out");
    assert!(reprosel(&[
        "run",
        "--config",
        p(&config),
        "--input",
        p(&weights),
        "--out",
        p(&out)
    ])
    .status
    .success());
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["grand"]["tie"], true);
    assert_eq!(report["grand"]["winner"], "m0");
}

#[test]
fn select_from_exported_matrices() {
    let tmp = tempfile::tempdir().unwrap();
    let (config, weights) = gen(&tmp.path().join("s"), &["--seed", "11"]);
    let out = tmp.path().join("out");
    assert!(reprosel(&[
        "run",
        "--config",
        p(&config),
        "--input",
        p(&weights),
        "--out",
        p(&out)
    ])
    .status
    .success());
    let winner = read_json(&out.join("report.json"))["grand"]["winner"].clone();

    let grand = out.join("heatmaps/grand");
    let sel = tmp.path().join("sel");
    let o = reprosel(&[
        "select",
        "--view-average",
        p(&grand.join("view_average.csv")),
        "--rank-correlation",
        p(&grand.join("rank_correlation.csv")),
        "--out",
        p(&sel),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read_json(&sel.join("selection.json"))["winner"], winner);

    let o = reprosel(&["select", "--overall", p(&grand.join("overall.csv"))]);
    assert!(o.status.success());
    assert!(stderr(&o).contains(&format!("winner {}", winner.as_str().unwrap())));

    assert!(!reprosel(&[
        "select",
        "--overall",
        p(&grand.join("overall.csv")),
        "--view-average",
        "x.csv"
    ])
    .status
    .success());
    assert!(
        !reprosel(&["select", "--overall", p(&tmp.path().join("absent.csv"))])
            .status
            .success()
    );
}

#[test]
fn scores_only_writes_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let (config, weights) = gen(&tmp.path().join("s"), &["--models", "3", "--views", "2"]);
    let out = tmp.path().join("out");
    assert!(reprosel(&[
        "scores",
        "--config",
        p(&config),
        "--input",
        p(&weights),
        "--out",
        p(&out)
    ])
    .status
    .success());
    assert!(out.join("scores.csv").exists());
    assert!(out.join("scores.json").exists());
    assert!(!out.join("report.json").exists());
    let scores = read_json(&out.join("scores.json"));
    assert_eq!(scores["modes"][0]["scores"].as_array().unwrap().len(), 8);
}

#[test]
fn bad_threshold_override_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let (config, weights) = gen(&tmp.path().join("s"), &[]);
    let o = reprosel(&[
        "validate",
        "--config",
        p(&config),
        "--input",
        p(&weights),
        "--thresholds",
        "10,50",
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("error"));
}
