use std::path::Path;
use std::process::{Command, Output};

fn antijam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antijam"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL: &str = r#"{
  "scenario": "markov",
  "id": "tiny",
  "num_users": 2,
  "num_channels": 3,
  "jammers": [{"kind": "sweep"}],
  "slots": 12,
  "trials": 2
}"#;

#[test]
fn presets_are_listed() {
    let out = antijam(&["presets", "list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "fig3-stackelberg",
        "fig4-sweep",
        "fig4-comb",
        "fig5-hypergraph",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn validate_accepts_good_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "ok.json", SMALL);
    let out = antijam(&["validate", "--config", &path]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write(
        dir.path(),
        "typo.json",
        r#"{"scenario": "markov", "num_users": 2, "num_channels": 3, "chanels": 3}"#,
    );
    let out = antijam(&["validate", "--config", &typo]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chanels"));

    let zero = write(
        dir.path(),
        "zero.json",
        r#"{"scenario": "markov", "num_users": 2, "num_channels": 0}"#,
    );
    let out = antijam(&[
        "run",
        "--config",
        &zero,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("num_channels"));

    let out = antijam(&["run", "--preset", "no-such-preset"]);
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    let out = antijam(&["validate", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_writes_outputs_under_scenario_id() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "tiny.json", SMALL);
    let out_root = dir.path().join("results");
    let out = antijam(&[
        "run",
        "--config",
        &path,
        "--out",
        out_root.to_str().unwrap(),
        "--seed",
        "9",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let run_dir = out_root.join("tiny");
    for f in ["slots.csv", "summary.csv", "metadata.json"] {
        assert!(run_dir.join(f).is_file(), "{f}");
    }
    let meta = std::fs::read_to_string(run_dir.join("metadata.json")).unwrap();
    assert!(meta.contains("\"seed\": 9"));
    // 4 metrics x 4 online algorithms x 2 trials x 12 slots, plus the header.
    let rows = std::fs::read_to_string(run_dir.join("slots.csv"))
        .unwrap()
        .lines()
        .count();
    assert_eq!(rows, 1 + 4 * 4 * 2 * 12);
}

#[test]
fn preset_overrides_apply_to_every_expanded_run() {
    let dir = tempfile::tempdir().unwrap();
    let out_root = dir.path().join("p");
    let out = antijam(&[
        "run",
        "--preset",
        "fig3-stackelberg",
        "--trials",
        "1",
        "--slots",
        "5",
        "--out",
        out_root.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for id in ["fig3-stackelberg-j1.0", "fig3-stackelberg-j0.5"] {
        let meta = std::fs::read_to_string(out_root.join(id).join("metadata.json")).unwrap();
        assert!(
            meta.contains("\"slots\": 5") && meta.contains("\"trials\": 1"),
            "{id}"
        );
    }
}

#[test]
fn unwritable_output_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "tiny.json", SMALL);
    let blocker = write(dir.path(), "blocker", "");
    let out = antijam(&["run", "--config", &path, "--out", &blocker]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn run_needs_a_source() {
    let out = antijam(&["run"]);
    assert!(!out.status.success());
}
