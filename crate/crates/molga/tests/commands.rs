use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn molga(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_molga")).args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) {
    let out = molga(args);
    assert!(out.status.success(), "{args:?}\n{}", String::from_utf8_lossy(&out.stderr));
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn run_dir(out: &Path, kind: &str, seed: u64) -> PathBuf {
    out.join(format!("{kind}-s{seed}"))
}

#[test]
fn single_sample_baseline() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    run_ok(&["baseline", "--samples", "1", "--seed", "3", "--out", out, "--overwrite"]);
    let dir = run_dir(tmp.path(), "baseline", 3);
    let csv = fs::read_to_string(dir.join("samples-s3.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 2);
    let j: f64 = rows[1].split(',').nth(3).unwrap().parse().unwrap();
    let summary = json(&dir.join("summary.json"));
    let seed = &summary["per_seed"][0];
    assert_eq!(seed["samples"], 1);
    assert!((seed["mean_j"].as_f64().unwrap() - j).abs() < 1e-12);
    assert_eq!(summary["best_of_dataset"]["dataset_size"], 1000);
}

#[test]
fn exact_similarity_bound_admits_only_the_target() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    run_ok(&[
        "constrained", "--delta", "1.0", "--targets", "2", "--generations", "3", "--pop-size", "20", "--out", out,
        "--overwrite",
    ]);
    let summary = json(&run_dir(tmp.path(), "constrained", 0).join("summary.json"));
    assert_eq!(summary["runs"], 2);
    assert_eq!(summary["success_rate"], 0.0);
    assert_eq!(summary["violations"], 0);
    assert!(summary["mean_improvement"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn rerunning_the_resolved_config_reproduces_every_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("a");
    let second = tmp.path().join("b");
    run_ok(&[
        "evolve", "--beta", "-100", "--disc", "logistic", "--generations", "4", "--pop-size", "30", "--repeats", "2",
        "--seed", "5", "--out", first.to_str().unwrap(), "--overwrite",
    ]);
    let a = run_dir(&first, "evolve", 5);
    let resolved = a.join("config.resolved");
    run_ok(&["evolve", "--config", resolved.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    let b = run_dir(&second, "evolve", 5);
    let mut csvs = 0;
    for entry in fs::read_dir(&a).unwrap() {
        let name = entry.unwrap().file_name();
        if name.to_string_lossy().ends_with(".csv") {
            assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name:?}");
            csvs += 1;
        }
    }
    assert!(csvs >= 5);
    run_ok(&["report", a.to_str().unwrap()]);
    let manifest = json(&a.join("report/manifest.json"));
    let metrics: Vec<&str> = manifest["metrics"].as_array().unwrap().iter().map(|m| m.as_str().unwrap()).collect();
    for m in ["max_J", "internal_diversity", "fraction_unique", "mean_heavy_atoms"] {
        assert!(metrics.contains(&m), "{metrics:?}");
    }
}

#[test]
fn errors_exit_with_status_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = molga(&["evolve", "--dataset", "/nonexistent.smi", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonexistent"));
    assert_eq!(molga(&["report", tmp.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn alphabet_command_prints_a_loadable_file() {
    let out = molga(&["alphabet", "extended"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(molga::alphabet_file::parse_alphabet(&text).unwrap(), molga_core::Alphabet::extended());
}
