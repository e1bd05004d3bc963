use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn socnav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_socnav")).args(args).output().expect("binary runs")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.json"))
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn run_writes_four_files() {
    let out = tempfile::tempdir().unwrap();
    let o = socnav(&[
        "run",
        "--scenario",
        scenario("open_field").to_str().unwrap(),
        "--mode",
        "traditional",
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["runlog.json", "trajectory.csv", "metrics.json", "scene.svg"] {
        assert!(out.path().join(f).is_file(), "missing {f}");
    }
    assert_eq!(read_json(&out.path().join("metrics.json"))["status"], "goal_reached");
}

#[test]
fn unknown_field_exits_2_and_names_it() {
    let out = tempfile::tempdir().unwrap();
    let o = socnav(&["run", "--scenario", data("unknown_field.json").to_str().unwrap(), "--out", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("robot.wheels"));
}

#[test]
fn bad_override_exits_2() {
    let out = tempfile::tempdir().unwrap();
    let o = socnav(&[
        "run",
        "--scenario",
        "open_field",
        "--out",
        out.path().to_str().unwrap(),
        "--config-override",
        "planner.dt=-1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("planner"));
}

#[test]
fn walled_in_robot_exits_3() {
    let out = tempfile::tempdir().unwrap();
    let o = socnav(&["run", "--scenario", data("walled_in.json").to_str().unwrap(), "--out", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(read_json(&out.path().join("metrics.json"))["status"], "stuck");
}

#[test]
fn compare_writes_both_runs_and_the_report() {
    let out = tempfile::tempdir().unwrap();
    let o = socnav(&["compare", "--scenario", "open_field", "--out", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for f in ["comparison.json", "overlay.svg", "traditional/runlog.json", "paccet/scene.svg"] {
        assert!(out.path().join(f).is_file(), "missing {f}");
    }
    let report = read_json(&out.path().join("comparison.json"));
    assert_eq!(report["deltas"]["max_pose_deviation"], 0.0);
    assert_eq!(report["deltas"]["path_length_ratio"], 1.0);
    let svg = std::fs::read_to_string(out.path().join("overlay.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn hallway_overlay_diverges() {
    let out = tempfile::tempdir().unwrap();
    let o = socnav(&["compare", "--scenario", "hallway_human_vs_object", "--out", out.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report = read_json(&out.path().join("comparison.json"));
    assert!(report["deltas"]["clearance_ratio"].as_f64().unwrap() > 1.0);
    assert!(report["deltas"]["max_pose_deviation"].as_f64().unwrap() > 0.1);
}

#[test]
fn dataset_and_training_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("data.csv");
    let model = dir.path().join("model.json");
    let o = socnav(&["gen-dataset", "--seed", "3", "--per-label", "50", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = socnav(&["train-context", "--data", csv.to_str().unwrap(), "--out", model.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["train_samples"], 240);
    assert_eq!(summary["held_out_samples"], 60);
    let text = std::fs::read_to_string(&model).unwrap();
    socnav::context::ContextModel::from_json(&text).unwrap();
}

#[test]
fn demo_prints_the_knee() {
    let o = socnav(&["paccet-demo"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("pareto selector picks (0.4, 0.4)"));
}
