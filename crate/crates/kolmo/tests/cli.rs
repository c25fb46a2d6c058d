use std::path::PathBuf;
use std::process::{Command, Output};

use kolmo::classical::{FiniteProbabilitySpace, SpaceJson};

fn kolmo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kolmo")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const NAIVE: &str = r#"{"n": 4, "pairs": [[1,3],[1,4],[2,3],[2,4]],
  "singles": ["1/2","1/2","1/2","1/2"], "pairwise": ["3/8","3/8","0","3/8"]}"#;

const EPR_SETUP: &str = r#"{
  "dim": 4,
  "state": {"pure": [[0,0],[0.7071067811865476,0],[-0.7071067811865476,0],[0,0]]},
  "measurements": [
    {"name": "a", "spin_half": {"xz_angle_deg": 0, "factor": 1, "factors": 2}},
    {"name": "a'", "spin_half": {"xz_angle_deg": 240, "factor": 1, "factors": 2}},
    {"name": "b", "spin_half": {"xz_angle_deg": 240, "factor": 2, "factors": 2}},
    {"name": "b'", "spin_half": {"xz_angle_deg": 120, "factor": 2, "factors": 2}}
  ],
  "selection": {"1010": "1/4", "1001": "1/4", "0110": "1/4", "0101": "1/4"}
}"#;

#[test]
fn every_scenario_passes() {
    for name in kolmo::scenarios::SCENARIOS {
        let o = kolmo(&["scenario", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains("result: PASS"));
    }
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let a = kolmo(&["--format", "json", "scenario", "epr"]);
    let b = kolmo(&["--format", "json", "scenario", "epr"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["quantities"]["p(X_A^X_B | X_a^X_b)"], "3/8");
}

#[test]
fn timestamps_only_on_request() {
    let plain = stdout(&kolmo(&["--format", "json", "scenario", "coin"]));
    assert!(!plain.contains("generated_at"));
    let stamped = stdout(&kolmo(&["--format", "json", "--timestamps", "scenario", "coin"]));
    assert!(stamped.contains("generated_at_unix"));
}

#[test]
fn negative_tolerance_fails_float_verdicts() {
    let o = kolmo(&["--tolerance=-1", "scenario", "example-one"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn full_table_lists_81_events() {
    let o = kolmo(&["--format", "json", "--full-table", "scenario", "epr"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["full_table"].as_array().unwrap().len(), 81);
}

#[test]
fn naive_vector_is_rejected_with_its_facet() {
    let path = write_tmp("naive-epr.json", NAIVE);
    let o = kolmo(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("NOT a member"));
    assert!(text.contains("p13+p14+p24-p23-p1-p4 <= 0 (exceeded by 1/8)"));

    let o = kolmo(&["--format", "json", "check", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["member"], false);
    assert_eq!(v["violated_facet"]["excess"], "1/8");
}

#[test]
fn two_event_polytope_has_four_vertices() {
    let o = kolmo(&["--format", "json", "vertices", "2", "1-2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
    assert!(stdout(&kolmo(&["vertices", "2", "1-2"])).starts_with("4 vertices"));
}

#[test]
fn build_writes_a_loadable_space() {
    let setup = write_tmp("epr-setup.json", EPR_SETUP);
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("epr-space.json");
    let o = kolmo(&["build", setup.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("16 elementary events (14 with positive weight)"));
    assert!(text.contains("p13  3/32"));
    assert!(text.contains("verdict: member"));

    let written: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let model: SpaceJson = serde_json::from_value(written).unwrap();
    let space = FiniteProbabilitySpace::from_json_model(&model).unwrap();
    assert_eq!(space.points().len(), 16);
    assert_eq!(kolmo::rational::format_rational(&space.probability_of("a=up").unwrap()), "1/4");
}

#[test]
fn witness_from_file_and_from_seed() {
    let lines = write_tmp(
        "lines.json",
        r#"{"e1": {"span": [[[0.9486832980505138,0],[0.31622776601683794,0]]]},
            "e2": {"span": [[[0.9486832980505138,0],[-0.31622776601683794,0]]]}}"#,
    );
    let o = kolmo(&["--format", "json", "witness", lines.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["violates"], true);
    assert!((v["lhs"].as_f64().unwrap() - 1.64).abs() < 1e-9);

    let o = kolmo(&["witness", "--seed", "11", "--dim", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("frequency inequality violated"));
}

#[test]
fn commuting_pair_has_no_witness() {
    let axes = write_tmp(
        "axes.json",
        r#"{"e1": {"matrix": [[[1,0],[0,0]],[[0,0],[0,0]]]}, "e2": {"span": [[[0,0],[1,0]]]}}"#,
    );
    let o = kolmo(&["witness", axes.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("commuting: no witness exists"));
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(kolmo(&["check", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(kolmo(&["scenario", "unknown"]).status.code(), Some(2));
    assert_eq!(kolmo(&["vertices", "2", "1-3"]).status.code(), Some(2));
    let bad = write_tmp("bad-setup.json", &EPR_SETUP.replace("\"1/4\", \"0101\"", "\"1/2\", \"0101\""));
    assert_eq!(kolmo(&["build", bad.to_str().unwrap()]).status.code(), Some(2));
    let incompatible = write_tmp("incompatible.json", &EPR_SETUP.replace("\"1010\"", "\"1100\""));
    let o = kolmo(&["build", incompatible.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("do not commute"));
}
