use std::path::Path;
use std::process::{Command, Output};

fn distill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distill"))
        .args(args)
        .env_remove("DISTILL_GRID_POINTS")
        .env_remove("DISTILL_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = distill(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn dir_entries(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn switch_points_near_reference_values() {
    let rows = csv_rows(&stdout(&["efficiency", "--repeaters", "1", "--switchpoints"]));
    assert_eq!(rows[0], ["repeaters", "P1->P2", "P2->P3", "P3->P4"]);
    for (got, want) in rows[1][1..].iter().zip([0.9343, 0.9356, 0.9655]) {
        let got: f64 = got.parse().unwrap();
        assert!((got - want).abs() < 3e-3, "{got} vs {want}");
    }
}

#[test]
fn purify_trace_at_point_six() {
    let rows = csv_rows(&stdout(&[
        "purify",
        "--protocol",
        "dejmps",
        "--no-twirl",
        "--rounds",
        "2",
        "--fin",
        "0.6",
    ]));
    assert_eq!(rows.len(), 3);
    let f: f64 = rows[2][1].parse().unwrap();
    assert!((f - 0.688616).abs() < 1e-6, "{f}");
}

#[test]
fn single_point_qec_map() {
    for code in ["913", "933"] {
        assert_eq!(
            stdout(&["map", "qec", "--code", code, "--grid", "1:1:1"]),
            "F_in,F_out\n1.0,1.0\n"
        );
    }
}

#[test]
fn chain_map_accepts_skipped_rounds() {
    let rows = csv_rows(&stdout(&[
        "map",
        "chain",
        "--repeaters",
        "1",
        "--rounds",
        "513,skip,skip",
        "--grid",
        "0:1:11",
    ]));
    assert_eq!(rows.len(), 12);
    assert_eq!(rows[11], ["1.0", "1.0"]);
}

#[test]
fn grid_points_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_distill"))
        .args(["map", "qec"])
        .env("DISTILL_GRID_POINTS", "7")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 8);
}

#[test]
fn output_is_deterministic() {
    let args = ["efficiency", "--repeaters", "1,3", "--envelope", "--grid", "0.9:1:200"];
    assert_eq!(stdout(&args), stdout(&args));
    let jobs = ["hybrid", "--grid", "0.6:1:300", "--jobs", "1"];
    let many = ["hybrid", "--grid", "0.6:1:300", "--jobs", "4"];
    assert_eq!(stdout(&jobs), stdout(&many));
}

#[test]
fn json_by_extension_and_atomic_write() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("codes.json");
    let out = distill(&["codes", "list", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(value.as_array().unwrap().len(), 5);
    assert_eq!(value[2]["code"], "933");
    assert_eq!(dir_entries(dir.path()), ["codes.json"]);
}

#[test]
fn bad_arguments_exit_nonzero() {
    let cases: [&[&str]; 9] = [
        &["purify", "--protocol", "foo"],
        &["map", "qec", "--grid", "1:0:10"],
        &["map", "qec", "--grid", "0.2:0.3:1"],
        &["map", "qec", "--code", "999"],
        &["map", "chain", "--repeaters", "2"],
        &["map", "chain", "--rounds", "913,923"],
        &["efficiency", "--grid", "0.8:1:100"],
        &["efficiency", "--protocols", "P1,P9"],
        &["converge", "--start", "0.4,0.2,0.2,0.2"],
    ];
    for args in cases {
        let out = distill(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty(), "{args:?} should explain itself");
    }
}

#[test]
fn failures_leave_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eff.csv");
    let out = distill(&["efficiency", "--grid", "0.5:1:100", "--out", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(dir_entries(dir.path()).is_empty());
}

#[test]
fn validate_reports_broken_code_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.code");
    std::fs::write(&path, "name=bad\nn=3\nk=1\nd=1\nH:\nXXI\nZII\nX:\nIIX\nZ:\nIIZ\n").unwrap();
    let out = distill(&["codes", "validate", "--file", path.to_str().unwrap()]);
    assert!(!out.status.success());
    let ok = distill(&["codes", "validate", "--code", "933"]);
    assert!(ok.status.success());
}

#[test]
fn converge_check_passes_for_both_protocols() {
    for p in ["bbpssw", "dejmps"] {
        let rows = csv_rows(&stdout(&["converge", "--protocol", p, "--n", "20", "--check"]));
        assert_eq!(rows.len(), 22);
    }
}

#[test]
fn hybrid_checkpoints_table() {
    let rows = csv_rows(&stdout(&["hybrid", "--checkpoints", "--grid", "0.501:1:2000"]));
    assert_eq!(rows[0], ["index", "F_in", "kind", "i_pre", "i_match"]);
    assert!(rows.len() > 2);
}

#[test]
fn repro_writes_complete_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_distill"))
        .args(["repro"])
        .env("DISTILL_OUT_DIR", dir.path())
        .env("DISTILL_GRID_POINTS", "101")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let entries = dir_entries(dir.path());
    assert_eq!(entries.len(), 1);
    assert!(
        entries[0].starts_with("repro-") && entries[0].ends_with('Z'),
        "{entries:?}"
    );
    let run = dir.path().join(&entries[0]);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run.join("manifest.json")).unwrap()).unwrap();
    let files = manifest["files"].as_array().unwrap();
    for f in files {
        assert!(run.join(f["file"].as_str().unwrap()).is_file());
    }
    assert_eq!(dir_entries(&run).len(), files.len() + 1);
    let switch = std::fs::read_to_string(run.join("switch_points.csv")).unwrap();
    assert_eq!(switch.lines().count(), 10);
}
