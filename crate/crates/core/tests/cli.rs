use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_loopcocycle"))
}

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.json");
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], config: &Path) -> Output {
    bin().args(args).arg("--config").arg(config).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn construct_prints_grading() {
    let o = run(&["construct"], &shipped("a2-twisted.json"));
    assert!(o.status.success(), "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("# eigenspaces\nresidue\tdim\tbasis\n0\t3\t"), "{out}");
    assert!(out.contains("\n1\t5\t"));
}

#[test]
fn every_shipped_config_constructs_or_fails_loudly() {
    for entry in std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")).unwrap() {
        let path = entry.unwrap().path();
        let o = run(&["construct"], &path);
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if name == "corrupted-jacobi.json" {
            assert_eq!(o.status.code(), Some(2));
            assert!(stderr(&o).contains("Jacobi identity violated on basis triple (0, 1, 2)"), "{}", stderr(&o));
        } else {
            assert!(o.status.success(), "{name}: {}", stderr(&o));
        }
    }
}

#[test]
fn unknown_key_is_rejected_with_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"density": {"ladder": [4], "grdi": 8}}"#);
    let o = run(&["density-demo"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("density") && err.contains("grdi"), "{err}");
}

#[test]
fn missing_config_is_an_error() {
    let o = run(&["construct"], Path::new("/nonexistent/run.json"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn degree_cap_overflow_is_surfaced() {
    let o = run(&["verify", "--seed", "3"], &shipped("degree-cap-stress.json"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds the degree cap 3"), "{}", stderr(&o));
}

#[test]
fn verify_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"algebra": "sl3", "r": [2], "automorphisms": ["outer_transpose"], "verify": {"triples": 40}}"#);
    let a = run(&["verify", "--seed", "5", "--jobs", "1"], &cfg);
    let b = run(&["verify", "--seed", "5", "--jobs", "3"], &cfg);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let out = String::from_utf8(a.stdout).unwrap();
    assert!(out.contains("jacobi\t40\t0"), "{out}");
}

#[test]
fn out_dir_holds_tsv_json_and_timing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let o = bin()
        .args(["h2-scan", "--out"])
        .arg(&out)
        .arg("--config")
        .arg(shipped("sl2-inner-twisted.json"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("h2-scan.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["field_order"], 2);
    assert_eq!(json["config"]["r"], serde_json::json!([2]));
    assert_eq!(json["passed"], true);
    assert!(json.get("seconds").is_none());
    let timing: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("h2-scan.timing.json")).unwrap()).unwrap();
    assert!(timing["seconds"].as_f64().unwrap() >= 0.0);
    let tsv = std::fs::read_to_string(out.join("h2-scan.tsv")).unwrap();
    assert!(tsv.lines().nth(2).unwrap().starts_with("(0)\t3\t"), "{tsv}");
}

#[test]
fn density_demo_reports_failed_check_through_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d");
    let o = bin().args(["density-demo", "--out"]).arg(&out).arg("--config").arg(shipped("density-exp-sin.json")).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("FAILED c0_strictly_decreasing"));
    let plot = std::fs::read_to_string(out.join("density-demo.plot.dat")).unwrap();
    assert_eq!(plot.lines().count(), 5);
    assert!(plot.starts_with("4 5.913129e-4 "), "{plot}");

    let o = run(&["density-demo"], &shipped("density-weierstrass.json"));
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn h2_scan_matches_twisted_targets() {
    let o = run(&["h2-scan", "--jobs", "2"], &shipped("sl2-klein-twisted.json"));
    assert!(o.status.success(), "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("(0,0)\t3\t2\t0\t2\t2\t2\ttrue\ttrue\ttrue"), "{out}");
}
