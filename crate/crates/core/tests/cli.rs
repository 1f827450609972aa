use std::process::{Command, Output};

use serde_json::Value;

fn orbitlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitlab")).args(args).env_remove("ORBITLAB_THREADS").output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = orbitlab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["schema"], 1);
    v
}

fn csv_column(args: &[&str], col: &str) -> Vec<String> {
    let out = orbitlab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == col).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn branch_holomorphic_rows() {
    let v = json(&["branch", "--f0H", "2", "--f0Z", "-6", "--target", "B"]);
    let ms: Vec<i64> = v["entries"].as_array().unwrap().iter().map(|e| e["m"].as_i64().unwrap()).collect();
    assert_eq!(ms, [6, 3]);
    assert_eq!(v["admissible"], true);
    // 3 f0H admissible orbits in the image, one in three selected.
    assert_eq!(v["audit"]["image"].as_array().unwrap().len(), 6);
    assert_eq!(v["audit"]["selected"], 2);
}

#[test]
fn branch_neither_families() {
    let ms = csv_column(&["branch", "--f0H", "3", "--f0Z", "1", "--target", "B", "--n-max", "3", "--format", "csv"], "m");
    assert_eq!(ms, ["4", "7", "10", "-5", "-8", "-11"]);
}

#[test]
fn branch_b1_neither_is_not_admissible() {
    let out = orbitlab(&["branch", "--f0H", "3", "--f0Z", "1", "--target", "B1", "--format", "pretty"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("not admissible: infinite multiplicities"));
    let v = json(&["branch", "--f0H", "2", "--f0Z", "-6", "--target", "B1"]);
    assert_eq!(v["entries"][0]["mult"], 2);
}

#[test]
fn ode_dim_sequences() {
    let d = csv_column(&["ode-dim", "--f0H", "3", "--f0Z", "1", "--m", "0..6", "--sign", "-", "--format", "csv"], "dim");
    assert_eq!(d, ["0", "0", "0", "1", "1", "1", "1"]);
    let d = csv_column(&["ode-dim", "--f0H", "2", "--f0Z", "0", "--m", "0..4", "--sign", "+", "--format", "csv"], "dim");
    assert_eq!(d, ["0", "0", "1", "1", "1"]);
    let d = csv_column(
        &["ode-dim", "--f0H", "3", "--f0Z", "1", "--m", "0..6", "--sign", "-", "--z0", "0.05", "--z1", "8", "--format", "csv"],
        "dim",
    );
    assert_eq!(d, ["0", "0", "0", "1", "1", "1", "1"]);
}

#[test]
fn ode_dim_json_is_deterministic() {
    let args = ["ode-dim", "--f0H", "2", "--f0Z", "0", "--m", "0..3"];
    let a = orbitlab(&args).stdout;
    let b = Command::new(env!("CARGO_BIN_EXE_orbitlab")).args(args).env("ORBITLAB_THREADS", "1").output().unwrap().stdout;
    assert_eq!(a, b);
}

#[test]
fn volume_values_and_cone() {
    for (h, z, expect) in [("2", "-6", 2.0), ("1", "-3", 1.0)] {
        let v = json(&["volume", "--f0H", h, "--f0Z", z]);
        assert!((v["volume"].as_f64().unwrap() - expect).abs() < 1e-8);
    }
    assert_eq!(orbitlab(&["volume", "--f0H", "3", "--f0Z", "1"]).status.code(), Some(2));
}

#[test]
fn classify_examples() {
    let v = json(&["classify", "--n1", "2", "--n3", "2", "--chamber", "D1"]);
    assert_eq!((v["f0H"].as_i64(), v["f0Z"].as_i64()), (Some(2), Some(-6)));
    assert_eq!(v["class"], "Holo");
    assert_eq!(v["p1"]["proper"], true);
    assert_eq!(v["p"]["proper"], true);
    let v = json(&["classify", "--n1", "3", "--n2", "1", "--chamber", "D3"]);
    assert_eq!(v["class"], "Neither");
    assert_eq!(v["p"]["weakly_proper"], true);
    assert_eq!(v["p"]["proper"], false);
    assert_eq!(orbitlab(&["classify", "--n1", "0"]).status.code(), Some(2));
    assert_eq!(orbitlab(&["classify", "--n1", "0", "--n3", "1", "--chamber", "D1"]).status.code(), Some(2));
}

#[test]
fn system_dump_and_out_file() {
    let path = std::env::temp_dir().join(format!("orbitlab-system-{}.csv", std::process::id()));
    let out = orbitlab(&["system", "--f0H", "3", "--f0Z", "1", "--m", "1", "--sign", "+", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(text.starts_with("matrix,row,col,re,im\n"));
    // Three 3x3 matrices.
    assert_eq!(text.lines().count(), 1 + 27);
}

#[test]
fn orbit_and_reduced() {
    let v = json(&["orbit", "--w", "1/6", "--z", "2"]);
    assert_eq!(v["admissible"], true);
    assert_eq!(v["r"], "1/6");
    let v = json(&["reduced", "--f0H", "2", "--f0Z", "-6", "--target", "B1", "--sign", "-"]);
    assert_eq!(v["kind"], "Sphere2");
    let v = json(&["reduced", "--f0H", "3", "--f0Z", "1", "--m", "4", "--sign", "+"]);
    assert_eq!(v["kind"], "Point");
    assert_eq!(v["quantized"], 1);
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(orbitlab(&["branch", "--f0H", "3", "--f0Z", "2"]).status.code(), Some(2));
    assert_eq!(orbitlab(&["ode-dim", "--f0H", "3", "--f0Z", "1", "--m", "4..2"]).status.code(), Some(2));
    assert_eq!(orbitlab(&["system", "--f0H", "3", "--f0Z", "1", "--m", "1", "--sign", "x"]).status.code(), Some(2));
    assert_eq!(orbitlab(&["nonsense"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_orbitlab")).args(["volume", "--f0H", "2", "--f0Z", "-6"]).env("ORBITLAB_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_subset() {
    let v = json(&["check", "--id", "1", "--id", "3"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}
