use std::path::PathBuf;
use std::process::{Command, Output};

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chlattice")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV table, comment lines and header dropped.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn trivial_group_counts_one_point() {
    let o = run(&["count", "--group", &data("groups/trivial_n1.json"), "--t-grid", "0.5,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 2);
    for row in &r {
        assert_eq!(&row[1..], ["1", "0", "false"]);
    }
}

#[test]
fn cyclic_group_count() {
    let o = run(&["count", "--group", &data("groups/cyclic_n1.json"), "--t-grid", "2.2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"][0]["N"], 9);
    assert_eq!(v["pass"], true);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = run(&["count", "--group", bad.to_str().unwrap(), "--t-grid", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let o = run(&["count", "--group", &data("groups/trivial_n1.json"), "--t-grid", "2,1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["count", "--group", "/nonexistent/group.json", "--t-grid", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_spectral_data_gives_zero_main_term() {
    let o = run(&[
        "mainterm",
        "--group",
        &data("groups/trivial_n1.json"),
        "--spectral",
        &data("spectral/empty.json"),
        "--t-grid",
        "1,2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    for row in rows(&stdout(&o)) {
        assert_eq!(row[2].parse::<f64>().unwrap(), 0.0);
        assert_eq!(row[3], "");
    }
}

#[test]
fn average_routes_agree_on_cyclic_group() {
    let o = run(&["average", "--group", &data("groups/cyclic_n1.json"), "--t-grid", "1,2.2", "--zp", "0.2,0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for row in rows(&stdout(&o)) {
        assert_eq!(&row[7..], ["true", "true"]);
    }
}

#[test]
fn output_goes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("vol.csv");
    let o = run(&["volume", "--n", "2", "--t-grid", "0.5,1", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# chlattice volume table v1"));
    assert!(rows(&text).iter().all(|r| r[5] == "true"));
}

#[test]
fn verify_passes_and_catches_a_wrong_kernel_constant() {
    let o = run(&["verify", "--draws", "20", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = run(&["verify", "--draws", "20", "--inject-kernel-scale", "1.001", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<&str> = v["summary"]["failed"].as_array().unwrap().iter().map(|s| s.as_str().unwrap()).collect();
    assert_eq!(failed, ["kernel_identity_n1", "kernel_identity_n2", "kernel_identity_n3", "kernel_identity_n4"]);
}
