use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linsetlab")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn failure(args: &[&str]) -> String {
    let out = run(args);
    assert!(!out.status.success(), "{args:?} should fail");
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn weights_of_x_to_the_q() {
    let r = report(&["weights", "--q", "2", "--poly", "0,2,0,0,0"]);
    assert_eq!(r["command"], "weights");
    assert_eq!(r["results"]["weights"], serde_json::json!({"1": 31}));
    assert_eq!(r["results"]["class"], "scattered");
    assert_eq!(r["seed"], Value::Null);
}

#[test]
fn weights_of_a_construction_with_points() {
    let r = report(&["weights", "--q", "3", "--construction", "three_club", "--points"]);
    assert_eq!(r["results"]["weights"], serde_json::json!({"1": 108, "3": 1}));
    assert_eq!(r["results"]["points"]["3"].as_array().unwrap().len(), 1);
}

#[test]
fn cubic_triangle() {
    let r = report(&["cubic", "--q", "3", "--coeffs", "0,0,0,0,1,0,0,0,0,0"]);
    assert_eq!(r["results"]["points"], 9);
    assert_eq!(r["results"]["type"], "three_rational_lines");
}

#[test]
fn verify_q2() {
    let r = report(&["verify", "--q", "2"]);
    assert_eq!(r["results"]["all_pass"], true);
    assert_eq!(r["results"]["sizes"], serde_json::json!([17, 19, 21, 23, 25, 27, 31]));
}

#[test]
fn rank_spectrum_csv() {
    let out = run(&["rank-spectrum", "--q", "2", "--poly", "1,1,1,1,1", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "rank,words\n1,31\n4,496\n5,496\n");
}

#[test]
fn census_with_checkpoints_writes_report() {
    let dir = std::env::temp_dir().join(format!("linsetlab-cli-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let out_path = dir.join("census.json");
    std::fs::create_dir_all(&dir).unwrap();
    let ck = dir.join("parts");
    let args = [
        "census",
        "--q",
        "2",
        "--strategy",
        "a1_zero_leading_one",
        "--partitions",
        "4",
        "--checkpoint-dir",
        ck.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ];
    assert!(run(&args).status.success());
    let first: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(run(&args).status.success());
    let second: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(first["results"]["entries"], second["results"]["entries"]);
    assert_eq!(first["results"]["strategy"], "a1_zero_leading_one");
    assert_eq!(first["results"]["partitions"], 4);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn seeded_sampling_is_reproducible() {
    let a = report(&["omega2-line", "--q", "2", "--samples", "200", "--seed", "9"]);
    let b = report(&["omega2-line", "--q", "2", "--samples", "200", "--seed", "9"]);
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["seed"], 9);
    let counts = a["results"]["counts"].as_object().unwrap();
    assert!(counts.keys().all(|k| ["0", "1", "2", "3", "7"].contains(&k.as_str())));
}

#[test]
fn projection_of_a_graph_plane_matches() {
    let r = report(&["project", "--q", "2", "--poly", "1,1,1,1,1"]);
    assert_eq!(r["results"]["matches_graph"], true);
    assert_eq!(r["results"]["class"], "club4");
    let s = report(&["project", "--q", "3", "--samples", "5"]);
    assert!(s["results"]["entries"].as_array().unwrap().iter().all(|e| e["legal"] == true));
}

#[test]
fn plane_profiles() {
    let r = report(&["omega2-plane", "--q", "2", "--samples", "5"]);
    assert_eq!(r["results"]["disallowed_arcs"], 0);
}

#[test]
fn errors_are_distinct_and_nonzero() {
    assert!(failure(&["weights", "--q", "2", "--poly", "0,x,0,0,0"]).contains("malformed element encoding \"x\""));
    assert!(failure(&["weights", "--q", "2", "--poly", "0,99,0,0,0"]).contains("out of range"));
    assert!(failure(&["weights", "--q", "2", "--poly", "0,1,0,0"]).contains("dimension mismatch"));
    assert!(failure(&["weights", "--q", "6", "--poly", "0,1,0,0,0"]).contains("not a prime power"));
    assert!(failure(&["weights", "--q", "9", "--poly", "0,1,0,0,0"]).contains("GF(3^10)"));
    assert!(failure(&["census", "--q", "3", "--strategy", "exhaustive_all"]).contains("does not support q = 3"));
    assert!(failure(&["omega2-line", "--q", "2", "--p1", "1,0,0,0,0", "--p2", "0,1,0,0,0"]).contains("not disjoint"));
    assert!(failure(&["weights", "--q", "2", "--construction", "zanella", "--params", "1,1"]).contains("beta^(q+1)"));
}

#[test]
fn modulus_table_override() {
    let dir = std::env::temp_dir().join(format!("linsetlab-moduli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("moduli.txt");
    std::fs::write(&path, "2 1 1 1\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_linsetlab"))
        .args(["weights", "--q", "2", "--poly", "0,2,0,0,0"])
        .env("LINSETLAB_MODULI", &path)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("GF(2^5)"));
    std::fs::remove_dir_all(&dir).unwrap();
}
