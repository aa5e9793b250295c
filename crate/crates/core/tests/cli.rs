use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_convexpmf"))
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn fit_small_sample() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.txt", "0\n0\n0\n1\n");
    let out = run(&["fit", &data, "--certify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["n"], 4);
    let fitted = floats(&doc["fitted"]);
    assert_eq!(fitted.len(), 2);
    assert!((fitted[0] - 0.75).abs() < 1e-14 && (fitted[1] - 0.25).abs() < 1e-14);
    assert!((doc["mixture"]["1"].as_f64().unwrap() - 0.25).abs() < 1e-14);
    assert!((doc["mixture"]["2"].as_f64().unwrap() - 0.75).abs() < 1e-14);
    assert_eq!(doc["final_l"], 2);
    assert_eq!(doc["certificate"]["passed"], true);
}

#[test]
fn fit_matches_oracle_values() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.txt", "0\n0\n1\n2\n");
    let out = run(&["fit", &data, "--certify"]);
    assert_eq!(out.status.code(), Some(0));
    let fitted = floats(&json(&out)["fitted"]);
    let want = [0.5, 7.0 / 24.0, 1.0 / 6.0, 1.0 / 24.0];
    assert_eq!(fitted.len(), 4);
    for (a, b) in fitted.iter().zip(want) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn counts_format_and_csv_output() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "c.csv", "value,count\n0,3\n1,1\n");
    let out = run(&["fit", &data, "--format", "counts", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,empirical,fitted,weight");
    assert_eq!(lines[1], "0,0.75,0.75,0.0");
    assert_eq!(lines[2], "1,0.25,0.25,0.25");
    assert_eq!(lines[3], "2,0.0,0.0,0.75");
}

#[test]
fn fit_input_errors() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "e.txt", "");
    let out = run(&["fit", &empty]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no observations"));

    let bad = write(&dir, "b.txt", "0\n1\n2.5\n");
    let out = run(&["fit", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let out = run(&["fit", &dir.path().join("missing").to_string_lossy()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fit_writes_to_file() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.txt", "0\n1\n1\n3\n");
    let target = dir.path().join("fit.json");
    let out = run(&["fit", &data, "--out", &target.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert!(doc.get("certificate").is_none());
}

fn fit_to(dir: &TempDir, data: &str) -> String {
    let target = dir.path().join("fit.json");
    let out = run(&["fit", data, "--out", &target.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(0));
    target.to_string_lossy().into_owned()
}

#[test]
fn certify_round_trip_and_negative_controls() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.txt", "0\n0\n1\n2\n2\n5\n6\n9\n");
    let fit = fit_to(&dir, &data);

    let out = run(&["certify", &fit, &data]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["passed"], true);

    // tampered weight
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&fit).unwrap()).unwrap();
    let (key, w) = {
        let m = doc["mixture"].as_object().unwrap();
        let (k, v) = m.iter().next().unwrap();
        (k.clone(), v.as_f64().unwrap())
    };
    doc["mixture"][&key] = Value::from(w + 1e-3);
    let tampered = write(&dir, "tampered.json", &doc.to_string());
    let out = run(&["certify", &tampered, &data]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["passed"], false);

    // wrong data
    let other = write(&dir, "other.txt", "0\n3\n3\n4\n7\n");
    let out = run(&["certify", &fit, &other]);
    assert_eq!(out.status.code(), Some(2));

    // schema mismatch
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&fit).unwrap()).unwrap();
    doc["schema_version"] = Value::from(7);
    let wrong = write(&dir, "wrong.json", &doc.to_string());
    assert_eq!(run(&["certify", &wrong, &data]).status.code(), Some(1));
    let junk = write(&dir, "junk.json", "{\"hello\": 1}");
    assert_eq!(run(&["certify", &junk, &data]).status.code(), Some(1));
}

#[test]
fn fit_output_is_stable_under_reserialization() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.txt", "0\n0\n1\n1\n1\n2\n4\n4\n8\n");
    let fit = fit_to(&dir, &data);
    let text = fs::read_to_string(&fit).unwrap();
    let doc: convexpmf::cli::FitDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&doc).unwrap() + "\n", text);
}

#[test]
fn simulate_point_mass_and_determinism() {
    let args = ["simulate", "--dist", "tri:1", "--n", "10", "--replicates", "5", "--functionals", "l2"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    let text = String::from_utf8(a.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("distribution,param,n,estimator,functional,value,mc_stderr"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    for r in rows {
        let cols: Vec<&str> = r.split(',').collect();
        assert_eq!(cols[4], "l2");
        assert_eq!(cols[5].parse::<f64>().unwrap(), 0.0);
    }
    assert_eq!(run(&args).stdout, a.stdout);
}

#[test]
fn simulate_json_and_file_output() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("sim.json");
    let out = run(&[
        "simulate", "--dist", "pois:0.59", "--n", "20", "--replicates", "3", "--format", "json", "--out",
        &target.to_string_lossy(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&fs::read_to_string(Path::new(&target)).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let spec = &doc["experiments"][0]["spec"];
    assert_eq!(spec["distribution"]["family"], "poisson");
    assert_eq!(spec["distribution"]["param"].as_f64(), Some(0.59));
    assert_eq!(doc["experiments"][0]["truth_convex"], false);
}

#[test]
fn simulate_rejects_bad_arguments() {
    let out = run(&["simulate", "--dist", "unif:3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(run(&["simulate", "--dist", "tri:3", "--functionals", "mode"]).status.code(), Some(1));
    assert_eq!(run(&["simulate", "--dist", "tri:3", "--replicates", "0"]).status.code(), Some(1));
    assert_eq!(run(&["simulate"]).status.code(), Some(1));
}
