use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_homgibbs"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_hinge() {
    let v = json(&["classify", "hinge"]);
    assert_eq!(v["fertile"], true);
    assert_eq!(v["dismantlable"], true);
    assert_eq!(v["cop_win"], true);
}

#[test]
fn classify_reads_json_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c5.json");
    fs::write(&path, r#"{"type":"constraint","q":5,"edges":[[0,1],[1,2],[2,3],[3,4],[4,0]]}"#).unwrap();
    let v = json(&["classify", path.to_str().unwrap()]);
    assert_eq!(v["dismantlable"], false);
    assert_eq!(v["cop_win"], false);
    assert_eq!(v["fertile"], true);
}

#[test]
fn solve_hinge_finds_three() {
    for prefix in [&["treegibbs"][..], &[][..]] {
        let mut args = prefix.to_vec();
        args.extend(["solve", "hinge", "--r", "2", "--lambda", "49,18,49"]);
        let v = json(&args);
        assert_eq!(v["invariant_count"], 3);
        assert_eq!(v["solutions"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn sweep_csv_shows_the_hinge_transition() {
    let out = run(&["treegibbs", "sweep", "hinge", "--r", "2", "--t", "1,2,3", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "t,invariant_count,class_count");
    assert_eq!(rows[1..], ["1,1,1", "2,1,1", "3,3,3"]);
}

#[test]
fn sample_is_a_valid_tree_configuration() {
    let v = json(&["treegibbs", "sample", "hinge", "--r", "2", "--w", "4,2,1", "--depth", "3", "--seed", "5"]);
    let spins: Vec<u64> = v["spins"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(spins.len(), 1 + 3 + 6 + 12);
    for e in v["edges"].as_array().unwrap() {
        let (a, b) = (e[0].as_u64().unwrap() as usize, e[1].as_u64().unwrap() as usize);
        // Green (0) and red (2) never touch on the hinge.
        assert!(spins[a].abs_diff(spins[b]) < 2, "edge {a}-{b}");
    }
    let dot = run(&["sample", "hinge", "--r", "2", "--w", "4,2,1", "--depth", "2", "--dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("graph G {"));
}

#[test]
fn homspace_reports() {
    assert_eq!(json(&["homspace", "path:3", "K3"])["count"], 3 * 2 * 2);
    let v = json(&["homspace", "grid:1:2", "K2", "--report", "connectivity"]);
    assert_eq!(v["components"], 2);
    assert_eq!(v["isolated"], 2);
    let v = json(&["homspace", "complete:2", "hard_core", "--report", "marginals", "--lambda", "2,1"]);
    let p0 = v["marginals"][0][0].as_f64().unwrap();
    assert!((p0 - 0.4).abs() < 1e-12);
}

#[test]
fn mcmc_hard_core_reports_bimodality() {
    let v = json(&[
        "mcmc",
        "run",
        "--board",
        "grid:3:2",
        "--graph",
        "hard_core",
        "--lambda",
        "5,1",
        "--sweeps",
        "200",
        "--replicas",
        "4",
    ]);
    assert_eq!(v["runs"].as_array().unwrap().len(), 4);
    assert_eq!(v["init"], "split");
    let rho = v["bimodality"]["final_rho"].as_array().unwrap();
    assert_eq!(rho.len(), 4);
    assert!(v["runs"][0].get("color_counts").is_none());
}

#[test]
fn bad_arguments_exit_2() {
    for args in [
        &["bogus"][..],
        &["classify"],
        &["classify", "no_such_graph"],
        &["solve", "hinge", "--r", "2", "--lambda", "1,2"],
        &["solve", "hinge", "--r", "2", "--lambda", "1,-2,1"],
        &["mcmc", "run", "--board", "grid:2:2", "--graph", "hinge", "--lambda", "1,1,1", "--init", "constant:9"],
        &["reproduce", "nope"],
        &["reproduce"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn field_is_named_in_errors() {
    let out = run(&["solve", "hinge", "--r", "2", "--lambda", "1,x,1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--lambda"));
}

fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    for entry in walk(dir) {
        files.push((entry.strip_prefix(dir).unwrap().display().to_string(), fs::read(&entry).unwrap()));
    }
    files.sort();
    files
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let args = [
        "mcmc",
        "run",
        "--board",
        "grid:4:2",
        "--graph",
        "hinge",
        "--lambda",
        "3,1,3",
        "--sweeps",
        "60",
        "--replicas",
        "3",
        "--seed",
        "11",
    ];
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let out = bin().arg("--out-dir").arg(&a).args(args).output().unwrap();
    assert!(out.status.success());
    let out = bin().arg("--out-dir").arg(&b).arg("--threads").arg("1").args(args).output().unwrap();
    assert!(out.status.success());
    let (ta, tb) = (read_tree(&a), read_tree(&b));
    assert_eq!(ta, tb);
    let names: Vec<&str> = ta.iter().map(|(n, _)| n.as_str()).collect();
    assert!(names.contains(&"manifest.json") && names.contains(&"mcmc.json"));
    assert!(names.iter().filter(|n| n.ends_with(".csv")).count() == 3);

    let manifest: Value = serde_json::from_slice(&fs::read(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 11);
    assert_eq!(manifest["command"][0], "mcmc");
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 4);
    assert!(outputs.iter().all(|o| o["sha256"].as_str().unwrap().len() == 64));
}

#[test]
fn manifest_hashes_input_files() {
    let tmp = tempfile::tempdir().unwrap();
    let graph = tmp.path().join("k3.json");
    fs::write(&graph, r#"{"type":"constraint","q":3,"edges":[[0,1],[1,2],[0,2]]}"#).unwrap();
    let out_dir = tmp.path().join("out");
    let status = bin().arg("--out-dir").arg(&out_dir).arg("classify").arg(&graph).status().unwrap();
    assert!(status.success());
    let manifest: Value = serde_json::from_slice(&fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    let report: Value = serde_json::from_slice(&fs::read(out_dir.join("classify.json")).unwrap()).unwrap();
    assert_eq!(report["dismantlable"], false);
}

#[test]
fn render_writes_ppm() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("img");
    let out = run(&[
        "mcmc",
        "run",
        "--board",
        "grid:2:2",
        "--graph",
        "hard_core",
        "--lambda",
        "1,1",
        "--sweeps",
        "5",
        "--render",
        dir.to_str().unwrap(),
        "--block",
        "2",
    ]);
    assert!(out.status.success());
    let ppm = fs::read(dir.join("replica_0.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6\n10 10\n255\n"));
}

#[test]
fn reproduce_list_and_quick_ids() {
    let out = run(&["reproduce", "--list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 14);
    let v = json(&["reproduce", "hinge-activities"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["details"]["integer_profile"], serde_json::json!(["49", "18", "49"]));
}
