use std::path::Path;
use std::process::Command;

use randomd::apps::SparseGameMatrix;
use sha2::{Digest, Sha256};

fn randomd(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_randomd"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn pennies(dir: &Path) -> String {
    let path = dir.join("mp.mtx");
    SparseGameMatrix::from_dense(&[vec![1.0, -1.0], vec![-1.0, 1.0]])
        .unwrap()
        .write_matrix_market(std::fs::File::create(&path).unwrap())
        .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn matching_pennies_game() {
    let dir = tempfile::tempdir().unwrap();
    let mp = pennies(dir.path());
    let (code, stdout) = randomd(&[
        "game",
        "--matrix",
        &mp,
        "--epsilon",
        "0.05",
        "--sigma",
        "0.1",
        "--seed",
        "7",
        "--repeat",
        "10",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let runs = v["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 10);
    let within = runs
        .iter()
        .filter(|r| r["gap"].as_f64().unwrap() <= 0.05)
        .count();
    assert!(within >= 9, "{within}/10");
    assert_eq!(runs[3]["seed"], 10);
    assert!(runs[0]["solution"]["per_player_bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn single_step_bandit_writes_one_trace_row() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.csv");
    let out = dir.path().join("s.json");
    let (code, _) = randomd(&[
        "bandit",
        "--arms",
        "2",
        "--steps",
        "1",
        "--seed",
        "1",
        "--trace",
        trace.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(trace).unwrap();
    assert_eq!(text.lines().count(), 2);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(v["runs"][0]["bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn exit_codes() {
    assert_eq!(randomd(&["experts", "--n", "1", "--steps", "5"]).0, 2);
    assert_eq!(randomd(&["game", "--bogus"]).0, 2);
    assert_eq!(randomd(&["game", "--matrix", "/nonexistent.mtx"]).0, 2);
    assert_eq!(
        randomd(&["game", "--matrix", "/nonexistent.mtx", "--epsilon", "0"]).0,
        2
    );
    assert_eq!(randomd(&["--help"]).0, 0);

    let dir = tempfile::tempdir().unwrap();
    let losses = dir.path().join("l.csv");
    std::fs::write(&losses, "0.5,0.2\n0.1,1.7\n").unwrap();
    let l = losses.to_str().unwrap();
    // A loss above the declared bound is a contract violation.
    assert_eq!(randomd(&["experts", "--losses", l, "--steps", "2"]).0, 3);
    assert_eq!(
        randomd(&["experts", "--losses", l, "--steps", "2", "--m", "2"]).0,
        0
    );
    // Replaying past the end of the list is a run-time failure too.
    assert_eq!(
        randomd(&["experts", "--losses", l, "--steps", "3", "--m", "2"]).0,
        3
    );
}

#[test]
fn bound_tables() {
    let (code, out) = randomd(&[
        "bounds", "--kinds", "T1-mean", "--m", "1", "--n", "2", "--steps", "10000",
    ]);
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert!((row[5].parse::<f64>().unwrap() - 0.016651).abs() < 1e-6);
    let (_, out) = randomd(&["bounds", "--n", ""]);
    assert_eq!(out, "kind,M,n,N,omega,bound\n");
    let (_, out) = randomd(&["bounds", "--n", "2,10,100", "--steps", "100,1000,10000"]);
    assert_eq!(out.lines().count(), 10);
    assert_eq!(randomd(&["bounds", "--kinds", "nope"]).0, 2);
}

#[test]
fn summaries_hash_identically_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let mp = pennies(dir.path());
    let hash = |args: &[&str]| {
        let (code, out) = randomd(args);
        assert_eq!(code, 0);
        hex::encode(Sha256::digest(out.as_bytes()))
    };
    for args in [
        vec![
            "bandit", "--arms", "3", "--steps", "500", "--seed", "2", "--repeat", "2",
        ],
        vec![
            "experts",
            "--n",
            "4",
            "--steps",
            "500",
            "--algorithm",
            "md2",
            "--seed",
            "2",
        ],
        vec![
            "game",
            "--matrix",
            mp.as_str(),
            "--epsilon",
            "0.2",
            "--seed",
            "2",
        ],
        vec![
            "sampler-test",
            "--n",
            "4",
            "--samples",
            "5000",
            "--seed",
            "2",
        ],
    ] {
        assert_eq!(hash(&args), hash(&args));
    }
    let a = hash(&["bandit", "--arms", "3", "--steps", "500", "--seed", "2"]);
    let b = hash(&["bandit", "--arms", "3", "--steps", "500", "--seed", "3"]);
    assert_ne!(a, b);
}
