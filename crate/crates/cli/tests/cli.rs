use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use toricnp_cli::experiment::without_timing;

fn toricnp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toricnp")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stripped(path: &Path) -> Vec<Value> {
    fs::read_to_string(path).unwrap().lines().map(|l| without_timing(l).unwrap()).collect()
}

const SPEC: &str = "\
# two primes, three seeds
families = 1,1,2,1
primes = 3, 5
samples = 3
seed = 11
";

#[test]
fn experiment_is_reproducible_and_resumable() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("grid.spec");
    fs::write(&spec, SPEC).unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");

    let out = toricnp(&["experiment", spec.to_str().unwrap(), "--out", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = json_of(&out);
    assert_eq!(summary["records"], 6);
    assert_eq!(summary["written"], 6);
    assert_eq!(summary["violation"], false);
    for g in summary["groups"].as_array().unwrap() {
        let counted: u64 = ["Equal", "LiesAbove", "Violation", "degenerate_suspect", "refused"]
            .iter()
            .map(|k| g[*k].as_u64().unwrap())
            .sum();
        assert_eq!(counted, g["records"].as_u64().unwrap());
    }

    // Interrupted run: two full records and half of the third.
    let full = fs::read_to_string(&a).unwrap();
    let cut: usize = full.lines().take(2).map(|l| l.len() + 1).sum::<usize>() + 40;
    fs::write(&b, &full[..cut]).unwrap();
    let out = toricnp(&["experiment", spec.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json_of(&out);
    assert_eq!((summary["written"].as_u64(), summary["skipped"].as_u64()), (Some(4), Some(2)));
    assert_eq!(stripped(&a), stripped(&b));

    // A completed run is a no-op.
    let out = toricnp(&["experiment", spec.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert_eq!(json_of(&out)["written"], 0);
    assert_eq!(stripped(&b).len(), 6);
}

#[test]
fn experiment_validation_and_refusal() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.spec");
    let out_path = dir.path().join("o.jsonl");
    fs::write(&spec, "families = 1,1,6,1\nprimes = 3\nsamples = 2\n").unwrap();
    let out = toricnp(&["experiment", spec.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!out_path.exists());

    fs::write(&spec, "families = 1,1,2,1\nprimes = 3\nsamples = 2\nbudget = 10\n").unwrap();
    let out = toricnp(&["experiment", spec.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["groups"][0]["refused"], 2);
}

#[test]
fn single_commands() {
    let dir = tempfile::tempdir().unwrap();

    let out = toricnp(&["hodge", "--family", "1,1,2,1"]);
    assert_eq!(json_of(&out)["polygon"], serde_json::json!([[0, [0, 1]], [1, [0, 1]], [4, [3, 1]]]));
    assert_eq!(json_of(&toricnp(&["hodge", "--family", "1,1,4,1"]))["D"], 2);

    let seg = dir.path().join("seg02.txt");
    let csv = dir.path().join("hp.csv");
    fs::write(&seg, "1\n0\n2\n").unwrap();
    let out = toricnp(&["hodge", "--polytope", seg.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&csv).unwrap(), "x,num,den\n0,0,1\n1,0,1\n2,1,2\n");

    let out = toricnp(&["lfunction", "--family", "1,1,2,1", "--p", "3", "--seed", "7", "--check-overdegree"]);
    let r = json_of(&out);
    assert_eq!(r["N"], 4);
    assert_eq!(r["detail"]["overdegree_vanishes"], true);
    assert_ne!(r["verdict"], "Violation");

    let off = dir.path().join("t.off");
    let out = toricnp(&["triangulate", "--family", "2,1,6,2", "--verify", "--off", off.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let t = json_of(&out);
    assert_eq!(t["verified"], true);
    assert_eq!(t["cell_volume"], 2);
    assert!(fs::read_to_string(&off).unwrap().starts_with("OFF\n"));

    let out = toricnp(&["verify-ab", "--family", "1,1,4,1", "--p", "3"]);
    let v = json_of(&out);
    assert_eq!(v["moduli"], serde_json::json!({"delta_prime": 1, "delta_d_cells": 2, "ordinarity_modulus": 2}));
    assert_eq!(v["congruence_holds"], true);

    let m = dir.path().join("m.txt");
    fs::write(&m, "2 2\n-1 1\n0 2\n").unwrap();
    assert_eq!(json_of(&toricnp(&["snf", "--matrix", m.to_str().unwrap()]))["diag"], serde_json::json!([1, 2]));
}

#[test]
fn exit_codes() {
    assert_eq!(toricnp(&["lfunction", "--family", "1,1,6,1", "--p", "3"]).status.code(), Some(4));
    assert_eq!(toricnp(&["lfunction", "--family", "1,1,2,1", "--p", "3", "--budget", "5"]).status.code(), Some(3));
    assert_eq!(toricnp(&["hodge", "--family", "1,1"]).status.code(), Some(4));
    assert_eq!(toricnp(&["snf", "--matrix", "/nonexistent/m.txt"]).status.code(), Some(1));
    assert_eq!(toricnp(&["triangulate", "--family", "1,1,2,4"]).status.code(), Some(4));
    assert_eq!(toricnp(&["--help"]).status.code(), Some(0));
}
