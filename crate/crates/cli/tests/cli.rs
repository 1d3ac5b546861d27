use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn strongblock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strongblock"))
        .args(args)
        .env_remove("STRONGBLOCK_BUDGET")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad report ({e}): {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn schema() -> Value {
    let text =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report-schema.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn required(v: &Value) -> Vec<&str> {
    v["required"].as_array().unwrap().iter().map(|k| k.as_str().unwrap()).collect()
}

/// Top-level layout and the per-command required keys of the published schema.
fn check_schema(out: &Output) {
    let text = String::from_utf8_lossy(&out.stdout);
    let schema = schema();
    let top = required(&schema);
    let positions: Vec<usize> = top.iter().map(|k| text.find(&format!("\n  \"{k}\"")).expect(k)).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "top-level key order");

    let r = report(out);
    let command = r["command"].as_str().unwrap();
    let branch = schema["allOf"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["if"]["properties"]["command"]["const"] == command)
        .expect("schema covers command");
    for part in ["inputs", "result"] {
        for key in required(&branch["then"]["properties"][part]) {
            assert!(r[part].get(key).is_some(), "{command}.{part}.{key} missing");
        }
    }
}

fn without_elapsed(out: &Output) -> Value {
    let mut r = report(out);
    r.as_object_mut().unwrap().remove("elapsed_seconds");
    r
}

#[test]
fn verify_quadric_fixture() {
    let out = strongblock(&["verify", fixture("hyperbolic_quadric_pg32.txt").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["is_strong"], true);
    assert_eq!(r["result"]["lemma1"]["holds"], true);
    assert_eq!(r["result"]["lemma2"]["holds"], true);
    check_schema(&out);
}

#[test]
fn verify_coplanar_points_fails() {
    let plane = fixture("plane_pg32.txt");
    let out = strongblock(&["verify", plane.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["result"]["failing_hyperplanes"].as_array().unwrap().len(), 1);
    let total = strongblock(&["verify", "--total", plane.to_str().unwrap()]);
    assert_eq!(report(&total)["result"]["failing_hyperplanes"].as_array().unwrap().len(), 14);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "pg 4 2\n1,0,0,0\n1,0,two,0\n").unwrap();
    let out = strongblock(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert!(out.stdout.is_empty());

    assert_eq!(code(&strongblock(&["verify", "/nonexistent/file.txt"])), 2);
    assert_eq!(code(&strongblock(&["search", "--k", "4"])), 2);
}

#[test]
fn code_check_verdicts() {
    let out = strongblock(&["code-check", fixture("quadric_code.txt").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["minimal"], true);
    assert_eq!(r["result"]["geometry"]["is_strong"], true);
    assert_eq!(r["result"]["verdicts_agree"], true);
    check_schema(&out);

    let out = strongblock(&["code-check", fixture("counterexample_code.txt").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["result"]["minimal"], false);
    assert_eq!(r["result"]["verdicts_agree"], true);
    let witness = &r["result"]["witnesses"][0];
    assert_eq!(witness[0]["vector"], serde_json::json!([1, 1, 1]));

    let dir = tempfile::tempdir().unwrap();
    let deficient = dir.path().join("g.txt");
    std::fs::write(&deficient, "code 2 3 2\n1,1,0\n1,1,0\n").unwrap();
    let out = strongblock(&["code-check", deficient.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank 1"));

    std::fs::write(&deficient, "code 2 3 2\n1,1,0\n0,1,0\n").unwrap();
    let r = report(&strongblock(&["code-check", deficient.to_str().unwrap()]));
    assert_eq!(r["result"]["degenerate"], true);
    assert_eq!(r["result"]["geometry"], Value::Null);
}

#[test]
fn classify_golden() {
    let out = strongblock(&["classify", "--k", "4", "--q", "2", "--size", "9", "--golden"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["orbit_count"], 5);
    assert_eq!(r["result"]["subsets"], 5005);
    assert_eq!(r["result"]["strong_subsets"], 280);
    assert_eq!(r["result"]["golden"]["matches"], true);
    let sizes: Vec<u64> =
        r["result"]["orbits"].as_array().unwrap().iter().map(|o| o["orbit_size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, [2520, 1680, 420, 280, 105]);
    check_schema(&out);

    let again = strongblock(&["classify", "--k", "4", "--q", "2", "--size", "9", "--golden", "--workers", "1"]);
    let mut a = without_elapsed(&out);
    let mut b = without_elapsed(&again);
    a["inputs"]["workers"] = Value::Null;
    b["inputs"]["workers"] = Value::Null;
    assert_eq!(a, b);

    assert_eq!(code(&strongblock(&["classify", "--k", "4", "--size", "8", "--golden"])), 2);
}

#[test]
fn search_emits_verifiable_sets() {
    let dir = tempfile::tempdir().unwrap();
    let emit = dir.path().join("found.txt");
    let out = strongblock(&["search", "--k", "4", "--q", "2", "--size", "9", "--emit", emit.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["found_count"], 280);
    assert_eq!(r["result"]["exhausted"], true);
    assert_eq!(r["result"]["verified"], true);
    check_schema(&out);

    let sets = strongblock::format::parse_point_sets(&std::fs::read_to_string(&emit).unwrap()).unwrap();
    assert_eq!(sets.len(), 280);
    let first = dir.path().join("first.txt");
    std::fs::write(&first, strongblock::format::write_point_set(&sets[0])).unwrap();
    assert_eq!(code(&strongblock(&["verify", first.to_str().unwrap()])), 0);
}

#[test]
fn search_exit_codes_and_determinism() {
    let none = strongblock(&["search", "--k", "4", "--size", "8"]);
    assert_eq!(code(&none), 1);
    assert_eq!(report(&none)["result"]["exhausted"], true);

    let over = strongblock(&["search", "--k", "5", "--size", "12", "--budget", "1000"]);
    assert_eq!(code(&over), 3);
    assert_eq!(report(&over)["result"]["exhausted"], false);
    assert_eq!(
        code(&strongblock(&["search", "--k", "5", "--size", "12", "--mode", "exhaustive", "--budget", "1000"])),
        3
    );

    let env = Command::new(env!("CARGO_BIN_EXE_strongblock"))
        .args(["search", "--k", "5", "--size", "12"])
        .env("STRONGBLOCK_BUDGET", "500")
        .output()
        .unwrap();
    assert_eq!(code(&env), 3);
    assert_eq!(report(&env)["inputs"]["budget"], 500);

    let args = [
        "search",
        "--k",
        "6",
        "--size",
        "15",
        "--mode",
        "line-union",
        "--budget",
        "2000",
        "--seed",
        "9",
        "--workers",
        "2",
    ];
    let a = strongblock(&args);
    let b = strongblock(&args);
    assert_eq!(without_elapsed(&a), without_elapsed(&b));
    assert_eq!(report(&a)["result"]["verified"], true);
    assert_eq!(code(&strongblock(&["search", "--k", "4", "--size", "9", "--mode", "sideways"])), 2);
}

#[test]
fn quadric_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (k, size) in [("4", 9), ("5", 15)] {
        let file = dir.path().join(format!("q{k}.txt"));
        let out = strongblock(&["quadric", "--k", k, "--out", file.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
        assert_eq!(report(&out)["result"]["size"], size);
        check_schema(&out);
        let verified = strongblock(&["verify", file.to_str().unwrap()]);
        assert_eq!(code(&verified), 0);
        assert_eq!(report(&verified)["result"]["is_strong"], true);
    }
    assert_eq!(code(&strongblock(&["quadric", "--k", "3"])), 2);
}
