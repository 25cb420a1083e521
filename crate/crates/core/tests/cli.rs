use std::fs;
use std::path::Path;
use std::process::Command;

use gl_core::completeness::CertificateFile;
use serde_json::Value;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn gl(args: &[&str]) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_gl"))
        .args(args)
        .output()
        .expect("binary runs");
    Outcome {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decide_exit_codes() {
    let lob = gl(&["decide", "Box(Box p --> p) --> Box p"]);
    assert_eq!((lob.code, lob.stdout.trim()), (0, "theorem"));
    let refl = gl(&["decide", "Box p --> p"]);
    assert_eq!((refl.code, refl.stdout.trim()), (1, "non-theorem"));
    assert_eq!(gl(&["decide", "p &&"]).code, 2);
    assert_eq!(gl(&["decide"]).code, 2);
}

#[test]
fn certificate_round_trip_through_check_model() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let dot = dir.path().join("cert.dot");
    let out = gl(&[
        "decide",
        "Box p --> p",
        "--cert",
        path_str(&cert),
        "--dot",
        path_str(&dot),
    ]);
    assert_eq!(out.code, 1);
    let file: CertificateFile = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    file.to_certificate().unwrap().verify().unwrap();
    assert!(fs::read_to_string(&dot).unwrap().starts_with("digraph"));

    let check = gl(&["check-model", path_str(&cert), "Box p --> p"]);
    assert_eq!(check.code, 1);
    assert!(check.stdout.contains(&format!("{}: false", file.witness)));
    let frame = gl(&["frame-check", path_str(&cert)]);
    assert_eq!(frame.code, 0, "{}", frame.stdout);
    assert!(frame.stdout.contains("validates_lob: true"));
}

#[test]
fn formulas_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.txt");
    fs::write(&f, "Box p -->\n  Box Box p\n").unwrap();
    let out = gl(&["decide", &format!("@{}", path_str(&f))]);
    assert_eq!(out.code, 0);
    assert_eq!(gl(&["parse", "@/no/such/file"]).code, 2);
}

#[test]
fn parse_json() {
    let out = gl(&["parse", "--json", "Box (p && q)"]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["formula"], "Box (p && q)");
    assert_eq!(v["subformulas"].as_array().unwrap().len(), 4);
}

#[test]
fn lemma_emit_then_check_proof() {
    let dir = tempfile::tempdir().unwrap();
    let proof = dir.path().join("proof.json");
    let out = gl(&[
        "lemma",
        "box_iff",
        "p",
        "q && r",
        "--emit",
        path_str(&proof),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(
        out.stdout.trim(),
        "Box (p <-> q && r) --> (Box p <-> Box (q && r))"
    );
    let check = gl(&["check-proof", path_str(&proof)]);
    assert_eq!(
        (check.code, check.stdout.as_str()),
        (0, out.stdout.as_str())
    );

    let mut v: Value = serde_json::from_str(&fs::read_to_string(&proof).unwrap()).unwrap();
    v["steps"][0]["axiom"] = Value::from("p --> p");
    fs::write(&proof, v.to_string()).unwrap();
    let bad = gl(&["check-proof", path_str(&proof)]);
    assert_eq!(bad.code, 1);
    assert!(
        bad.stderr.contains("step 0: `p --> p` is not an instance"),
        "{}",
        bad.stderr
    );
}

#[test]
fn lemma_usage_errors() {
    assert_eq!(gl(&["lemma", "no_such_lemma"]).code, 2);
    assert_eq!(gl(&["lemma", "imp_refl", "p", "q"]).code, 2);
    assert_eq!(gl(&["lemma", "conjlist_mem", "s", "p", "q"]).code, 2);
    let list = gl(&["lemma", "--list"]);
    assert_eq!(list.code, 0);
    assert!(list.stdout.lines().any(|l| l.starts_with("lob ")));
}

#[test]
fn bisim_pairs_file() {
    let dir = tempfile::tempdir().unwrap();
    let m1 = dir.path().join("m1.json");
    let m2 = dir.path().join("m2.json");
    let pairs = dir.path().join("pairs.json");
    fs::write(&m1, r#"{"worlds": ["a"], "rel": [], "val": {"p": ["a"]}}"#).unwrap();
    fs::write(
        &m2,
        r#"{"worlds": ["x", "y"], "rel": [], "val": {"p": ["x", "y"]}}"#,
    )
    .unwrap();
    let out = gl(&[
        "bisim",
        path_str(&m1),
        path_str(&m2),
        "--pairs",
        path_str(&pairs),
    ]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&pairs).unwrap()).unwrap();
    assert_eq!(v["pairs"], serde_json::json!([["a", "x"], ["a", "y"]]));

    fs::write(
        &m2,
        r#"{"worlds": ["x", "y"], "rel": [["x", "y"]], "val": {"p": ["x", "y"]}}"#,
    )
    .unwrap();
    assert_eq!(gl(&["bisim", path_str(&m1), path_str(&m2)]).code, 1);
}

#[test]
fn frame_check_rejects_reflexive_frames() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    fs::write(
        &m,
        r#"{"worlds": ["a", "b"], "rel": [["a", "a"], ["a", "b"]], "val": {}}"#,
    )
    .unwrap();
    let out = gl(&["frame-check", "--json", path_str(&m)]);
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["irreflexive"], false);
    assert_eq!(v["validates_lob"], false);
    fs::write(&m, r#"{"worlds": ["a"], "rel": [["a", "z"]], "val": {}}"#).unwrap();
    assert_eq!(gl(&["frame-check", path_str(&m)]).code, 2);
}

#[test]
fn size_guard_exit_code() {
    let wide = (0..17)
        .map(|i| format!("a{i}"))
        .collect::<Vec<_>>()
        .join(" && ");
    assert_eq!(gl(&["decide", &wide]).code, 3);
}
