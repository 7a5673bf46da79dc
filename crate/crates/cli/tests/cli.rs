use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run_with(args: &[&str], stdin: Option<&str>, env: &[(&str, &str)]) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bldgzeta"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().expect("wait");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn run(args: &[&str]) -> (i32, Value) {
    let (code, out) = run_with(args, None, &[]);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("not JSON ({e}): {out}")))
}

#[test]
fn poincare_rational_a1() {
    let (code, v) = run(&["poincare", "--type", "A~1", "--rational"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"num": {"(0)": "1", "(1)": "1"}, "den": {"(0)": "1", "(1)": "-1"}}));
}

#[test]
fn poincare_series_and_alternating_sum() {
    let (code, v) = run(&["poincare", "--type", "A~2", "--degree", "4", "--alternating"]);
    assert_eq!(code, 0);
    assert_eq!(v["series"], json!({"(0)": "1", "(1)": "3", "(2)": "6", "(3)": "9", "(4)": "12"}));
    assert_eq!(v["alternating_zero"], json!(true));
    let (code, v) = run(&["poincare", "--matrix", r#"{"m":[[1,3,3],[3,1,3],[3,3,1]]}"#, "--degree", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["series"]["(4)"], json!("12"));
}

#[test]
fn zeta_graph_table() {
    let (code, out) = run_with(&["zeta", "graph", &data("k33.json"), "--series", "5", "--format", "table"], None, &[]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows[0], vec!["[1]", "0"]);
    assert_eq!(rows[1], vec!["[2]", "36"]);
}

#[test]
fn zeta_closed_forms() {
    let (code, v) = run(&["zeta", "graph", &data("cycle6.json"), "--series", "9", "--closed-form"]);
    assert_eq!(code, 0);
    assert_eq!(v["agrees"], json!(true));
    assert_eq!(v["closed_form"]["num"], json!({"(3)": "6"}));
    assert_eq!(v["closed_form"]["den"], json!({"(0)": "1", "(3)": "-1"}));
    let (code, v) = run(&["zeta", "thin", &data("thin_a2.json"), "--series", "6", "--closed-form"]);
    assert_eq!(code, 0);
    assert_eq!(v["chambers"], json!(24));
    assert_eq!(v["agrees"], json!(true));
}

#[test]
fn cone_skew() {
    let (code, v) = run(&["cone", "--alphas", "1 0;1 2", "--lattice", "1 0;0 1", "--verify-radius", "20"]);
    assert_eq!(code, 0);
    assert_eq!(v["E"], json!([[1, 0], [2, 0]]));
    assert_eq!(v["index"], json!(2));
    assert_eq!(v["verified"], json!(true));
}

#[test]
fn lefschetz_from_stdin() {
    let graph = std::fs::read_to_string(data("k33.json")).unwrap();
    let (code, out) = run_with(&["lefschetz", "-", "--depth", "4", "--probe"], Some(&graph), &[]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["holds"], json!(true));
    assert_eq!(v["probe"]["matching"], json!("plain"));
    let (_, tailed) = run(&["lefschetz", &data("k33.json"), "--depth", "4", "--tailed"]);
    assert_eq!(tailed["first_mismatch"], json!(3));
}

#[test]
fn thin_summary() {
    let (code, v) = run(&["thin", &data("thin_a2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["product_law"], json!(true));
    assert_eq!(v["positions"]["E"], json!([[1, 1], [2, 2], [3, 3]]));
}

#[test]
fn cusp_with_pade() {
    let (code, v) = run(&["cusp", &data("cusp_c4.json"), "--coeffs", "20", "--pade", "8", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 20);
    assert_eq!(v["coeffs"][1], json!("4"));
    assert_eq!(v["clean"], json!(true));
    assert_eq!(v["fit"]["den"][0], json!("1"));
}

#[test]
fn errors_are_structured() {
    let cases: &[(&[&str], &str)] = &[
        (&["cusp", "BAD"], "MalformedRay"),
        (&["poincare", "--type", "X9"], "UnknownTypeTag"),
        (&["poincare"], "UsageError"),
        (&["frobnicate"], "UsageError"),
        (&["zeta", "graph", "/nonexistent.json"], "IoError"),
        (&["cone", "--alphas", "1 0;2 0"], "DegenerateCone"),
        (&["cusp", "PADE"], "BadDegrees"),
        (&["thin", "AFFINE"], "NotAffine"),
    ];
    let bad = data("cusp_bad.json");
    let c4 = data("cusp_c4.json");
    let dir = std::env::temp_dir().join(format!("bldgzeta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let finite = dir.join("finite.json");
    std::fs::write(&finite, r#"{"type":"A2","sublattice":[[1,0],[0,1]]}"#).unwrap();
    for (args, expected) in cases {
        let args: Vec<&str> = match args[..] {
            ["cusp", "BAD"] => vec!["cusp", &bad],
            ["cusp", "PADE"] => vec!["cusp", &c4, "--coeffs", "4", "--pade", "3", "3"],
            ["thin", "AFFINE"] => vec!["thin", finite.to_str().unwrap()],
            _ => args.to_vec(),
        };
        let (code, out) = run_with(&args, None, &[]);
        assert_eq!(code, 1, "{args:?}: {out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"]["code"], json!(expected), "{args:?}");
        assert_eq!(v.as_object().unwrap().len(), 1, "no partial output");
    }
}

#[test]
fn thread_cap_is_validated() {
    let (code, _) = run_with(&["poincare", "--type", "A~1"], None, &[("BLDGZETA_THREADS", "2")]);
    assert_eq!(code, 0);
    let (code, out) = run_with(&["poincare", "--type", "A~1"], None, &[("BLDGZETA_THREADS", "many")]);
    assert_eq!(code, 1);
    assert!(out.contains("UsageError"));
}
