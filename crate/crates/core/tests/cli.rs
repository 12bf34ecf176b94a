use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use cmbrauer::bounds::BoundId;
use cmbrauer::cli::is_registered_provenance;

fn cmbrauer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmbrauer")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = cmbrauer(args);
    let text = String::from_utf8(out.stdout).unwrap();
    (out.status.code().unwrap(), serde_json::from_str(&text).unwrap_or_else(|e| panic!("{text}: {e}")))
}

fn ok(args: &[&str]) -> Value {
    let (code, v) = json(args);
    assert_eq!(code, 0, "{args:?}: {v}");
    v
}

/// Asserts every JSON number is absent: integers travel as strings.
fn no_numbers(v: &Value) {
    match v {
        Value::Number(n) => panic!("bare number {n}"),
        Value::Array(xs) => xs.iter().for_each(no_numbers),
        Value::Object(m) => m.values().for_each(no_numbers),
        _ => {}
    }
}

fn keys_sorted(text: &str) {
    let v: Value = serde_json::from_str(text).unwrap();
    let canonical = serde_json::to_string(&v).unwrap();
    assert_eq!(canonical.trim(), text.trim(), "not in canonical key order");
}

#[test]
fn documented_examples() {
    let v = ok(&["classnum", "--disc", "-4", "--conductor", "4"]);
    assert_eq!(v["result"]["class_number"], "2");
    let v = ok(&["minkowski", "--n", "20"]);
    assert_eq!(v["result"]["factorization"], "2^38 * 3^14 * 5^6 * 7^3 * 11^2 * 13 * 17 * 19");
    let v = ok(&["cm-count", "--degree", "1"]);
    assert_eq!(v["result"]["total"], "13");
}

#[test]
fn every_subcommand_is_canonical_and_registered() {
    let cases: &[&[&str]] = &[
        &["classnum", "--disc", "-23"],
        &["classnum", "--disc", "-3", "--conductor", "6"],
        &["fields-by-h", "--h-max", "2", "--bound", "500"],
        &["minkowski", "--n", "18"],
        &["conductor-bound", "--degree", "3"],
        &["conductor-bound", "--degree", "3", "--disc", "-4"],
        &["cm-count", "--degree", "2", "--disc", "-3"],
        &["k3-census", "--degree", "1"],
        &["lattice", "--field-disc", "-7", "--f1", "2", "--f2", "3"],
        &["lattice", "--kind", "kummer", "--rank", "20", "--disc", "252"],
        &["brauer-shape", "--ell", "3", "--m", "1", "--cm-in-base"],
        &["divisibility", "--conductor", "2", "--degree", "2", "--disc", "-4"],
        &["mell-estimate", "--a4", "-1", "--a6", "0", "--cm-disc", "-4", "--ell", "2", "--budget", "200"],
        &["bound", "--id", "isog_pair", "--input", "f1=1", "--input", "f2=1", "--input", "field_disc=-4", "--input", "m_degree=2"],
        &["bound", "--id", "intro", "--input", "disc=64", "--input", "degree=1"],
        &["constants"],
    ];
    for args in cases {
        let out = cmbrauer(args);
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(out.status.code(), Some(0), "{args:?}: {text}");
        keys_sorted(&text);
        let v: Value = serde_json::from_str(&text).unwrap();
        no_numbers(&v);
        let prov = v["provenance"].as_str().unwrap();
        assert!(is_registered_provenance(prov), "{args:?}: {prov}");
        assert_eq!(v["conditional"], false);
        assert!(v["inputs"].is_object() && !v["result"].is_null());
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["cm-count", "--degree", "2", "--bound", "2000"];
    let first = cmbrauer(&args).stdout;
    for _ in 0..3 {
        assert_eq!(cmbrauer(&args).stdout, first);
    }
    let est = ["mell-estimate", "--a4", "0", "--a6", "1", "--cm-disc", "-3", "--ell", "3", "--budget", "2000"];
    assert_eq!(cmbrauer(&est).stdout, cmbrauer(&est).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(cmbrauer(&["classnum", "--disc", "-4"]).status.code(), Some(0));
    for bad in [
        &["classnum", "--disc", "5"][..],
        &["classnum", "--disc", "-4", "--conductor", "0"],
        &["minkowski", "--n", "0"],
        &["lattice", "--kind", "abelian", "--rank", "5", "--disc", "-12"],
        &["bound", "--id", "isog_pair", "--input", "f1=1"],
        &["bound", "--id", "nonsense"],
    ] {
        let (code, v) = json(bad);
        assert_eq!(code, 2, "{bad:?}");
        assert!(v["error"]["message"].is_string());
    }
    assert_eq!(cmbrauer(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(cmbrauer(&[]).status.code(), Some(64));
}

#[test]
fn grh_gating() {
    let args = ["bound", "--id", "faltings_GRH", "--input", "degree=1"];
    let (code, v) = json(&args);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "grh_not_acknowledged");
    assert!(v.get("result").is_none());
    let v = ok(&["--assume-grh", "bound", "--id", "faltings_GRH", "--input", "degree=1"]);
    assert_eq!(v["conditional"], true);
    assert_eq!(v["result"]["integer_bound"], "297");
    for id in BoundId::ALL.iter().filter(|id| id.is_conditional()) {
        let (code, _) = json(&["bound", "--id", id.name()]);
        assert_eq!(code, 2, "{}", id.name());
    }
    // unconditional results stay unconditional when GRH is assumed
    let v = ok(&["--assume-grh", "classnum", "--disc", "-4"]);
    assert_eq!(v["conditional"], false);
}

#[test]
fn output_file_matches_stdout() {
    let path: PathBuf = std::env::temp_dir().join(format!("cmbrauer-cli-{}.json", std::process::id()));
    let out = cmbrauer(&["--output", path.to_str().unwrap(), "minkowski", "--n", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, out.stdout);
}

#[test]
fn table_format_is_readable() {
    let out = cmbrauer(&["--format", "table", "classnum", "--disc", "-4", "--conductor", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("result.class_number") && l.ends_with(" 2")), "{text}");
}

#[test]
fn large_integers_are_exact() {
    let v = ok(&["minkowski", "--n", "20"]);
    assert_eq!(v["result"]["value"], "3579998068407778230140928000000");
}
