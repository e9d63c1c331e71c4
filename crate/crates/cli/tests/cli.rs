use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn spcodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spcodes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_elapsed(s: &[u8]) -> String {
    String::from_utf8_lossy(s)
        .lines()
        .filter(|l| !l.contains("elapsed_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// `path -> value` rows of a JSON document, in document order.
fn leaves(v: &Value, path: String, out: &mut Vec<(String, String)>) {
    let sub = |k: &str| if path.is_empty() { k.to_owned() } else { format!("{path}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| leaves(x, sub(k), out)),
        Value::Array(a) if a.is_empty() => out.push((path, String::new())),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| leaves(x, sub(&i.to_string()), out)),
        Value::String(s) => out.push((path, s.clone())),
        other => out.push((path, other.to_string())),
    }
}

#[test]
fn field_examples() {
    let out = spcodes(&["field", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "field");
    assert_eq!(v["results"]["q"], 3);
    assert_eq!(v["verdict"], "pass");

    let out = spcodes(&["field", "2", "--modulus", "1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["modulus"], "1,0,1");

    let out = spcodes(&["field", "2", "--modulus", "2,0,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reducible"));
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(spcodes(&["field", "0"]).status.code(), Some(2));
    assert_eq!(spcodes(&["field", "1", "--modulus", "1,x"]).status.code(), Some(2));
    assert_eq!(spcodes(&["kloosterman", "1", "--hmax", "13"]).status.code(), Some(2));
    assert_eq!(spcodes(&["group", "1", "--which", "sp6"]).status.code(), Some(2));
}

#[test]
fn kloosterman_moments_q3() {
    let v = json(&spcodes(&["kloosterman", "1", "--hmax", "2"]));
    let sk: Vec<&str> = v["results"]["moments"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["sk"].as_str().unwrap())
        .collect();
    assert_eq!(sk, ["1", "-1", "1"]);
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn group_sp2_q3() {
    let out = spcodes(&["group", "1", "--which", "sp2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"]["order"], 24);
    assert_eq!(v["params"]["seed"], 0);
}

#[test]
fn group_sp4_beyond_prime_field_exits_3_with_closed_counts() {
    let out = spcodes(&["group", "2", "--which", "sp4"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    let hist = v["results"]["trace_histogram"].as_array().unwrap();
    assert_eq!(hist.len(), 9);
    assert!(hist.iter().all(|h| h.get("enumerated").is_none()));
    let total: u128 = hist.iter().map(|h| h["closed"].as_str().unwrap().parse::<u128>().unwrap()).sum();
    assert_eq!(total.to_string(), v["results"]["order_closed"].as_str().unwrap());
}

#[test]
fn code_sp2_q3() {
    let out = spcodes(&["code", "1", "--which", "sp2", "--jmax", "4", "--hmax", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(
        v["results"]["dual_distribution"],
        serde_json::json!({"length": 24, "counts": [[0, "1"], [18, "2"]]})
    );
    let routes = &v["results"]["low_weights"];
    assert_eq!(routes["small_weight"], routes["macwilliams"]);
    assert_eq!(routes["small_weight"], routes["brute_force"]);
}

#[test]
fn moments_route_flag() {
    for route in ["small-weight", "macwilliams"] {
        let out = spcodes(&["moments", "1", "--hmax", "6", "--weights-route", route]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["results"]["weights_route"], route);
    }
}

#[test]
fn output_is_deterministic() {
    let a = spcodes(&["verify-all", "1", "--seed", "7"]);
    let b = spcodes(&["verify-all", "1", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(without_elapsed(&a.stdout), without_elapsed(&b.stdout));
}

#[test]
fn tsv_carries_the_json_content() {
    let args = ["code", "1", "--which", "sp2", "--jmax", "3", "--hmax", "3"];
    let j = spcodes(&args);
    let t = spcodes(&[&args[..], &["--format", "tsv"]].concat());
    assert_eq!(t.status.code(), Some(0));
    let tsv = String::from_utf8(t.stdout).unwrap();
    let mut lines = tsv.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    let rows: Vec<(String, String)> = lines
        .map(|l| {
            let (k, v) = l.split_once('\t').unwrap();
            (k.to_owned(), v.to_owned())
        })
        .filter(|(k, _)| k != "elapsed_ms")
        .collect();
    let mut expect = Vec::new();
    leaves(&json(&j), String::new(), &mut expect);
    expect.retain(|(k, _)| k != "elapsed_ms");
    assert_eq!(rows, expect);
}

#[test]
fn sp4_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let first = spcodes(&["group", "1", "--which", "sp4", "--cache-dir", d]);
    assert_eq!(first.status.code(), Some(0));
    let path = dir.path().join("sp4_q3.bin");
    assert_eq!(fs::metadata(&path).unwrap().len(), 51840 * 4);

    let second = spcodes(&["group", "1", "--which", "sp4", "--cache-dir", d]);
    assert!(String::from_utf8_lossy(&second.stderr).contains("loaded"));
    assert_eq!(without_elapsed(&first.stdout), without_elapsed(&second.stdout));

    // a damaged cache is detected and rebuilt
    let mut bytes = fs::read(&path).unwrap();
    bytes.truncate(bytes.len() - 4);
    fs::write(&path, bytes).unwrap();
    let third = spcodes(&["group", "1", "--which", "sp4", "--cache-dir", d]);
    assert_eq!(third.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&third.stderr).contains("rebuilt"));
    assert_eq!(fs::metadata(&path).unwrap().len(), 51840 * 4);
}

#[test]
fn verify_all_skips_sp4_above_prime_field() {
    let out = spcodes(&["verify-all", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");
    let notices = v["results"]["notices"].as_array().unwrap();
    assert!(notices.iter().any(|n| n.as_str().unwrap().starts_with("group_sp4")));
}
