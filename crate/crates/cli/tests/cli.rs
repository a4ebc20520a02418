use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn wpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wpp")).args(args).output().expect("run wpp")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = wpp(&all);
    let v = serde_json::from_slice(&out.stdout).expect("json output");
    (out.status.code().expect("exit code"), v)
}

fn schema() -> Value {
    let text = include_str!("../schema/envelope.schema.json");
    serde_json::from_str(text).expect("schema parses")
}

fn type_ok(v: &Value, ty: &Value) -> bool {
    let one = |t: &str| match t {
        "object" => v.is_object(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        _ => false,
    };
    match ty {
        Value::String(t) => one(t),
        Value::Array(ts) => ts.iter().any(|t| t.as_str().is_some_and(one)),
        _ => false,
    }
}

/// Top-level keys and types against the schema file.
fn check_envelope(v: &Value) {
    let s = schema();
    let props = s["properties"].as_object().unwrap();
    let obj = v.as_object().expect("envelope is an object");
    for key in s["required"].as_array().unwrap() {
        assert!(obj.contains_key(key.as_str().unwrap()), "missing {key}");
    }
    for (k, x) in obj {
        let p = props.get(k).unwrap_or_else(|| panic!("unexpected key {k}"));
        assert!(type_ok(x, &p["type"]), "{k} has the wrong type");
    }
    let names = props["command"]["enum"].as_array().unwrap();
    assert!(names.contains(&v["command"]));
}

/// Drop the timing fields, the only ones that differ between runs.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("runtime_ms");
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn invariants_n3() {
    let out = wpp(&["invariants", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let (code, v) = json(&["invariants", "--n", "3"]);
    assert_eq!(code, 0);
    check_envelope(&v);
    assert_eq!(v["pass"], true);
}

#[test]
fn el_verify_csv() {
    let out = wpp(&["el-verify", "--n", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 1);
}

#[test]
fn liu_basis_n4() {
    let (code, v) = json(&["bases", "--n", "4", "--i", "2", "--family", "liu"]);
    assert_eq!(code, 0);
    check_envelope(&v);
    let text = v["result"].to_string();
    assert!(text.contains("\"count\":26"), "{text}");
    assert!(text.contains("\"full_rank\":true"), "{text}");
}

#[test]
fn every_command_matches_the_schema() {
    let runs: [&[&str]; 8] = [
        &["invariants", "--n", "3"],
        &["el-verify", "--n", "3"],
        &["homology", "--n", "3", "--i", "1"],
        &["bases", "--n", "3", "--i", "1"],
        &["straighten", "--tree", "[1,<2,3>]"],
        &["psi", "--tree", "2(1,3)"],
        &["whitney", "--n", "3"],
        &["report-all", "--n", "2"],
    ];
    for args in runs {
        let (code, v) = json(args);
        assert_eq!(code, 0, "{args:?}");
        check_envelope(&v);
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn straighten_trace() {
    let out = wpp(&["straighten", "--tree", "[1,<2,3>]", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("->"), "{text}");
}

#[test]
fn resource_cap_exits_2() {
    let (code, v) = json(&["homology", "--n", "7"]);
    assert_eq!(code, 2);
    check_envelope(&v);
    assert_eq!(v["pass"], false);
    assert_eq!(v["result"]["error"], "resource");
    assert!(v["result"]["requested"].as_u64().unwrap() > v["result"]["cap"].as_u64().unwrap());
}

#[test]
fn bad_arguments_exit_2() {
    let (code, v) = json(&["bases", "--n", "3", "--i", "5"]);
    assert_eq!(code, 2);
    assert_eq!(v["result"]["error"], "argument");
    assert_eq!(wpp(&["psi", "--tree", "(("]).status.code(), Some(2));
}

#[test]
fn runs_are_deterministic() {
    for args in [
        &["homology", "--n", "4", "--i", "1"][..],
        &["straighten", "--n", "3", "--side", "lie2"],
        &["report-all", "--n", "3"],
    ] {
        let (_, mut a) = json(args);
        let (_, mut b) = json(args);
        strip_timing(&mut a);
        strip_timing(&mut b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn report_all_n4() {
    let start = Instant::now();
    let (code, v) = json(&["report-all", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    assert_eq!(v["result"]["criteria"].as_array().unwrap().len(), 16);
    assert!(start.elapsed() < Duration::from_secs(600));
}
