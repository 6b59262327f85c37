use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn session(name: &str) -> String {
    format!("{}/../../sessions/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str, text: &str) -> String {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn samuel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_samuel")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = samuel(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn series_of_two_dimensional_quotient() {
    let v = json(&["series", &session("quotient2.ses")]);
    assert_eq!(v["numerator"], serde_json::json!([1, 3, 0, 3, -1]));
    assert_eq!(v["d"], 2);
}

#[test]
fn coeffs_of_parameter_ideal() {
    // λ(k[X,Y]/(X^a, Y^b)) = ab and all higher coefficients vanish.
    for (a, b) in [(2, 3), (1, 4), (3, 3)] {
        let f = scratch(
            &format!("param_{a}_{b}.ses"),
            &format!("ring {{ vars = [X, Y], dim = 2 }}\nideal J = [X^{a}, Y^{b}]\n"),
        );
        let v = json(&["coeffs", &f]);
        assert_eq!(v["e"], serde_json::json!([a * b, 0, 0]));
    }
}

#[test]
fn json_is_byte_identical_across_runs() {
    let f = session("gorenstein.ses");
    let a = samuel(&["reduce", &f, "--json", "--seed", "7"]);
    let b = samuel(&["reduce", &f, "--json", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = samuel(&["verify", &session("square.ses"), "--json"]);
    let w = samuel(&["verify", &session("square.ses"), "--json"]);
    assert_eq!(v.stdout, w.stdout);
}

#[test]
fn golden_suite_passes() {
    let out = samuel(&["verify", "--suite", "golden"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(!text.contains("FAIL"));
    assert!(!text.contains("VIOLATION"));
}

#[test]
fn monomial_closure() {
    // (X^2, Y^4) misses X*Y^2; the closure has colength 6.
    let f = scratch("x2y4.ses", "ring { vars = [X, Y], dim = 2 }\nideal I = [X^2, Y^4]\n");
    let v = json(&["closure", &f]);
    assert_eq!(v["closed"], false);
    assert_eq!(v["length"], 6);
    let v = json(&["closure", &session("square.ses")]);
    assert_eq!(v["closed"], true);
}

#[test]
fn named_ideal_and_depth() {
    let f = session("quotient3.ses");
    let v = json(&["depth", &f, "--ideal", "m"]);
    assert_eq!(v["depth"]["lower"], 1);
    let out = samuel(&["depth", &f, "--ideal", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_theorem_verdict() {
    let v = json(&["verify", &session("square.ses"), "--theorem", "e2_upper"]);
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 1);
    assert_eq!(verdicts[0]["theorem"], "e2_upper");
    assert_eq!(verdicts[0]["conclusion"], "holds");
    let out = samuel(&["verify", &session("square.ses"), "--theorem", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let sq = session("square.ses");
    assert_eq!(samuel(&["coeffs", &sq, "--field", "fp:4"]).status.code(), Some(2));
    assert_eq!(samuel(&["coeffs", "/nonexistent.ses"]).status.code(), Some(2));
    let bad = scratch("bad.ses", "ring { vars = [X, Y], dim = 2 }\nideal I = [X^2, Q]\n");
    let out = samuel(&["coeffs", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let empty = scratch("empty.ses", "ring { vars = [X], dim = 1 }\nideal I = []\n");
    assert_eq!(samuel(&["coeffs", &empty]).status.code(), Some(2));
    // The Gorenstein example needs more than two table entries.
    let out = samuel(&["coeffs", &session("gorenstein.ses"), "--nmax", "2"]);
    assert_eq!(out.status.code(), Some(3));
    // Depth-two example is refused in characteristic 3.
    let out = samuel(&["verify", "--suite", "golden", "--field", "fp:3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rationals_agree_with_prime_field() {
    let f = session("gorenstein.ses");
    let q = json(&["hilbert", &f, "--field", "q"]);
    let p = json(&["hilbert", &f]);
    assert_eq!(q["hilbert"], p["hilbert"]);
}
