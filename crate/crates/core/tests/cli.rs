use std::process::Command;

fn hypeval(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hypeval")).args(args).output().unwrap()
}

#[test]
fn gamma_at_zero() {
    let out = hypeval(&["g", "--z", "0,0"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let re = v["value"]["re"].as_f64().unwrap();
    assert!((re - 1.0).abs() < 1e-14, "{v}");
}

#[test]
fn lists_all_suites() {
    let out = hypeval(&["list-suites", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 13);
}

#[test]
fn verify_exit_codes() {
    let ok = hypeval(&["verify", "--suite", "awpoly"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stderr).contains("PASS awpoly/eigen-n0"));
    let bad = hypeval(&["verify", "--suite", "no-such-suite"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn grid_writes_csv() {
    let out = hypeval(&["grid", "--fn", "g", "--var", "x", "--from", "0", "--to", "1", "--steps", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("axis,re,im,abs,err,error"));
    assert_eq!(lines.count(), 5);
}

#[test]
fn rejects_bad_gamma() {
    let out = hypeval(&["r", "--x", "0.1", "--lambda", "0.1", "--gamma", "1,2,3"]);
    assert!(!out.status.success());
}
