use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klmasks")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn kl_polynomial() {
    let v = json(&["kl", "--x", "1234", "--w", "4231"]);
    assert_eq!(v["poly"], "1+q");
}

#[test]
fn kl_column_with_tree_formula() {
    let out = run(&["kl", "--w", "4231", "--ls"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn perm_data() {
    let v = json(&["perm", "--perm", "4231"]);
    assert_eq!(v["length"], 5);
    assert_eq!(v["cograssmannian"], true);
    assert_eq!(v["right_ascents"], serde_json::json!([2]));
}

#[test]
fn mask_profile() {
    let v = json(&["masks", "profile", "--word", "1,2,1", "--bits", "011"]);
    assert_eq!(v["signs"], "-++");
    assert_eq!(v["value"], "312");
    assert_eq!(v["d"], 0);
}

#[test]
fn construct1_size() {
    let v = json(&["construct1", "--perm", "4231"]);
    assert_eq!(v["size"], 24);
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn fiber_smallness() {
    let v = json(&["bs", "fiber", "--word", "1,2,1", "--x", "123"]);
    assert_eq!(v["poly"], "1+q");
    assert_eq!(v["small"], false);
}

#[test]
fn heap_picture() {
    let out = run(&["render", "heap", "--word", "2,3,1,2,4", "--format", "ascii"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "    o\n o     o\n    o     o\ns1 s2 s3 s4\n");
    let out = run(&["render", "mask", "--word", "1,2,1", "--bits", "101", "--format", "svg"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("<svg"));
}

#[test]
fn verify_suite_passes() {
    let v = json(&["verify", "--suite", "paper-examples"]);
    assert_eq!(v["checks"][0]["passed"], true);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["kl", "--w", "4221"]).status.code(), Some(2));
    assert_eq!(run(&["construct1", "--perm", "1324"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["masks", "profile", "--word", "1,1", "--bits", "11"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let a = run(&["--threads", "1", "compare-constructions", "--n-max", "5"]);
    let b = run(&["--threads", "3", "compare-constructions", "--n-max", "5"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}
