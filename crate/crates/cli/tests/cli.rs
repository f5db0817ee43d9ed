use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_building-ramsey"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn temp(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(format!("building-ramsey-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn sphere_size_a1() {
    let j = json(&["sphere-size", "--type", "A1", "--lambda", "5", "--q", "2"]);
    assert_eq!(j["size"], 48);
}

#[test]
fn calc_atoms_c2() {
    let j = json(&["calc-atoms", "--type", "C2", "--lambda", "2,2", "--q", "2"]);
    assert_eq!(j["O"], 16);
    assert_eq!(j["atom"], 1024);
}

#[test]
fn empty_set_has_no_star() {
    let path = temp("empty.json", r#"{"q": 2, "depth": 6, "levels": {}}"#);
    let j = json(&["tree-star-search", "--set", &path, "--t", "1,2", "--r", "1,1"]);
    assert_eq!(j["result"], "not found");
}

#[test]
fn star_in_given_set() {
    let path = temp("set.json", r#"{"q": 2, "depth": 3, "levels": {"3": ["011", "012", "022"]}}"#);
    let j = json(&["tree-star-search", "--set", &path, "--t", "1,2", "--r", "1,1"]);
    assert_eq!(j["result"], "found");
    assert_eq!(j["star"]["center"], "011");
    assert_eq!(j["star"]["arms"], serde_json::json!([["012"], ["022"]]));
}

#[test]
fn input_errors_exit_2() {
    let (code, _, err) = run(&["sphere-size", "--type", "Q3", "--lambda", "1", "--q", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("type"), "{err}");
    let (code, _, _) = run(&["calc-atoms", "--type", "C2", "--lambda", "2,2", "--q", "2", "--nope"]);
    assert_eq!(code, 2);
    let bad = temp("bad.json", "{\"q\": 2,");
    let (code, _, err) = run(&["tree-star-search", "--set", &bad, "--t", "1", "--r", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("set"), "{err}");
    let (code, _, err) = run(&["padic-cartan", "--matrix", "[[\"1\", \"x\"], [\"0\", \"1\"]]"]);
    assert_eq!(code, 2);
    assert!(err.contains("matrix"), "{err}");
}

#[test]
fn star_present_set_is_rejected_by_claim1() {
    let path = temp("pair.json", r#"{"q": 2, "depth": 4, "levels": {"4": ["0111", "0122"]}}"#);
    let (code, out, _) = run(&["tree-verify-claim1", "--set", &path, "--n", "4", "--t1", "2"]);
    assert_eq!(code, 0);
    let j: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["instances"][0]["hypothesis"], "fails");
}

#[test]
fn csv_and_out_file() {
    let (code, out, _) = run(&["sphere-size", "--type", "A1", "--lambda", "3", "--q", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "type,lambda,q,size\nA1,(3),3,36\n");
    let path = temp("out.json", "");
    let (code, out, _) = run(&["conjecture-witness", "--n", "2", "--N-max", "3", "--out", &path]);
    assert_eq!((code, out.as_str()), (0, ""));
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(j["all_outside"], true);
}

#[test]
fn threads_env_fallback() {
    let args = ["padic-cartan", "--random", "3", "--p", "5", "--seed", "4"];
    let plain = run(&args);
    let out = Command::new(env!("CARGO_BIN_EXE_building-ramsey"))
        .args(args)
        .env("BUILDING_RAMSEY_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), plain.1);
    let bad = Command::new(env!("CARGO_BIN_EXE_building-ramsey"))
        .args(args)
        .env("BUILDING_RAMSEY_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
