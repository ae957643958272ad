use std::process::{Command, Output};

use serde_json::Value;

fn hyperlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is JSON")
}

#[test]
fn envelope_has_schema_and_command() {
    let o = hyperlat(&["lat-info", "2E8+U"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "lat-info");
    assert_eq!(v["result"]["rank"], 18);
    assert_eq!(v["result"]["det"], "-1");
    assert_eq!(v["result"]["even"], true);
}

#[test]
fn gram_matrix_input() {
    let o = hyperlat(&["lat-info", "[[2,-1],[-1,2]]"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["result"]["discriminant"]["order"], "3");
}

#[test]
fn roots_of_e6() {
    let v = stdout_json(&hyperlat(&["roots", "E6"]));
    assert_eq!(v["result"]["type"], "E6");
    assert_eq!(v["result"]["count"], 72);
    assert_eq!(
        v["result"]["simple"]["vectors"].as_array().unwrap().len(),
        6
    );
}

#[test]
fn vinberg_e10() {
    let o = hyperlat(&["vinberg", "U+E8", "--v0", "1,-1,0,0,0,0,0,0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["result"]["status"], "finite_volume");
    assert_eq!(v["result"]["roots"].as_array().unwrap().len(), 10);
}

#[test]
fn usage_errors_exit_2() {
    let o = hyperlat(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["schema"], 1);

    let o = hyperlat(&["lat-info", "Q7"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"]["code"], "parse_error");

    let o = hyperlat(&["vinberg", "U+E8", "--v0", "1,1,0,0,0,0,0,0,0,0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = hyperlat(&["reproduce", "--criterion", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = hyperlat(&["cohom", "secant-table", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(hyperlat(&["--help"]).status.code(), Some(0));
    assert_eq!(hyperlat(&["--version"]).status.code(), Some(0));
}

#[test]
fn exhausted_budget_exits_3() {
    let o = hyperlat(&[
        "vinberg",
        "U+2E8",
        "--v0",
        "1,-1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0",
        "--budget",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"]["code"], "resource_exhausted");
}

#[test]
fn non_special_vector_exits_1() {
    let mut v = vec!["0"; 22];
    v[0] = "1";
    let v = v.join(",");
    let o = hyperlat(&["cubic4", "special", "--check", &v]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["result"]["special"], false);
}

#[test]
fn strata_dot_is_stable() {
    let a = hyperlat(&["strata", "--format", "dot"]);
    let b = hyperlat(&["strata", "--format", "dot"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let dot = String::from_utf8(a.stdout).unwrap();
    assert!(dot.starts_with("digraph strata"));
    assert_eq!(dot.matches("style=dashed").count(), 8);
}

#[test]
fn secant_table_holds() {
    let o = hyperlat(&["cohom", "secant-table"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["result"]["holds"], true);
    assert_eq!(v["result"]["a^2"], "3");
}

#[test]
fn arrangement_flags() {
    let v = stdout_json(&hyperlat(&["cubic4", "arrangement"]));
    let meets: Vec<bool> = v["result"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["meets"].as_bool().unwrap())
        .collect();
    assert_eq!(meets, [true, true, true, true, false, false]);
}

#[test]
fn reproduce_single_criterion() {
    let o = hyperlat(&["reproduce", "--criterion", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    let claims = v["result"]["claims"].as_array().unwrap();
    assert!(!claims.is_empty());
    assert!(claims
        .iter()
        .all(|c| c["criterion"] == 9 && c["passed"] == true));
}
