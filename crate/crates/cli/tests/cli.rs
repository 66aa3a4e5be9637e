use std::process::{Command, Output};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvbasis")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn expand_x_to_y() {
    let out = run(&["expand", "x:-+", "--to", "y"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["basis"], "y");
    assert_eq!(v["terms"], json!([{"word": "-+", "coeff": "1"}, {"word": "+-", "coeff": "1"}]));
}

#[test]
fn expand_y_to_x() {
    let out = run(&["expand", "y:-+", "--to", "x"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["terms"], json!([{"word": "-+", "coeff": "1"}, {"word": "+-", "coeff": "-1"}]));
}

#[test]
fn expand_sum_and_zero() {
    let out = run(&["expand", "x:-+ - y:-+", "--to", "y"]);
    assert_eq!(json_of(&out)["terms"], json!([{"word": "+-", "coeff": "1"}]));
    let out = run(&["expand", "-2*x:+-", "--to", "y"]);
    assert_eq!(json_of(&out)["terms"], json!([{"word": "+-", "coeff": "-2"}]));
    let out = run(&["expand", "0", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["terms"], json!([]));
}

#[test]
fn expand_rejects_bad_input() {
    assert_eq!(run(&["expand", "x:-+ + y:+"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "x:-+", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "q:-+"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "x:-a"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn table_n2() {
    let out = run(&["table", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_of(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let row = rows.iter().find(|r| r["word"] == "-+").unwrap();
    assert_eq!(row["y_in_x"], json!([{"word": "-+", "coeff": "1"}, {"word": "+-", "coeff": "-1"}]));
}

#[test]
fn table_csv() {
    let out = run(&["table", "--n", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("word,y_in_x,x_in_y"));
    assert!(text.lines().any(|l| l == "-+,1*-+ -1*+-,1*-+ 1*+-"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn cartan_shape_2() {
    let out = run(&["cartan", "--shape", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["shape"], json!([2]));
    assert_eq!(v["basis"].as_array().unwrap().len(), 3);
    assert_eq!(run(&["cartan", "--shape", "2,x"]).status.code(), Some(2));
    assert_eq!(run(&["cartan", "--shape", "0"]).status.code(), Some(2));
}

#[test]
fn charts_transition_polys() {
    let out = run(&["charts", "--v", "+-", "--w", "-+", "--mode", "transition", "--print-poly"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["pair"], json!(["+-", "-+"]));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    let polys = v["polys"].as_array().unwrap();
    assert_eq!(polys[0], json!({"name": "b1", "value": "1/a1"}));
    assert_eq!(polys[1], json!({"name": "b2", "value": "x1*a1 - x2*a1 - a1^2*a2"}));
}

#[test]
fn charts_argument_errors() {
    assert_eq!(run(&["charts", "--v", "+-", "--w", "-+-"]).status.code(), Some(2));
    assert_eq!(run(&["charts", "--v", "++", "--w", "++", "--mode", "tilde"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "--suite", "words", "--n-max", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["status"], "pass");
    let out = run(&["verify", "--suite", "theorem", "--n-max", "6", "--threads", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["suite"], "theorem");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn output_is_deterministic() {
    let a = run(&["verify", "--suite", "charts", "--n-max", "3", "--seed", "7"]);
    let b = run(&["verify", "--suite", "charts", "--n-max", "3", "--seed", "7", "--threads", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
