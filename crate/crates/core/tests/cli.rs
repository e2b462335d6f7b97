use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dialectica")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn godel_suite_on_dial_of_subsets_exits_zero() {
    let o = run(&["check", "--suite", "godel", "--builtin", "dial-of-subsets", "--cap", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("godel(dial(subsets)): pass"));
}

#[test]
fn translate_prints_the_prenex_form() {
    let o = run(&["translate", "--formula", "forall x:A. P(x) -> exists y:B. Q(y)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "exists y:B^A. forall x:A. P(x) -> Q(y(x))\n");

    let o = run(&["translate", "--formula", "(forall z:A. P(z)) -> exists y:B. Q(y)", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["formula"], "exists y:B. exists z:A. P(z) -> Q(y)");
    assert_eq!(v["counters"], serde_json::json!([]));
}

#[test]
fn broken_doctrine_names_the_law_and_reruns_the_witness() {
    let broken = fixture("broken.json");
    let o = run(&["check", "--suite", "hyperdoctrine", "--doctrine", &broken, "--cap", "1", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let failure = &v["failure"];
    assert_eq!(failure["law"], "monotonicity/monotone reindexing");
    let instance = failure["instance"].as_str().unwrap();
    assert_eq!(instance, "f=0->1:[] x=f y=t");

    let o = run(&["check", "--suite", "hyperdoctrine", "--doctrine", &broken, "--cap", "1", "--json", "--only", instance]);
    assert_eq!(o.status.code(), Some(1));
    let again: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(again["failure"]["instance"], instance);
    assert_eq!(again["children"][2]["checked"], 1);
}

#[test]
fn lawful_table_doctrine_passes() {
    let o = run(&["check", "--suite", "hyperdoctrine", "--doctrine", &fixture("sierpinski.json"), "--cap", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn model_verification_reports_agreement() {
    let phi = "(forall x:A. P(x)) -> exists y:B. Q(y)";
    let o = run(&["translate", "--formula", phi, "--verify", "--model", &fixture("model.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("true/true/y=1 x=0"), "{}", stdout(&o));
    let o = run(&["translate", "--formula", phi, "--verify", "--model", &fixture("empty_carrier.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(run(&["translate", "--formula", "forall x:A. P(x"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--suite", "godel", "--cap", "0"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--suite", "hyperdoctrine", "--doctrine", "/nonexistent.json"]).status.code(), Some(2));
    let o = run(&["check", "--suite", "principles", "--builtin", "trivial", "--which", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["translate", "--formula", "P(x)", "--verify"]).status.code(), Some(2));
}

#[test]
fn tripos_counts_and_laws() {
    let o = run(&["tripos", "--cap", "2", "--laws", "--count", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["children"][0]["data"][0], serde_json::json!(["objects", "8"]));
    assert_eq!(v["children"][1]["status"], "pass");
    let o = run(&["tripos", "--category", "pred", "--cap", "2", "--laws"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn complete_lists_a_fiber_in_interchange_form() {
    let o = run(&["complete", "--kind", "dial", "--builtin", "subsets", "--cap", "1", "--fiber", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["fibers"]["1"].as_array().unwrap().len(), 5);
}

#[test]
fn principles_suite_runs_selected_items() {
    let o = run(&["check", "--suite", "principles", "--builtin", "dial-of-subsets", "--which", "mp-rule,choice,mp", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v["children"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 3);
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let args = ["check", "--suite", "skolem", "--builtin", "ex-of-subsets", "--json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn demo_runs_end_to_end() {
    let o = run(&["demo"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("8 PERs"));
}
