use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

use ordterm_core::{normal_form, parse, Term};

fn ordterm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordterm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ordterm_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ordterm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn normalize_examples() {
    for (input, expected) in [
        ("sh(1,1)", "sh(1)\n"),
        ("1^1", "2\n"),
        ("sh(1)^1^sh(1)", "sh(1)\n"),
    ] {
        let o = ordterm(&["normalize", input]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o), expected);
    }
}

#[test]
fn eq_examples() {
    let o = ordterm(&["eq", "sh(1,1)", "sh(1)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "equivalent\n"));
    let o = ordterm(&["eq", "1", "sh(1)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (1, "inequivalent\n"));
    let o = ordterm(&["eq", "--oracle", "sh(1,1^1)", "sh(1^1,1)"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("equivalent\n"));
    assert!(out.contains("oracle: agreement"));
}

#[test]
fn seq_normalize_examples() {
    for (input, expected) in [
        ("[1; 1; sh(1)]", "[2; sh(1)]\n"),
        ("[sh(1); 1; sh(1)]", "[sh(1)]\n"),
        ("[repeat 1]", "[ones]\n"),
    ] {
        let o = ordterm(&["seq-normalize", input]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout(&o), expected);
    }
}

#[test]
fn exit_codes() {
    // parse errors
    assert_eq!(code(&ordterm(&["normalize", "sh(1"])), 2);
    assert_eq!(code(&ordterm(&["parse", "sh()"])), 2);
    assert_eq!(code(&ordterm(&["eq", "1", "1^"])), 2);
    assert_eq!(code(&ordterm(&["seq-normalize", "[1; ones; 1]"])), 2);
    assert_eq!(
        code(&ordterm(&["normalize", "--file", "/nonexistent/term.txt"])),
        2
    );
    assert_eq!(code(&ordterm_stdin(&["eq"], "sh(1)\n")), 2);
    // usage errors: unknown flag, flag outside the command's domain
    assert_eq!(code(&ordterm(&["normalize", "--bogus", "1"])), 2);
    assert_eq!(code(&ordterm(&["parse", "--trace", "1"])), 2);
    assert_eq!(code(&ordterm(&["gen", "--rounds", "3"])), 2);
    // an insufficient closure bound makes the oracle disagree
    let o = ordterm(&[
        "eq",
        "--oracle",
        "--max-complexity",
        "9",
        "sh(sh(1), 1^sh(1))",
        "sh(1)",
    ]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("DISAGREEMENT"));
    let o = ordterm(&["seq-normalize", "--max-unroll", "2", "[repeat 1^sh(1)^1]"]);
    assert_eq!(code(&o), 5);
    assert!(!o.stderr.is_empty());
}

#[test]
fn errors_go_to_stderr() {
    let o = ordterm(&["normalize", "sh(1"]);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8(o.stderr).unwrap().contains("parse error"));
}

#[test]
fn reads_stdin_and_files() {
    let o = ordterm_stdin(&["normalize"], "  sh(1, 1)\n");
    assert_eq!(stdout(&o), "sh(1)\n");
    let o = ordterm_stdin(&["eq"], "sh(1)\n\nsh(1,1)\n");
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "equivalent\n"));

    let dir = std::env::temp_dir().join(format!("ordterm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("seq.txt");
    std::fs::write(&path, "[sh(1); repeat sh(1)]\n").unwrap();
    let o = ordterm(&["seq-normalize", "--file", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "[sh(1)]\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn normalize_output_is_a_fixpoint() {
    let o = ordterm(&[
        "gen",
        "--seed",
        "100",
        "--count",
        "40",
        "--max-complexity",
        "20",
    ]);
    for line in stdout(&o).lines() {
        let once = stdout(&ordterm(&["normalize", line]));
        let twice = stdout(&ordterm(&["normalize", once.trim()]));
        assert_eq!(once, twice, "input {line}");
    }
}

#[test]
fn json_round_trips() {
    for input in ["1", "sh(1, 2^sh(1))", "sh(1,1)^1^sh(1,1)", "3^sh(sh(1), 1)"] {
        let o = ordterm(&["parse", "--format", "json", input]);
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let back: Term = serde_json::from_value(v["term"].clone()).unwrap();
        assert_eq!(back, parse(input).unwrap());

        let o = ordterm(&["normalize", "--format", "json", "--trace", input]);
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let nf: Term = serde_json::from_value(v["term"].clone()).unwrap();
        assert_eq!(nf, normal_form(&parse(input).unwrap()));
        assert_eq!(v["text"], nf.to_string());
        for step in v["steps"].as_array().unwrap() {
            for key in ["rule", "path", "before", "after"] {
                assert!(step.get(key).is_some(), "{key} missing in {step}");
            }
        }
    }
}

#[test]
fn json_trace_lists_steps() {
    let o = ordterm(&["normalize", "--format", "json", "--trace", "sh(1,1)^sh(1)"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rules: Vec<&str> = v["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["rule"].as_str().unwrap())
        .collect();
    assert_eq!(rules, ["dedup", "concat_collapse"]);
}

#[test]
fn sequence_json() {
    let o = ordterm(&["seq-normalize", "--format", "json", "[repeat 1^sh(1)^1]"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["text"], "[1; repeat sh(1)^2]");
    assert_eq!(v["tail"]["kind"], "repeat");
    let tail: Term = serde_json::from_value(v["tail"]["term"].clone()).unwrap();
    assert_eq!(tail, parse("sh(1)^2").unwrap());
}

#[test]
fn oracle_reports_separating_rounds() {
    let o = ordterm(&["oracle", "--format", "json", "sh(1)", "sh(1,1^1)"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["agreement"], true);
    assert_eq!(v["oracle"]["separated_at"], 3);
    assert_eq!(v["oracle"]["closure"], "not_connected");
}

#[test]
fn gen_is_deterministic() {
    let a = stdout(&ordterm(&["gen", "--seed", "7", "--count", "5"]));
    let b = stdout(&ordterm(&["gen", "--seed", "7", "--count", "5"]));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 5);
    for line in a.lines() {
        let t = parse(line).unwrap();
        assert!(t.complexity() <= 12 && t.depth() <= 3);
    }
}
