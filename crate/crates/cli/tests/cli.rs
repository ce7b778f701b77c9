use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn mzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzv")).args(args).env_remove("MZV_CACHE_DIR").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn vadic_compute_example() {
    let out = mzv(&["compute", "--q", "2", "--v", "t", "--tuple", "(1,2)", "--D", "8", "--N", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["evaluator"]["kind"], "vadic");
    assert_eq!(r["tuple"], "(1,2)");
    assert_eq!(r["value"], "t^2+t+1");
}

#[test]
fn truncated_compute_matches_hand_value() {
    // ζ(2, (1)) = S_0(1) + S_1(1) = 1 + 1/(t^2+t) over F_2.
    let out = mzv(&["compute", "--tuple", "(1)", "--D", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "(t^2+t+1)/(t^2+t)");
}

#[test]
fn finite_verify_example() {
    let out = mzv(&["verify", "--family", "thm2", "--q", "3", "--tuple", "(2,4,6)", "--evaluator", "finite", "--v", "t^2+1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "zero");
    assert_eq!(r["family"], "thm2");
}

#[test]
fn vadic_verify_reports_valuation() {
    let out = mzv(&["verify", "--family", "thmB", "--pairs", "(1:1),(3:1)", "--v", "t+1", "--N", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "valuation>=4");
}

#[test]
fn search_example_contains_universal_span() {
    let out = mzv(&["search", "--q", "2", "--v", "t", "--weight-max", "6", "--depth-max", "3", "--N", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["containment"], true);
    assert_eq!(r["scope"]["tuples"], 41);
}

#[test]
fn corrupted_relation_fails_with_residual() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rel.jsonl");
    let file = path.to_str().unwrap();
    let verify = ["verify", "--evaluator", "finite", "--v", "t^2+t+1"];
    let dump = mzv(&[&verify[..], &["--family", "thmB", "--pairs", "(1:3)", "--dump-relation", file]].concat());
    assert_eq!(dump.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.lines().next().unwrap().contains("[[1,2]]"));
    let corrupted = text.replacen("\"coeff\":[1]", "\"coeff\":[0]", 1);
    assert_ne!(corrupted, text);
    fs::write(&path, corrupted).unwrap();
    let out = mzv(&[&verify[..], &["--relation-file", file]].concat());
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["verdict"], "nonzero");
    assert_eq!(r["value"], "1");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mzv(&["compute", "--tuple", "(1,"]).status.code(), Some(2));
    assert_eq!(mzv(&["compute", "--tuple", "(1)", "--bogus"]).status.code(), Some(2));
    assert_eq!(mzv(&["compute", "--tuple", "(1)", "--v", "t^2+"]).status.code(), Some(2));
    assert_eq!(mzv(&["compute", "--q", "6", "--tuple", "(1)"]).status.code(), Some(2));
    assert_eq!(mzv(&["verify", "--tuple", "(1,2)"]).status.code(), Some(2));
    assert_eq!(mzv(&["compute", "--tuple", "(1)", "--evaluator", "finite"]).status.code(), Some(2));
    assert_eq!(mzv(&["compute", "--tuple", "(1)", "--v", "t^2+1"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("report.json");
    let out = mzv(&["compute", "--tuple", "(1)", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = mzv(&["compute", "--tuple", "(1,2)", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["tuple"], "(1,2)");
}

#[test]
fn csv_has_one_row_per_entry() {
    let out = mzv(&["primes", "--q", "2", "--degree", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "degree,poly");
    assert_eq!(lines.len(), 1 + 2 + 1 + 2);
    assert!(lines.contains(&"3,t^3+t+1"));

    let out = mzv(&["search", "--weight-max", "4", "--depth-max", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("q,v,weight,depth,tuples,relations,unstabilized\n"));
}

#[test]
fn plain_output_is_line_oriented() {
    let out = mzv(&["harmonic", "--ring", "Z/12", "--tuple", "(1,2,3)", "--runs", "3", "--format", "plain"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("seed 2: residual 0"));
}

#[test]
fn harmonic_rings_and_identities() {
    for ring in ["Z/12", "F_3[x]/(x^4)", "Q", "q=9"] {
        let out = mzv(&["harmonic", "--ring", ring, "--tuple", "(1,2,3)", "--seed", "7", "--runs", "5"]);
        assert_eq!(out.status.code(), Some(0), "{ring}");
        assert_eq!(json(&out)["all_zero"], true);
    }
    let out = mzv(&["harmonic", "--ring", "F_2[x]/(x^8)", "--pairs", "(1:2),(3:1)", "--runs", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(mzv(&["harmonic", "--ring", "Z/12", "--pairs", "(1:2)"]).status.code(), Some(2));
    assert_eq!(mzv(&["harmonic", "--ring", "Z/12", "--tuple", "(1,2)"]).status.code(), Some(2));
}

#[test]
fn printed_literals_reparse() {
    let out = mzv(&["primes", "--q", "4", "--degree", "2"]);
    let r = json(&out);
    for p in r["primes"].as_array().unwrap() {
        let v = p["poly"].as_str().unwrap();
        let again = mzv(&["compute", "--q", "4", "--v", v, "--tuple", "(3)", "--evaluator", "finite"]);
        assert_eq!(again.status.code(), Some(0), "{v}");
    }
    let out = mzv(&["compute", "--q", "3", "--v", "t^2+1", "--tuple", "(1,-2)", "--N", "3"]);
    let tuple = json(&out)["tuple"].as_str().unwrap().to_string();
    let again = mzv(&["compute", "--q", "3", "--v", "t^2+1", "--tuple", &tuple, "--N", "3"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn cache_directory_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_mzv"))
            .args(["compute", "--q", "3", "--tuple", "(1,2)", "--D", "4"])
            .env("MZV_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = run();
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn identical_arguments_give_identical_bytes() {
    let args = ["harmonic", "--ring", "Q", "--tuple", "(1,2,3)", "--seed", "11", "--runs", "3"];
    assert_eq!(mzv(&args).stdout, mzv(&args).stdout);
    let args = ["search", "--weight-max", "5", "--depth-max", "3"];
    assert_eq!(mzv(&args).stdout, mzv(&args).stdout);
}
