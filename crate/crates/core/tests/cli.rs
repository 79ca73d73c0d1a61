use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn srl_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_srl"))
        .args(args)
        .env_clear()
        .envs(env.iter().copied())
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn srl(args: &[&str]) -> Run {
    srl_env(args, &[])
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas/records.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

/// Parses every output line and checks it against the published schema.
fn records(run: &Run) -> Vec<Value> {
    let validator = schema();
    run.stdout
        .lines()
        .map(|line| {
            let v: Value = serde_json::from_str(line).unwrap_or_else(|e| panic!("{e}: {line}"));
            let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
            assert!(errors.is_empty(), "{line}\n{errors:?}");
            v
        })
        .collect()
}

#[test]
fn survey_alt5() {
    let run = srl(&["survey", "--group", "Alt(5)"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let recs = records(&run);
    let classes: Vec<&Value> = recs.iter().filter(|r| r["record"] == "class").collect();
    assert_eq!(classes.len(), 3);
    assert!(classes.iter().all(|c| c["verdict"] == "PAIR_WITNESS"));
    let summary = recs.last().unwrap();
    assert_eq!(summary["record"], "survey");
    assert_eq!(summary["violations"], 0);
    assert!(recs.iter().all(|r| r["elapsed_ms"].is_null()));
}

#[test]
fn survey_psl33_reports_the_exception() {
    let run = srl(&["survey", "--group", "PSL(3,3)", "--max-k", "3"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let recs = records(&run);
    let t: Vec<&Value> = recs.iter().filter(|r| r["kind"] == "transvection").collect();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0]["verdict"], "TABLE1_EXCEPTION");
    assert_eq!(t[0]["witness_k"], 3);
    assert_eq!(t[0]["exception"]["row"], 0);
}

#[test]
fn witness_sp43_four_conjugates() {
    let args = [
        "witness", "--group", "Sp(4,3)", "--kind", "transvection", "--k", "4", "--mode", "random", "--seed", "7",
        "--budget", "10000",
    ];
    let run = srl(&args);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let recs = records(&run);
    assert_eq!(recs[0]["status"], "WITNESS_FOUND");
    assert_eq!(recs[0]["seed"], 7);
    assert_eq!(recs[0]["solvable"], false);
    assert_eq!(recs[0]["conjugates"].as_array().unwrap().len(), 3);
    let again = srl(&args);
    assert_eq!(run.stdout, again.stdout, "single-worker runs differ");
    let mut expect_none = args.to_vec();
    expect_none.extend(["--expect", "none"]);
    assert_eq!(srl(&expect_none).code, 1);
}

#[test]
fn witness_a5_and_s4() {
    let run = srl(&["witness", "--group", "Alt(5)", "--cycles", "(1,2,3)", "--expect", "found"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = &records(&run)[0];
    assert_eq!(r["subgroup_order"], 60);
    assert_eq!(r["class"]["size"], "20");
    let run = srl(&["witness", "--group", "Sym(4)", "--order", "3"]);
    assert_eq!(run.code, 0);
    assert_eq!(records(&run)[0]["status"], "NONE_EXHAUSTIVE");
    let run = srl(&["witness", "--group", "Sym(4)", "--order", "3", "--expect", "found"]);
    assert_eq!(run.code, 1);
    let run = srl(&["witness", "--group", "PSL(3,3)", "--kind", "transvection", "--k", "3", "--target", "full"]);
    assert_eq!(records(&run)[0]["subgroup_order"], 5616);
}

#[test]
fn budget_exhaustion_exits_2() {
    let run = srl(&[
        "witness", "--group", "Sym(4)", "--order", "3", "--mode", "random", "--seed", "1", "--budget", "20",
    ]);
    assert_eq!(run.code, 2);
    let r = &records(&run)[0];
    assert_eq!(r["status"], "NONE_BUDGET");
    assert_eq!(r["tuples_tested"], 20);
}

#[test]
fn ambiguous_selector_lists_candidates() {
    let run = srl(&["witness", "--group", "PSp(4,3)", "--order", "3"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("candidates"), "{}", run.stderr);
    let r = &records(&run)[0];
    assert_eq!(r["record"], "error");
    assert_eq!(r["error"], "Selector");
    let run = srl(&["witness", "--group", "Alt(5)", "--kind", "spinor"]);
    assert_eq!(run.code, 2);
}

#[test]
fn cache_replays_exhaustive_negatives() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let base = ["witness", "--group", "PSp(4,3)", "--kind", "transvection", "--k", "3", "--cache-dir", d];
    let first = srl(&base);
    assert_eq!(first.code, 0, "{}", first.stderr);
    assert_eq!(records(&first)[0]["cached"], false);
    assert_eq!(records(&first)[0]["status"], "NONE_EXHAUSTIVE");
    let start = std::time::Instant::now();
    let second = srl(&base);
    assert!(start.elapsed().as_millis() < 1000);
    assert_eq!(second.code, 0);
    let r = &records(&second)[0];
    assert_eq!(r["cached"], true);
    assert_eq!(r["tuples_tested"], 741);
    let mut seeded = base.to_vec();
    seeded.extend(["--seed", "5"]);
    assert_eq!(records(&srl(&seeded))[0]["cached"], false);
    let files: Vec<PathBuf> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    for f in &files {
        std::fs::write(f, "{\"key\": 1").unwrap();
    }
    let third = srl(&base);
    assert_eq!(third.code, 0);
    assert_eq!(records(&third)[0]["cached"], false);
    assert!(third.stderr.contains("corrupt"), "{}", third.stderr);
    // positives are never cached
    let found = ["witness", "--group", "Alt(5)", "--order", "3", "--cache-dir", d];
    srl(&found);
    assert_eq!(records(&srl(&found))[0]["cached"], false);
}

#[test]
fn audit_commands() {
    let run = srl(&["audit", "--family", "psl2", "--q0", "3", "--p", "3", "--expect", "holds"]);
    assert_eq!(run.code, 0);
    let r = &records(&run)[0];
    let terms: Vec<&str> = r["terms"].as_array().unwrap().iter().map(|t| t["value"].as_str().unwrap()).collect();
    assert_eq!(terms, ["24", "468", "42"]);
    assert_eq!(r["lhs"], "819");
    let run = srl(&["audit", "--family", "psl2", "--q0", "2", "--p", "3"]);
    assert_eq!(run.code, 0);
    assert_eq!(records(&run)[0]["verdict"], false);
    assert_eq!(srl(&["audit", "--family", "psl2", "--q0", "2", "--p", "3", "--expect", "holds"]).code, 1);
    let table = srl(&["audit", "--family", "sz", "--q0", "2", "--p", "3", "--format", "table"]);
    assert_eq!(table.code, 0);
    let last = table.stdout.lines().last().unwrap();
    let v: Value = serde_json::from_str(last).unwrap();
    assert_eq!(v["verdict"], true);
    assert!(table.stdout.starts_with("term"));
    let bad = srl(&["audit", "--family", "sz", "--q0", "4", "--p", "3"]);
    assert_eq!(bad.code, 2);
    assert_eq!(records(&bad)[0]["error"], "InvalidFamilyParams");
}

#[test]
fn count_commands() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("psu35.json");
    std::fs::write(
        &file,
        r#"{"group_order": 378000, "class_size": 15120, "subgroups": [
            {"label": "X1", "intersection": 124, "index": 126},
            {"label": "X2", "intersection": 63, "index": 6000},
            {"label": "X3", "intersection": 216, "index": 1750}]}"#,
    )
    .unwrap();
    let f = file.to_str().unwrap();
    let run = srl(&["count", "--instance", f, "--form", "remark", "--expect", "holds"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = &records(&run)[0];
    assert_eq!(r["lhs"], "3024/5");
    assert_eq!(r["rhs"], "403");
    let run = srl(&["count", "--group", "PSL(2,7)", "--order", "3", "--target-order", "4", "--expect", "found"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = &records(&run)[0];
    assert_eq!(r["partition_ok"], true);
    assert_ne!(r["count"], 0);
    std::fs::write(&file, r#"{"group_order": 60, "class_size": 7, "subgroups": []}"#).unwrap();
    assert_eq!(srl(&["count", "--instance", f]).code, 2);
    std::fs::write(&file, "[1,2").unwrap();
    assert_eq!(srl(&["count", "--instance", f]).code, 2);
}

#[test]
fn radical_and_parse() {
    let run = srl(&["radical", "--group", "Direct(Alt(5),Cyclic(3))"]);
    assert_eq!(run.code, 0);
    assert_eq!(records(&run)[0]["radical_order"], "3");
    let run = srl(&["parse", "wreath( alt(5) , 2 )"]);
    assert_eq!(records(&run)[0]["canonical"], "Wreath(Alt(5),2)");
    let run = srl(&["parse", "PSL(2,6)"]);
    assert_eq!(run.code, 2);
    let r = &records(&run)[0];
    assert_eq!(r["error"], "ParseError");
    assert!(r["position"].is_u64());
}

#[test]
fn env_and_config_precedence() {
    let run = srl_env(&["witness", "--order", "3"], &[("SRL_GROUP", "Alt(5)")]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    assert_eq!(records(&run)[0]["group"], "Alt(5)");
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "command = witness\ngroup = PSL(2,7)\norder = 7\ntiming = true\n").unwrap();
    let c = conf.to_str().unwrap();
    let run = srl(&["--config", c]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = &records(&run)[0];
    assert_eq!(r["group"], "PSL(2,7)");
    assert!(r["elapsed_ms"].is_u64());
    let run = srl(&["--config", c, "--group", "Alt(7)"]);
    assert_eq!(records(&run)[0]["group"], "Alt(7)");
    let run = srl_env(&["--config", c], &[("SRL_ORDER", "3")]);
    assert_eq!(records(&run)[0]["class"]["order"], 3);
}

#[test]
fn malformed_input_never_panics() {
    let cases: &[&[&str]] = &[
        &[],
        &["survey"],
        &["bogus"],
        &["witness", "--group", "Alt(5)"],
        &["witness", "--group", "Alt(5)", "--order", "3", "--k", "1"],
        &["witness", "--group", "Alt(5)", "--order", "3", "--mode", "random"],
        &["witness", "--group", "Alt(5)", "--order", "3", "--mode", "random", "--seed", "1", "--budget", "0"],
        &["witness", "--group", "Alt(5)", "--order", "2"],
        &["witness", "--group", "Alt(5)", "--cycles", "(1,2,9)"],
        &["witness", "--group", "Alt(5)", "--cycles", "(1,2"],
        &["witness", "--group", "Alt(5)", "--order", "3", "--expect", "holds"],
        &["survey", "--group", "PSL(2,"],
        &["survey", "--group", "PSL(9,9)"],
        &["count"],
        &["count", "--instance", "/nonexistent/file.json"],
        &["audit", "--family", "e8", "--q0", "2", "--p", "3"],
        &["audit", "--family", "psl2", "--q0", "3"],
        &["audit", "--family", "psl2", "--q0", "3", "--p", "4"],
        &["radical"],
        &["--k", "abc", "witness"],
        &["--config", "/nonexistent.conf", "parse", "Alt(5)"],
    ];
    for args in cases {
        let run = srl(args);
        assert_eq!(run.code, 2, "{args:?}: {}{}", run.stdout, run.stderr);
        assert!(!run.stderr.contains("panicked"), "{args:?}: {}", run.stderr);
        if !run.stdout.is_empty() {
            records(&run);
        }
    }
    assert_eq!(srl(&["--help"]).code, 0);
}
