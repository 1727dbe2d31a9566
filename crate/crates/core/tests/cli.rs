//! Golden tests for the command line.

mod common;

use std::ffi::OsString;
use std::fs;

use stratal::frontend::cli::main_with;

fn cli(args: &[&str]) -> (i32, String, String) {
    let argv = std::iter::once("stratal").chain(args.iter().copied()).map(OsString::from);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn corpus_file(name: &str) -> String {
    common::corpus_dir().join(name).to_string_lossy().into_owned()
}

#[test]
fn check_divergence_unstratified() {
    let (code, out, _) = cli(&["check", &corpus_file("diverge.str"), "--system", "unstratified"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(Unit, {r})");
}

#[test]
fn check_divergence_stratified_points_at_region() {
    let (code, out, err) = cli(&["check", &corpus_file("diverge.str")]);
    assert_eq!(code, 1);
    let text = out + &err;
    assert!(text.contains("StratificationViolation"), "{text}");
    assert!(text.contains("diverge.str:5:1"), "{text}");
}

#[test]
fn check_json_reports_kind() {
    let (code, out, _) = cli(&["check", &corpus_file("boudol.str"), "--system", "unstratified", "--no-subsumption", "--format", "json"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(v["kind"], "PayloadMismatch");
    assert_eq!(v["error"]["kind"], "PayloadMismatch");
    assert_eq!(v["error"]["span"]["line"], 7);
}

#[test]
fn run_clock_three_instants() {
    let (code, out, _) = cli(&["run", &corpus_file("clock.str"), "--instants", "3", "--seed", "7"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("Terminated after"), "{out}");
    assert!(out.contains("3 ticks"), "{out}");
    assert!(out.contains("r' <= {1, 2, 3, 4}"), "{out}");
}

#[test]
fn run_all_schedules_reports_cycle() {
    let (code, out, _) = cli(&["run", &corpus_file("diverge.str"), "--system", "unstratified", "--all-schedules"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("CycleDetected"), "{out}");
}

#[test]
fn run_rejects_ill_typed_programs() {
    let (code, _, err) = cli(&["run", &corpus_file("diverge.str")]);
    assert_eq!(code, 1);
    assert!(err.contains("StratificationViolation"), "{err}");
}

#[test]
fn trace_writes_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.jsonl");
    let (code, _, _) = cli(&["trace", &corpus_file("ref_replace.str"), "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&path).unwrap();
    let records: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 5);
    assert_eq!(records[0]["rule"], "set");
    assert_eq!(records[0]["store_delta"]["value"], "1");
    assert!(records.iter().all(|r| r["state_hash"].as_str().unwrap().len() == 16));
    let steps: Vec<u64> = records.iter().map(|r| r["step"].as_u64().unwrap()).collect();
    assert_eq!(steps, (1..=5).collect::<Vec<_>>());

    // same seed, same trace
    let (_, again, _) = cli(&["trace", &corpus_file("ref_replace.str"), "--seed", "3"]);
    assert_eq!(again, text);
}

#[test]
fn translate_removes_else_next() {
    let (code, out, _) = cli(&["translate", &corpus_file("clock.str")]);
    assert_eq!(code, 0);
    assert!(!out.contains("elsenext"), "{out}");
    assert!(out.contains("region r : Int -{r'}> Unit;"), "{out}");
}

#[test]
fn expand_output_reparses() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = cli(&["expand", &corpus_file("factorial.str")]);
    assert_eq!(code, 0);
    assert!(!out.contains("fix[") && !out.contains("ref["), "{out}");
    let path = dir.path().join("expanded.str");
    fs::write(&path, &out).unwrap();
    let (code, out, _) = cli(&["check", path.to_str().unwrap(), "--system", "unstratified"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn simulate_each_discipline() {
    for (file, d) in [("ref_replace.str", "ref"), ("producer_consumer.str", "chan"), ("broadcast.str", "sig")] {
        let (code, out, err) = cli(&["simulate", &corpus_file(file), "--discipline", d]);
        assert_eq!(code, 0, "{file}: {out}{err}");
        assert!(out.starts_with("simulation holds"), "{out}");
    }
}

#[test]
fn corpus_subcommand_passes() {
    let (code, out, _) = cli(&["corpus", common::corpus_dir().to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.trim_end().ends_with("0 failed"), "{out}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["check"]).0, 2);
    assert_eq!(cli(&["check", "/nonexistent/file.str"]).0, 2);
    assert_eq!(cli(&["run", &corpus_file("clock.str"), "--fuel", "0"]).0, 2);
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("check"));
}

#[test]
fn parse_errors_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.str");
    fs::write(&path, "region r : Unit;\nmain = set(#r, unit;\n").unwrap();
    let (code, _, err) = cli(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains(":2:20"), "{err}");
}
