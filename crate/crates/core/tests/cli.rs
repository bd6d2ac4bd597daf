use std::path::{Path, PathBuf};
use std::process::Command;

use deontic_mc::automaton::StitAutomaton;
use deontic_mc::cli::Report;
use deontic_mc::rss::{fixtures, rss6};
use deontic_mc::tree_model::ExplicitStitModel;
use deontic_mc::value::Value;
use serde_json::{json, Value as Json};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json")).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_deontic-mc")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn machine(args: &[&str]) -> (i32, Report) {
    let mut all = vec!["--format", "machine"];
    all.extend_from_slice(args);
    let (code, stdout, _) = run(&all);
    let report: Report = serde_json::from_str(&stdout).expect("machine output is a report");
    assert_eq!(report.exit_code, code);
    (code, report)
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn validate_exit_codes() {
    assert_eq!(run(&["validate", &fixture("fig1")]).0, 0);
    assert_eq!(run(&["validate", &fixture("t0")]).0, 0);

    let mut broken = fixtures::fig1();
    broken.choices[0].actions[1].retain(|h| h != "h6");
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "broken.json", &serde_json::to_string(&broken).unwrap());
    let (code, report) = machine(&["validate", p.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(report.result["valid"], json!(false));
    let axioms: Vec<&Json> = report.result["violations"].as_array().unwrap().iter().map(|v| &v["axiom"]).collect();
    assert!(axioms.contains(&&json!("partition")), "{axioms:?}");
    let (_, human, _) = run(&["validate", p.to_str().unwrap()]);
    assert!(human.contains("[partition]"), "{human}");

    let p = write(&dir, "junk.json", "{ \"moments\": [ ");
    let (code, _, stderr) = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.starts_with("error:"), "{stderr}");
    assert_eq!(run(&["validate", "/no/such/file.json"]).0, 2);
}

#[test]
fn check_exit_codes() {
    let o = "O[alpha cstit: A]";
    assert_eq!(run(&["check", &fixture("fig1"), "--at", "0", "--formula", o]).0, 0);
    assert_eq!(run(&["check", &fixture("fig1"), "--at", "1", "--formula", o]).0, 1);
    assert_eq!(run(&["check", &fixture("fig2"), "--at", "6", "--formula", "O[alpha cstit: F[0:2] p]"]).0, 0);
    assert_eq!(run(&["check", &fixture("fig1"), "--at", "99", "--formula", o]).0, 2);
    assert_eq!(run(&["check", &fixture("fig1"), "--at", "0", "--formula", "O[alpha cstit: "]).0, 2);
    assert_eq!(run(&["check", &fixture("fig1"), "--at", "0", "--history", "h9", "--formula", o]).0, 2);
    assert_eq!(run(&["check", &fixture("fig1"), "--at", "0", "--history", "h5", "--formula", "[alpha dstit: A]"]).0, 0);
    assert_eq!(run(&["check", &fixture("fig1"), "--at", "0", "--history", "h1", "--formula", "[alpha cstit: A]"]).0, 1);
}

#[test]
fn check_report_lists_extension_and_optimal_actions() {
    let (_, r) = machine(&["check", &fixture("fig1"), "--at", "0", "--formula", "O[alpha cstit: A]"]);
    let text = r.result.to_string();
    for id in ["h1", "h2", "h3", "h5", "h6"] {
        assert!(text.contains(id));
    }
    assert_eq!(r.result["holds"], json!(true));
}

#[test]
fn mc_reports_intervals_on_t0() {
    let (code, r) = machine(&["mc", &fixture("t0"), "--agent", "alpha", "--ought", "O[alpha cstit: G p]"]);
    assert_eq!(code, 0);
    assert_eq!(
        r.result["intervals"],
        json!([{ "action": "K1", "lo": "4", "hi": "4" }, { "action": "K2", "lo": "2", "hi": "2" }])
    );
    assert_eq!(r.result["optimal_actions"], json!(["K1"]));
}

#[test]
fn mc_equal_weights_fails_with_a_lasso() {
    let mut t = fixtures::t0();
    for tr in &mut t.transitions {
        tr.weight = Value::int(1);
    }
    let dir = tempfile::tempdir().unwrap();
    let p = write(&dir, "flat.json", &serde_json::to_string(&t).unwrap());
    let (code, r) = machine(&["mc", p.to_str().unwrap(), "--agent", "alpha", "--ought", "O[alpha cstit: G p]"]);
    assert_eq!(code, 1);
    assert_eq!(r.result["failing_action"], json!("K2"));
    let cx = &r.result["counterexample"];
    assert_eq!(cx["stem"][0], json!("q0"));
    assert!(cx["cycle"].as_array().unwrap().contains(&json!("q2")));
}

#[test]
fn mc_conditional_merge_holds() {
    let o = rss6("alpha", 3).to_string();
    let (code, r) = machine(&["mc", &fixture("merge"), "--agent", "alpha", "--ought", &o]);
    assert_eq!(code, 0);
    assert_eq!(r.result["vacuous"], json!(false));
}

#[test]
fn mc_from_state_reroots() {
    let args = |s: &'static str| ["mc", "--agent", "alpha", "--ought", "O[alpha cstit: G p]", "--from-state", s];
    let t0 = fixture("t0");
    let mut a = args("q1").to_vec();
    a.insert(1, &t0);
    let (code, r) = machine(&a);
    assert_eq!(code, 0);
    assert_eq!(r.result["optimal_actions"], json!(["K1"]));
    let mut a = args("q2").to_vec();
    a.insert(1, &t0);
    assert_eq!(machine(&a).0, 1);
    let mut a = args("nowhere").to_vec();
    a.insert(1, &t0);
    assert_eq!(run(&a).0, 2);
}

#[test]
fn mc_lists_schedules() {
    let (_, r) = machine(&["mc", &fixture("t0"), "--agent", "alpha", "--ought", "O[alpha cstit: G p]", "--schedules"]);
    let values: Vec<&Json> = r.result["schedules"].as_array().unwrap().iter().map(|s| &s["value"]).collect();
    assert!(values.contains(&&json!("4")) && values.contains(&&json!("2")), "{values:?}");
}

#[test]
fn unroll_writes_a_valid_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t0-2.json");
    assert_eq!(run(&["unroll", &fixture("t0"), "--depth", "2", "--out", out.to_str().unwrap()]).0, 0);
    assert_eq!(run(&["validate", out.to_str().unwrap()]).0, 0);
    let m: ExplicitStitModel = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(m.histories.len(), 2);
    assert_eq!(run(&["unroll", &fixture("t0"), "--depth", "0"]).0, 2);
}

#[test]
fn rss_demos() {
    assert_eq!(run(&["rss", "rss1-unavoidable"]).0, 0);
    assert_eq!(run(&["--seed", "5", "rss", "refrain-refrain"]).0, 0);
    assert_eq!(run(&["rss", "no-such-demo"]).0, 2);
    let (_, r) = machine(&["rss", "rss1-unavoidable"]);
    let passes: Vec<&Json> = r.result["assertions"].as_array().unwrap().iter().map(|a| &a["pass"]).collect();
    assert!(!passes.is_empty() && passes.iter().all(|p| **p == json!(true)));
}

#[test]
fn machine_output_is_stable() {
    let args = ["mc", &fixture("merge"), "--agent", "alpha", "--ought", "O[alpha cstit: G p_alpha]", "--schedules"];
    let mut all = vec!["--format", "machine"];
    all.extend_from_slice(&args);
    let (_, first, _) = run(&all);
    let (_, second, _) = run(&all);
    assert_eq!(first, second);
    let r: Report = serde_json::from_str(&first).unwrap();
    let digest = r.inputs_digest.as_deref().unwrap();
    assert_eq!(digest.len(), 64);
    assert!(digest.chars().all(|c| c.is_ascii_hexdigit()));
    assert_eq!(r.timing_ms, None);
    assert_eq!(serde_json::from_str::<Report>(&serde_json::to_string(&r).unwrap()).unwrap(), r);

    let (_, t) = machine(&["--timing", "validate", &fixture("fig2")]);
    assert!(t.timing_ms.is_some());
}

#[test]
fn errors_in_machine_mode_are_reports() {
    let (code, r) = machine(&["check", &fixture("fig1"), "--at", "7", "--formula", "O[beta cstit: A]"]);
    assert_eq!(code, 2);
    assert!(r.result["error"].is_string());
}

#[test]
fn fixtures_subcommand_exports_every_fixture() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["fixtures", "--out", dir.path().to_str().unwrap()]).0, 0);
    for f in fixtures::fixtures() {
        let text = std::fs::read_to_string(dir.path().join(format!("{}.json", f.name))).unwrap();
        if f.name == "t0" || f.name == "merge" {
            serde_json::from_str::<StitAutomaton>(&text).unwrap();
        } else {
            serde_json::from_str::<ExplicitStitModel>(&text).unwrap();
        }
    }
}
