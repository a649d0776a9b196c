use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn boxprune(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxprune"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const UNSAFE_NOW: &str = "int main() {\n    int x = 3;\n    assert(x < 2);\n    return 0;\n}\n";

#[test]
fn exit_codes_follow_the_verdict() {
    let safe = boxprune(&["verify", corpus("afnp2014.c").to_str().unwrap()]);
    assert_eq!(safe.status.code(), Some(0), "{}", stderr(&safe));
    assert!(stdout(&safe).contains("verdict: SAFE"));

    let unknown = boxprune(&["verify", corpus("afnp2014.c").to_str().unwrap(), "--k-max", "10"]);
    assert_eq!(unknown.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("now.c");
    std::fs::write(&f, UNSAFE_NOW).unwrap();
    let bad = boxprune(&["verify", f.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("counterexample"));
}

#[test]
fn parse_errors_exit_three_with_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.c");
    std::fs::write(&f, "int main() {\n    int x = ;\n}\n").unwrap();
    let out = boxprune(&["verify", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn machine_reports_are_sorted_and_repeatable() {
    let f = corpus("shifted_pair.c");
    let args = ["verify", "--compare", "--format", "machine", f.to_str().unwrap()];
    let a = boxprune(&args);
    let b = boxprune(&args);
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["kind"], "comparison");
    assert_eq!(v["comparison"]["status"], "AGREE");
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(!stdout(&a).contains("wall_time"));
}

#[test]
fn instrument_writes_the_listing_and_it_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("afnp_pruned.c");
    let run = boxprune(&["instrument", corpus("afnp2014.c").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
    assert!(stdout(&run).contains("plan: assume(x <= 1000)"));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("assume(x <= 1000);"));
    let verify = boxprune(&["verify", out.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    assert!(stdout(&verify).contains("states: 5637"));
}

#[test]
fn instrument_machine_output_embeds_the_source() {
    let run = boxprune(&["instrument", "--format", "machine", corpus("not_equal.c").to_str().unwrap()]);
    let v: Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(v["plan"]["applied"], false);
    assert_eq!(v["plan"]["reason"], "UNSUPPORTED_OPERATOR");
    assert!(v["source"].as_str().unwrap().contains("assert(x != y);"));
}

#[test]
fn contract_standalone_box() {
    let out = boxprune(&["contract", "--var", "x=0..20", "--var", "y=0..4294967295", "-c", "x >= y"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let s = stdout(&out);
    assert!(s.contains("outer: x:[0, 20] × y:[0, 20]"), "{s}");

    let err = boxprune(&["contract", "--var", "x=0..1", "-c", "x % 2 >= 0"]);
    assert_eq!(err.status.code(), Some(3));
    assert!(stderr(&err).contains('%'));
}

#[test]
fn range_flag_narrows_nondet_inputs() {
    let f = corpus("unsigned_pair.c");
    let wide = boxprune(&["verify", "--format", "machine", f.to_str().unwrap()]);
    let narrow = boxprune(&["verify", "--format", "machine", "--range", "y=0..5", f.to_str().unwrap()]);
    let states = |o: &Output| {
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["verdict"]["stats"]["states_visited"].as_u64().unwrap()
    };
    assert!(states(&narrow) < states(&wide));
    let bad = boxprune(&["verify", "--range", "y=5..1", f.to_str().unwrap()]);
    assert_ne!(bad.status.code(), Some(0));
}

#[test]
fn bench_skips_programs_without_expectations() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["afnp_gap", "race"] {
        std::fs::copy(corpus(&format!("{name}.c")), dir.path().join(format!("{name}.c"))).unwrap();
        std::fs::copy(corpus(&format!("{name}.expected")), dir.path().join(format!("{name}.expected"))).unwrap();
    }
    std::fs::write(dir.path().join("orphan.c"), UNSAFE_NOW).unwrap();
    let out = boxprune(&["bench", "--format", "machine", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("orphan.c: no .expected file"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = v["programs"].as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["afnp_gap.c", "race.c"]);
    assert_eq!(v["summary"]["divergences"], 0);
    assert_eq!(v["summary"]["score_original"], 2);
}
