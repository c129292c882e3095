use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn prolim(args: &[&str], stdin: &str, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_prolim"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    for (k, v) in env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

const RP2: &str = r#"{"facets": [[0,1,3],[1,2,3],[0,2,4],[2,3,4],[0,3,5],[1,4,5],[3,4,5],[0,1,4],[1,2,5],[0,2,5]]}"#;

#[test]
fn snf_certifies() {
    let o = prolim(&["snf"], r#"{"rows": 2, "cols": 2, "entries": [[2, 4], [6, 8]]}"#, &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    let f: Vec<String> = v["result"]["invariant_factors"].as_array().unwrap().iter().map(|x| x.to_string().trim_matches('"').to_owned()).collect();
    assert_eq!(f, ["2", "4"]);
}

#[test]
fn homology_of_projective_plane() {
    let o = prolim(&["homology"], RP2, &[]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("Z/2"), "{text}");
}

#[test]
fn tower_of_times_three() {
    let t = r#"{"kind": "periodic", "period_group": {"generators": 1}, "period_map": {"rows":1,"cols":1,"entries":[[3]]}}"#;
    let o = prolim(&["tower", "--depth", "4"], t, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn malformed_input_exits_2() {
    let o = prolim(&["snf"], "{not json", &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn budget_overrun_exits_2() {
    let o = prolim(&["scenario", "solenoid"], "", &[("PROLIM_OP_BUDGET", "50")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PROLIM_OP_BUDGET"));
}

#[test]
fn failed_check_exits_1() {
    // A single telescope has no bonding map to certify.
    let o = prolim(&["scenario", "telescope", "--m", "1"], "", &[]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["passed"], false);
}

#[test]
fn scenario_all_is_deterministic() {
    let a = prolim(&["scenario", "all", "--scales", "2", "--columns", "2"], "", &[]);
    let b = prolim(&["scenario", "all", "--scales", "2", "--columns", "2"], "", &[]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_file_gets_the_json() {
    let dir = std::env::temp_dir().join(format!("prolim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.json");
    let o = prolim(&["scenario", "p-power", "--window", "5,5", "--out", path.to_str().unwrap()], "", &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_corpus_is_seeded() {
    let a = prolim(&["verify", "corpus", "--count", "5", "--seed", "7"], "", &[]);
    let b = prolim(&["verify", "corpus", "--count", "5", "--seed", "7"], "", &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
