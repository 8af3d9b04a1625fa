use std::path::Path;
use std::process::{Command, Output};

use mrv::corpus;

fn mrv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrv")).args(args).output().expect("spawn mrv")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn tank_verifies() {
    let o = mrv(&["verify", "tank"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("tank: verified, 14/14"));
}

#[test]
fn tank_broken_prints_a_counterexample() {
    let o = mrv(&["verify", "tank_broken"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("counterexample (confirmed by replay)"), "{out}");
    assert!(out.contains("NOT verified"));
}

#[test]
fn collision_verifies() {
    let o = mrv(&["verify", "collision"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn corpus_exit_codes() {
    for e in corpus::EXAMPLES {
        let o = mrv(&["verify", e.name]);
        let want = if e.is_good() { 0 } else { 1 };
        assert_eq!(code(&o), want, "{}\n{}{}", e.name, stdout(&o), stderr(&o));
    }
}

#[test]
fn verify_reads_files_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("c.mrv");
    std::fs::write(&src, corpus::get("counter").unwrap().source).unwrap();
    let json = dir.path().join("report.json");
    let o = mrv(&["verify", src.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report["verified"], true);
    let obs = report["obligations"].as_array().unwrap();
    assert_eq!(obs.len(), 2);
    assert!(obs.iter().all(|o| o["verdict"] == "valid"));
}

#[test]
fn smt_dump_writes_one_script_per_obligation() {
    let dir = tempfile::tempdir().unwrap();
    let o = mrv(&["verify", "counter", "--smt-dump", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let mut files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|f| f.unwrap().file_name()).collect();
    files.sort();
    assert_eq!(files, vec!["obligation-000.smt2", "obligation-001.smt2"]);
    let text = std::fs::read_to_string(dir.path().join("obligation-000.smt2")).unwrap();
    assert!(text.contains("(check-sat)"));
}

#[test]
fn counter_csv() {
    let o = mrv(&["run", "counter", "--steps", "5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut want = String::from("instant,out,x\n");
    for i in 0..5 {
        want.push_str(&format!("{i},{i},{i}\n"));
    }
    assert_eq!(stdout(&o), want);
}

#[test]
fn jsonl_output() {
    let o = mrv(&["run", "counter", "--steps", "3", "--format", "jsonl"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[2], serde_json::json!({"instant": 2, "out": 2, "x": 2}));
}

fn controller(level: f64, flow: f64) -> f64 {
    if level < 1.5 {
        0.5
    } else if level > 18.5 {
        0.0
    } else {
        flow
    }
}

#[test]
fn tank_robot_mode_logs_flow_writes() {
    let readings = [15.0, 1.2, 1.2, 10.0, 18.9, 18.9, 10.0];
    let dir = tempfile::tempdir().unwrap();
    let devices = dir.path().join("devices.json");
    std::fs::write(&devices, serde_json::json!({ "level": readings }).to_string()).unwrap();
    let out = dir.path().join("trace.csv");
    let o = mrv(&[
        "run",
        "tank",
        "--steps",
        "7",
        "--robot-mode",
        "--devices",
        devices.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = mrv::trace::Trace::read_csv(std::fs::File::open(&out).unwrap()).unwrap();

    // The level at instant 0 is the initial 15.0; later instants read the
    // sensor. The valve command follows the previous level and command.
    let mut want = vec![0.0];
    for n in 1..readings.len() {
        let level_prev = if n == 1 { 15.0 } else { readings[n - 1] };
        want.push(controller(level_prev, want[n - 1]));
    }
    assert_eq!(want, vec![0.0, 0.0, 0.5, 0.5, 0.5, 0.0, 0.0]);
    let writes: Vec<f64> = t.series("write.flow").unwrap().into_iter().map(|v| v.unwrap().as_f64().unwrap()).collect();
    assert_eq!(writes, want);
    let levels: Vec<f64> = t.series("level").unwrap().into_iter().map(|v| v.unwrap().as_f64().unwrap()).collect();
    assert_eq!(levels[1..], readings[1..]);
}

#[test]
fn robot_mode_requires_devices() {
    let o = mrv(&["run", "tank", "--robot-mode"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn mutations_do_not_run_unless_unchecked() {
    let o = mrv(&["run", "counter_down_broken", "--steps", "3"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("--unchecked"));
    let o = mrv(&["run", "counter_down_broken", "--steps", "3", "--unchecked"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn monitor_reports_violations() {
    let o = mrv(&["run", "counter_down_broken", "--steps", "5", "--unchecked", "--monitor"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("violation at instant 1"), "{}", stderr(&o));
    let o = mrv(&["run", "tank", "--steps", "300", "--monitor"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(!stderr(&o).contains("violation"));
}

fn run_to(name: &str, steps: &str, path: &Path) {
    let o = mrv(&["run", name, "--steps", steps, "--unchecked", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn replayed_trace_matches_live_monitor() {
    let dir = tempfile::tempdir().unwrap();
    for (name, ext) in [("counter_down_broken", "csv"), ("collision_broken", "jsonl"), ("tank", "csv"), ("collision", "jsonl")] {
        let path = dir.path().join(format!("{name}.{ext}"));
        let format = if ext == "csv" { "csv" } else { "jsonl" };
        let live = mrv(&["run", name, "--steps", "500", "--unchecked", "--monitor", "--format", format]);
        std::fs::write(&path, &live.stdout).unwrap();
        let replay = mrv(&["monitor", name, "--trace", path.to_str().unwrap()]);
        assert_eq!(code(&live), code(&replay), "{name}");
        assert_eq!(stderr(&live), stderr(&replay), "{name}");
    }
    let path = dir.path().join("nested_delay.csv");
    run_to("nested_delay", "6", &path);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "instant,out,x,y\n0,0,0,0\n1,0,0,1\n2,1,1,1\n3,2,2,1\n4,3,3,1\n5,4,4,1\n");
}

#[test]
fn usage_and_io_errors_exit_2() {
    assert_eq!(code(&mrv(&["verify", "/nonexistent/file.mrv"])), 2);
    assert_eq!(code(&mrv(&["verify", "counter", "--solver", "/nonexistent/solver"])), 2);
    assert_eq!(code(&mrv(&["verify", "counter", "--timeout", "0"])), 2);
    assert_eq!(code(&mrv(&["frobnicate"])), 2);
    assert_eq!(code(&mrv(&["corpus", "show", "nope"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "[1, 2]").unwrap();
    let o = mrv(&["run", "tank", "--robot-mode", "--devices", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn rejected_programs_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("bad.mrv");
    std::fs::write(&src, "let rec x = x + 1 in x").unwrap();
    let o = mrv(&["verify", src.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    std::fs::write(&src, "let x = in").unwrap();
    assert_eq!(code(&mrv(&["verify", src.to_str().unwrap()])), 1);
}

#[test]
fn corpus_commands() {
    let o = mrv(&["corpus", "list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), corpus::EXAMPLES.len());
    let o = mrv(&["corpus", "show", "tank"]);
    assert_eq!(stdout(&o), corpus::get("tank").unwrap().source);
}
