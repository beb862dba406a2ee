mod common;

use std::process::{Command, Output};

use common::*;
use toriclc::cli::{run_text, Command as Cmd, IdealInput, Options, REPORT_SCHEMA};

fn toriclc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toriclc")).args(args).output().expect("binary runs")
}

fn write_temp(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("toriclc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn machine_report_shape() {
    let out = toriclc(&["lc", corpus_path("twodim").to_str().unwrap(), "--format", "machine"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], REPORT_SCHEMA);
    assert_eq!(v["command"], "lc");
    assert_eq!(v["result"]["total_length"], 3);
    assert_eq!(v["input"]["matrix"], serde_json::json!([[1, 1, 1], [0, 1, 2]]));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("elapsed"));
}

#[test]
fn human_report_mentions_timing() {
    let out = toriclc(&["sectors", corpus_path("twodim").to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("classes (4)"));
    assert!(text.contains("elapsed:"));
}

#[test]
fn exit_codes() {
    let bad = write_temp("bad.txt", "matrix:\n 1 x\n");
    let out = toriclc(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    for name in ["sublattice", "line"] {
        let out = toriclc(&["sectors", corpus_path(name).to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
    }

    let out = toriclc(&["analyze", "/nonexistent/problem.txt"]);
    assert_eq!(out.status.code(), Some(1));

    let out = toriclc(&["lc", corpus_path("twodim").to_str().unwrap(), "--ideal", "1,1;0,1"]);
    assert_eq!(out.status.code(), Some(2), "generator outside NA");
}

#[test]
fn search_bound_exhaustion_is_reported() {
    let out = toriclc(&["sectors", corpus_path("scored").to_str().unwrap(), "--bound", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_file_and_overrides() {
    let dest = std::env::temp_dir().join(format!("toriclc-out-{}.json", std::process::id()));
    let out = toriclc(&[
        "lc",
        corpus_path("hartshorne").to_str().unwrap(),
        "--maximal",
        "--format",
        "machine",
        "--output",
        dest.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(v["input"]["ideal"], "maximal");
    // the Segre cone is Cohen-Macaulay: only the top module survives
    assert_eq!(v["result"]["modules"].as_array().unwrap().len(), 1);
    assert_eq!(v["result"]["modules"][0]["index"], 3);
    std::fs::remove_file(dest).ok();
}

#[test]
fn library_and_binary_agree() {
    let text = std::fs::read_to_string(corpus_path("ns23")).unwrap();
    let report = run_text(Cmd::Grd, &text, &Options::default()).unwrap();
    let out = toriclc(&["grd", corpus_path("ns23").to_str().unwrap(), "--format", "machine"]);
    assert_eq!(report.machine().as_bytes(), &out.stdout[..]);
}

#[test]
fn rejected_sections_do_not_abort() {
    let text = std::fs::read_to_string(corpus_path("nons2")).unwrap();
    let report = run_text(Cmd::Grd, &text, &Options::default()).unwrap();
    assert_eq!(report.document["result"]["fiber_at_origin"]["status"], "rejected");
    let opts = Options {
        ideal: Some(IdealInput::Generators(vec![vec![1, 0]])),
        ..Options::default()
    };
    let report = run_text(Cmd::Lc, &text, &opts).unwrap();
    assert_eq!(report.document["input"]["ideal"]["generators"], serde_json::json!([[1, 0]]));
}
