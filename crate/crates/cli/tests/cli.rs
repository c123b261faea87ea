use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_otto-spin");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .output()
        .expect("spawn otto-spin")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn analyze_prints_summary_line() {
    let o = run(&[
        "analyze", "--jz-i", "0.659225", "--jz-f", "0.976325", "--r1", "0.7", "--r2", "2", "--tc",
        "1", "--th", "1.5", "--format", "text",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("engine W=-0.030259 eta=8.8%"));
}

#[test]
fn analyze_json_has_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a.json");
    let o = run(&[
        "analyze",
        "--jz",
        "0",
        "--r2",
        "0",
        "--r1-i",
        "1",
        "--r1-f",
        "2",
        "--tc",
        "1",
        "--th",
        "2",
        "-o",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = read_json(&out);
    assert_eq!(doc["provenance"]["tool"], "otto-spin");
    assert_eq!(doc["provenance"]["command"], "analyze");
    let r = &doc["result"];
    let residual =
        r["w"].as_f64().unwrap() + r["q_h"].as_f64().unwrap() + r["q_c"].as_f64().unwrap();
    assert!(residual.abs() < 1e-12);
}

#[test]
fn inverted_baths_are_usage_errors() {
    let o = run(&[
        "analyze", "--jz", "0", "--r1", "1", "--r2", "0", "--tc", "2", "--th", "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--tc"));
    let o = run(&["table1", "--tc", "1", "--th", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_required_flag_is_usage_error() {
    let o = run(&["optimize", "--tc", "1", "--th", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unused_spectrum_flag_is_rejected() {
    let o = run(&[
        "optimize",
        "--family",
        "three-level",
        "--jz",
        "1",
        "--tc",
        "1",
        "--th",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn no_extrema_is_domain_error() {
    let o = run(&[
        "optimize",
        "--family",
        "three-level",
        "--tc",
        "1",
        "--th",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("EmptyResult"));
}

#[test]
fn bad_thread_count_is_usage_error() {
    let o = Command::new(BIN)
        .args(["table1", "--tc", "1", "--th", "2"])
        .env("OTTO_SPIN_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table1_csv_header_and_rows() {
    let o = run(&["table1", "--tc", "1", "--th", "2,3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("th,r1_i,r1_f,w,eta_mp,eta_c,eta_n"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn csv_output_gets_sidecar_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("map.csv");
    let o = run(&[
        "sweep",
        "--family",
        "jz",
        "--r1",
        "0.7",
        "--r2",
        "2",
        "--tc",
        "1",
        "--th",
        "1.5",
        "--resolution",
        "32",
        "-o",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let side = dir.path().join("map.csv.provenance.json");
    assert!(side.exists());
    let again = dir.path().join("again.csv");
    let o = run(&["replay", p(&side), "-o", p(&again)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn json_output_replays_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("opt.json");
    let o = run(&[
        "optimize",
        "--family",
        "r2const",
        "--r2",
        "1.8",
        "--tc",
        "1",
        "--th",
        "2",
        "-o",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!dir.path().join("opt.json.provenance.json").exists());
    let o = run(&["replay", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(o.stdout, std::fs::read(&out).unwrap());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        "# three-level\nfamily=three-level\ntc=1\nth=3\nr1_i=1\nr1_f=2\nformat=json\n",
    )
    .unwrap();
    let out = dir.path().join("a.json");
    let from_file = run(&["analyze", "--config", p(&cfg), "-o", p(&out)]);
    assert_eq!(from_file.status.code(), Some(0), "{}", stderr(&from_file));
    let doc = read_json(&out);
    assert_eq!(doc["provenance"]["settings"]["th"], "3");

    let overridden = run(&["analyze", "--config", p(&cfg), "--th", "2", "-o", p(&out)]);
    assert_eq!(overridden.status.code(), Some(0), "{}", stderr(&overridden));
    let doc = read_json(&out);
    assert_eq!(doc["provenance"]["settings"]["th"], "2");
}

#[test]
fn output_replaces_existing_file_whole() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    std::fs::write(&out, "x".repeat(10_000)).unwrap();
    let o = run(&["table1", "--tc", "1", "--th", "2", "-o", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("th,"));
    assert!(!text.contains('x'));
    // no temp files left behind
    let names: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 2, "{names:?}");
}
