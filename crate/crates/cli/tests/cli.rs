use std::process::{Command, Output};

use serde_json::Value;

fn heiskor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heiskor"))
        .args(args)
        .env_remove("HEISKOR_THREADS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn error_of(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("error record on stderr");
    serde_json::from_str(line).expect("error record is json")
}

#[test]
fn bessel_example() {
    let out = heiskor(&["bessel", "--nu", "0.5", "--x", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let value = v["data"]["value"].as_f64().unwrap();
    assert!((value - 0.461_069).abs() < 1e-6);
    assert!(v["data"]["abs_error_estimate"].as_f64().unwrap() < 1e-10);
    assert!(v["data"]["method"].is_string());
    assert_eq!(v["meta"]["command"], "bessel");
    assert_eq!(v["meta"]["params"]["nu"], 0.5);
}

#[test]
fn csv_floats_round_trip() {
    let out = heiskor(&["--format", "csv", "bessel", "--nu", "0.5", "--x", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("key,value"));
    let value: f64 = lines
        .find_map(|l| l.strip_prefix("value,"))
        .unwrap()
        .parse()
        .unwrap();
    let json = json_of(&heiskor(&["bessel", "--nu", "0.5", "--x", "1"]));
    assert_eq!(value, json["data"]["value"].as_f64().unwrap());
}

#[test]
fn bound_scan_csv_schema() {
    let out = heiskor(&["--format", "csv", "bound-scan", "--s", "1.5", "--grid-decades", "-1:1", "--per-decade", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["record", "xi1", "xi2", "fhat", "fhat_abs_error", "ratio"]);
    let recs: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    let rows: Vec<_> = recs.iter().filter(|r| &r[0] == "row").collect();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r[3].parse::<f64>().unwrap() > 0.0));
    assert!(recs.iter().any(|r| &r[0] == "summary" && &r[1] == "c_s_estimate"));
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &["bessel", "--nu", "0.5", "--x", "-1"][..],
        &["bessel", "--nu", "0.5"],
        &["fhat", "--s", "3.5", "--xi1", "1", "--xi2", "1"],
        &["fhat", "--s", "1.5", "--xi1", "1", "--xi2", "0"],
        &["bound-scan", "--s", "1.5", "--grid-decades", "2:-2"],
        &["nonsense"],
    ] {
        let out = heiskor(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let e = error_of(&out);
        assert_eq!(e["error"]["kind"], "config", "{args:?}");
        assert_eq!(e["exit_code"], 2);
    }
}

#[test]
fn invalid_thread_count_is_a_config_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_heiskor"))
        .args(["bessel", "--nu", "0", "--x", "1"])
        .env("HEISKOR_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_failure_exits_three() {
    // No chord phase reaches exponent 5 on this range.
    let out = heiskor(&["sublevel", "--pairs", "1", "--samples", "10000", "--min-exponent", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_of(&out)["error"]["kind"], "certification");
    // The data is still written.
    assert!(json_of(&out)["data"]["min_exponent"].as_f64().unwrap() < 5.0);
}

#[test]
fn unwritable_output_exits_four() {
    let out = heiskor(&["bessel", "--nu", "0", "--x", "1", "--output", "/nonexistent-dir/out.json"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_of(&out)["error"]["kind"], "io");
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(heiskor(&["--help"]).status.code(), Some(0));
    assert_eq!(heiskor(&["--version"]).status.code(), Some(0));
    assert_eq!(heiskor(&["bound-scan", "--help"]).status.code(), Some(0));
}

#[test]
fn output_file_gets_sidecar() {
    let dir = std::env::temp_dir().join(format!("heiskor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("heis.json");
    let out = heiskor(&["heis-check", "--fuzz", "2000", "--seed", "42", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let main: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert!(main["data"]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(main["meta"]["seed"], 42);
    let meta: Value = serde_json::from_slice(&std::fs::read(dir.join("heis.json.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["status"], "ok");
    assert_eq!(meta["meta"]["version"], env!("CARGO_PKG_VERSION"));
    assert!(meta["runtime_seconds"].as_f64().unwrap() >= 0.0);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn every_command_runs_on_small_inputs() {
    for args in [
        &["bessel", "--nu", "1.25", "--x", "40", "--method", "verified"][..],
        &["bessel", "--nu", "-1", "--x", "2", "--function", "i"],
        &["fhat", "--s", "1.5", "--xi1", "1", "--xi2", "1", "--oracle"],
        &["tuck", "--s", "2.5", "--per-decade", "10"],
        &["heis-check", "--fuzz", "500"],
        &["sublevel", "--pairs", "2", "--samples", "100000"],
        &["project-dim", "--set", "segment", "--points", "5000", "--thetas", "4"],
        &["energy", "--s", "0.5", "--points", "100", "--metric", "parabolic"],
    ] {
        let out = heiskor(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(json_of(&out)["data"].is_object(), "{args:?}");
    }
}
