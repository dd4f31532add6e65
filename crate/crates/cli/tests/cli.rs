//! Behavior of the binary: exit codes, configuration overlay, output shape.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scw-repeater"))
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scw-cli-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn usage_errors_exit_one() {
    let status = bin().arg("fig").arg("bogus").output().unwrap();
    assert_eq!(status.status.code(), Some(1));
    let status = bin().args(["fig", "link-probs", "--a", "nope"]).output().unwrap();
    assert_eq!(status.status.code(), Some(1));
    let status = bin().arg("--help").output().unwrap();
    assert_eq!(status.status.code(), Some(0));
}

#[test]
fn link_probs_balanced_tap_row() {
    let dir = workdir("balanced");
    let out = bin()
        .args(["fig", "link-probs", "--r-bs", "0.5", "--a", "1.0", "--pair", "odd-odd"])
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = read(&dir.join("link-probs.csv"));
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 2, "{text}");
    assert!(data[0].contains("p_minus (probability)"));
    let fields: Vec<&str> = data[1].split(',').collect();
    assert_eq!(fields[2], "odd-odd");
    assert_eq!(fields[3].parse::<f64>().unwrap(), 0.25);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn json_mirrors_csv_schema() {
    let dir = workdir("json");
    for format in ["csv", "json"] {
        let out = bin()
            .args(["fig", "click-probs", "--a", "0.5,1.5", "--format", format])
            .arg("--out-dir")
            .arg(&dir)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let csv = read(&dir.join("click-probs.csv"));
    let json: serde_json::Value = serde_json::from_str(&read(&dir.join("click-probs.json"))).unwrap();
    let columns = json["columns"].as_array().unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header.split(',').count(), columns.len());
    assert_eq!(json["rows"].as_array().unwrap().len(), 4);
    for row in json["rows"].as_array().unwrap() {
        for cell in &row.as_slice()[3..] {
            let p = cell.as_f64().unwrap();
            assert!((0.0..=1.0).contains(&p), "{p}");
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
}

trait Slice {
    fn as_slice(&self) -> &[serde_json::Value];
}

impl Slice for serde_json::Value {
    fn as_slice(&self) -> &[serde_json::Value] {
        self.as_array().unwrap().as_slice()
    }
}

#[test]
fn config_file_overlay_and_flag_precedence() {
    let dir = workdir("config");
    let config = dir.join("run.json");
    std::fs::write(
        &config,
        r#"{"a": "1.0", "r_bs": 0.5, "pair": "cross", "name": "from-config"}"#,
    )
    .unwrap();
    let out = bin()
        .args(["fig", "link-probs"])
        .arg("--config")
        .arg(&config)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = read(&dir.join("from-config.csv"));
    let row = text.lines().last().unwrap();
    assert!(row.contains("cross"), "{row}");

    // a flag overrides the same field in the config file
    let out = bin()
        .args(["fig", "link-probs", "--pair", "even-even", "--name", "override"])
        .arg("--config")
        .arg(&config)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = read(&dir.join("override.csv"));
    assert!(text.lines().last().unwrap().contains("even-even"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn env_var_sets_default_output_directory() {
    let dir = workdir("env");
    let out = bin()
        .args(["fig", "teleport"])
        .env("SCW_REPEATER_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = read(&dir.join("teleport.csv"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 17);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn rejects_bad_config_file() {
    let dir = workdir("badconfig");
    let config = dir.join("bad.json");
    std::fs::write(&config, r#"{"unknown_field": 1}"#).unwrap();
    let out = bin()
        .args(["fig", "link-probs"])
        .arg("--config")
        .arg(&config)
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn timing_alias_and_millisecond_column() {
    let dir = workdir("timing");
    let out = bin()
        .args([
            "fig", "timing", "--L", "50", "--kappa", "0.2", "--xi", "0.9", "--r-bs", "0.2",
            "--a", "0.01",
        ])
        .arg("--out-dir")
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = read(&dir.join("timing.csv"));
    let row = text.lines().last().unwrap();
    let t_wait_ms: f64 = row.split(',').last().unwrap().parse().unwrap();
    assert!((1.0..100.0).contains(&t_wait_ms), "t_wait_ms = {t_wait_ms}");
    let _ = std::fs::remove_dir_all(&dir);
}
