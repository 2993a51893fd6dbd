#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(name)
}

pub fn xduce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xduce")).args(args).output().expect("spawn xduce")
}

pub fn run(cmd: &str, config: &str, extra: &[&str]) -> Output {
    let path = fixture(config);
    let mut args = vec![cmd, "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    xduce(&args)
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Parses a one-record JSON-lines report.
pub fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).expect("json report")
}

pub fn field(v: &serde_json::Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("missing numeric field {key} in {v}"))
}
