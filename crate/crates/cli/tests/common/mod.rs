#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn sasinfo_in(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_sasinfo"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn sasinfo(args: &[&str]) -> Run {
    let dir = tempfile::tempdir().unwrap();
    sasinfo_in(dir.path(), args)
}

/// Header and rows of a delimited table; empty cells become `None`.
pub fn parse_table(text: &str, sep: char) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut lines = text.lines();
    let header = lines.next().expect("header").split(sep).map(str::to_string).collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(sep).map(|c| c.parse().ok()).collect())
        .collect();
    (header, rows)
}

pub fn column(text: &str, sep: char, name: &str) -> Vec<Option<f64>> {
    let (header, rows) = parse_table(text, sep);
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.into_iter().map(|r| r[i]).collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
