#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_hdcoint"))
}

pub fn run_in(dir: &Path, args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(bin());
    cmd.current_dir(dir).args(args).env_remove("HDCOINT_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

pub fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

/// Errors of `instance` against the named schema file.
pub fn schema_errors(schema: &str, instance: &serde_json::Value) -> Vec<String> {
    let text = std::fs::read_to_string(schema_dir().join(schema)).expect("schema file");
    let schema: serde_json::Value = serde_json::from_str(&text).expect("schema is JSON");
    let validator = jsonschema::validator_for(&schema).expect("valid schema");
    validator.iter_errors(instance).map(|e| e.to_string()).collect()
}

/// Random-walk panel written as CSV with a header; deterministic in `seed`.
pub fn write_panel(path: &Path, p: usize, rows: usize, seed: u64) {
    use hdcoint::mc::{gen_panel, substream};
    use hdcoint::DgpSpec;
    let panel = gen_panel(DgpSpec::RandomWalk, p, rows - 1, &mut substream(seed, 0)).unwrap();
    let x = panel.levels();
    let mut s = (1..=p).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",");
    s.push('\n');
    for t in 0..rows {
        let row: Vec<String> = (0..p).map(|i| format!("{}", x[(i, t)])).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    std::fs::write(path, s).unwrap();
}

/// Every subcommand with file outputs, as used by the replay checks. Paths
/// are relative to the working directory; `data.csv` must exist there.
pub const INVOCATIONS: &[&[&str]] = &[
    &["analyze", "data.csv", "--det", "const", "--out", "report.json", "--qq", "plot.svg", "--envelope", "--reps", "60", "--seed", "3"],
    &["analyze", "data.csv", "--det", "rtrend", "--r", "1", "--out", "report_trend.json"],
    &["simulate", "--p", "5", "--T", "40", "--reps", "80", "--dgp", "rwc", "--det", "const", "--seed", "11", "--out", "mc.json"],
    &["simulate", "--p", "4", "--T", "30", "--reps", "50", "--dgp", "ar1", "--rho", "0.5", "--format", "csv", "--out", "mc.csv"],
    &["dist", "--c", "0.2,0.5,0.8", "--quantiles", "0.05..0.95", "--out", "dist.json"],
    &["dist", "--gamma1", "0.3", "--gamma2", "0.6", "--format", "csv", "--out", "dist.csv"],
    &["centers", "--c", "0.01..0.49:0.01", "--out", "centers.json"],
    &["centers", "--p", "10", "--T", "100", "--format", "csv", "--out", "centers.csv"],
    &["qq", "data.csv", "--out", "qq.csv", "--envelope", "--reps", "40"],
    &["qq", "--p", "20", "--T", "200", "--dgp", "mixed", "--white-noise", "3", "--out", "mixed.svg"],
];

/// Runs every invocation in a fresh directory and returns the produced
/// files, sorted by name.
pub fn replay(envs: &[(&str, &str)]) -> Vec<(String, Vec<u8>)> {
    let dir = tempfile::tempdir().unwrap();
    write_panel(&dir.path().join("data.csv"), 6, 80, 42);
    for args in INVOCATIONS {
        let out = run_in(dir.path(), args, envs);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap())
        .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap()))
        .collect();
    files.sort();
    files
}
