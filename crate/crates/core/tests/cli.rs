//! End-to-end runs of the `hypspectrum` binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hypspectrum"));
    c.env("HYPSPECTRUM_THREADS", "1");
    c
}

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("run.toml");
    std::fs::write(&path, config).unwrap();
    bin().arg("--config").arg(&path).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = rows[0].iter().position(|h| h == name).unwrap();
    rows[1..].iter().map(|r| r[i].parse().unwrap()).collect()
}

fn significant_digits(cell: &str) -> usize {
    let mantissa = cell.split(['e', 'E']).next().unwrap();
    mantissa.chars().filter(char::is_ascii_digit).collect::<String>().trim_start_matches('0').len()
}

const PANTS: &str = r#"
bound = 1
classes = ["boundary 1", "seam 1-2", "self 1"]
metric = "dL"

[surface]
boundary = 3

[x]
boundary_lengths = [2.0, 2.0, 2.0]

[y]
boundary_lengths = [1.0, 1.0, 1.0]
"#;

const TORUS: &str = r#"
bound = 4
classes = ["slope 1/0", "slope 0/1", "boundary 1"]

[surface]
genus = 1
boundary = 1

[x]
curve_lengths = [1.5]
twists = [0.3]
boundary_lengths = [1.0]

[y]
curve_lengths = [1.5]
twists = [0.3]
boundary_lengths = [1.0]
"#;

#[test]
fn length_reports_pants_seam_and_cuff() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("len.csv");
    let o = run(dir.path(), PANTS, &["--out", out.to_str().unwrap(), "length"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = read_csv(&out);
    assert_eq!(rows[0], ["class", "kind", "word", "length"]);
    let l = column(&rows, "length");
    assert_eq!(l[0], 2.0);
    // cosh d = (cosh² 1 + cosh 1) / sinh² 1
    let c = 1f64.cosh();
    let seam = ((c * c + c) / (1f64.sinh().powi(2))).acosh();
    assert!((l[1] - seam).abs() < 1e-10, "{} vs {seam}", l[1]);
    assert!((l[1] - 1.704913).abs() < 1e-6);
}

#[test]
fn length_of_torus_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("len.csv");
    let o = run(dir.path(), TORUS, &["--out", out.to_str().unwrap(), "length"]);
    assert_eq!(o.status.code(), Some(0));
    let l = column(&read_csv(&out), "length");
    assert!((l[0] - 1.5).abs() < 1e-10);
    assert!((l[2] - 1.0).abs() < 1e-10);
}

#[test]
fn csv_cells_carry_twelve_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("len.csv");
    run(dir.path(), PANTS, &["--out", out.to_str().unwrap(), "length"]);
    let rows = read_csv(&out);
    assert_eq!(rows[2][3], "1.70491283236");
    assert_eq!(significant_digits(&rows[2][3]), 12);
}

#[test]
fn metric_on_pants_is_log_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = run(dir.path(), PANTS, &["--out", out.to_str().unwrap(), "metric"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = read_csv(&out);
    assert_eq!(rows[0], ["metric", "bound", "value", "exact", "slack", "family", "witness"]);
    let v = column(&rows, "value")[0];
    assert!((v - 2f64.ln()).abs() < 1e-11);
    assert_eq!(rows[1][3], "true");
}

#[test]
fn metric_vanishes_on_equal_structures() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["d", "dbar", "dL", "deltaL"] {
        let o = run(dir.path(), TORUS, &["metric", name]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let text = stdout(&o);
        assert!(text.starts_with(&format!("{name} = 0 ")), "{text}");
    }
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), TORUS, &["--bound", "2", "metric", "d"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("(bound 2,"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), PANTS, &["metric", "nope"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), "bound = 0\n", &["length"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), "colour = 1\n", &["length"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), "[x]\nboundary_lengths = [-1.0]\n", &["length"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), PANTS, &["experiment", "nope"]).status.code(), Some(2));
    assert_eq!(bin().arg("frobnicate").output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["--config", "/nonexistent.toml", "length"]).output().unwrap().status.code(), Some(2));
    let o = bin().env("HYPSPECTRUM_THREADS", "many").args(["metric", "d"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_check_exits_three_after_writing_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("arcs.csv");
    let cfg = "bound = 4\nseed = 7\n[experiment]\ngrid = 2\n";
    let o = run(dir.path(), cfg, &["--out", out.to_str().unwrap(), "experiment", "arcs-only"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(read_csv(&out).len(), 1 + 8);
}

#[test]
fn experiment_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "bound = 3\nseed = 11\n[experiment]\ngrid = 2\ncheck_bound = 4\n";
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let o = run(dir.path(), cfg, &["--out", a.to_str().unwrap(), "experiment", "thick-comparison"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    run(dir.path(), cfg, &["--out", b.to_str().unwrap(), "experiment", "thick-comparison"]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let gap = column(&read_csv(&a), "gap");
    assert!(gap.iter().all(|&g| g >= 0.0));
}

#[test]
fn pants_example_reports_seam_decay() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = run(dir.path(), "bound = 1\n", &["--out", out.to_str().unwrap(), "experiment", "pants-example"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_csv(&out);
    assert_eq!(rows.len(), 1 + 8);
    let d = column(&rows, "d_L");
    let t = column(&rows, "t");
    for (d, t) in d.iter().zip(&t) {
        assert!((d - t.ln()).abs() < 1e-10);
    }
}
