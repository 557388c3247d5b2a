//! End-to-end tests of the command-line binary: exit codes, schema
//! rejection, deterministic output, and the physical content of the
//! emitted tables.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_svanish"))
}

fn write_structure(dir: &std::path::Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn bare_sphere_json() -> &'static str {
    r#"{
  "schema": "svanish-structure/1",
  "radii": [2.0, 1.0],
  "mu": [1.0],
  "eps": [1.0],
  "background": {"mu": 1.0, "eps": 1.0}
}
"#
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("svanish-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn schema_violation_exits_2_and_names_the_field() {
    let dir = tempdir("schema");
    let bad = write_structure(
        &dir,
        "bad.json",
        &bare_sphere_json().replace("svanish-structure/1", "svanish-structure/3"),
    );
    let out = run(&["wcoef", "--structure", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`schema`"), "stderr: {err}");

    let missing = dir.join("does-not-exist.json");
    let out = run(&["wcoef", "--structure", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Usage errors from the argument parser also exit 2.
    let out = run(&["wcoef"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempdir("determinism");
    let s = write_structure(&dir, "s.json", bare_sphere_json());
    let args = [
        "wcoef",
        "--structure",
        s.to_str().unwrap(),
        "--nmax",
        "2",
        "--tcount",
        "12",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());

    let d1 = run(&[
        "design",
        "--structure",
        s.to_str().unwrap(),
        "--order",
        "1",
    ]);
    let d2 = run(&[
        "design",
        "--structure",
        s.to_str().unwrap(),
        "--order",
        "1",
    ]);
    assert_eq!(d1.status.code(), Some(0));
    assert_eq!(d1.stdout, d2.stdout);
}

#[test]
fn wcoef_magnitudes_grow_with_the_leading_power() {
    let dir = tempdir("wcoef");
    let s = write_structure(&dir, "s.json", bare_sphere_json());
    let out = run(&[
        "wcoef",
        "--structure",
        s.to_str().unwrap(),
        "--nmax",
        "2",
        "--tmin",
        "1e-3",
        "--tmax",
        "1e-2",
        "--tcount",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut per_mode: std::collections::BTreeMap<(usize, String), Vec<(f64, f64)>> =
        Default::default();
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let t: f64 = cells[0].parse().unwrap();
        let n: usize = cells[1].parse().unwrap();
        let pol = cells[2].to_string();
        let abs_w: f64 = cells[5].parse().unwrap();
        per_mode.entry((n, pol)).or_default().push((t, abs_w));
    }
    assert_eq!(per_mode.len(), 4);
    for ((n, pol), pts) in per_mode {
        // Monotone growth in t at low frequency.
        for w in pts.windows(2) {
            assert!(w[1].1 > w[0].1, "n={n} {pol}: |W| not monotone");
        }
        // Log-log slope of t |W| equals 2n+1 (the extra t removes the
        // 1/k_0 prefactor of W).
        let first = pts.first().unwrap();
        let last = pts.last().unwrap();
        let slope = ((last.0 * last.1).ln() - (first.0 * first.1).ln())
            / (last.0.ln() - first.0.ln());
        let want = (2 * n + 1) as f64;
        assert!(
            (slope - want).abs() <= 0.05,
            "n={n} {pol}: slope {slope} vs {want}"
        );
    }
}

#[test]
fn lowfreq_json_is_a_valid_versioned_document() {
    let dir = tempdir("lowfreq");
    let s = write_structure(&dir, "s.json", bare_sphere_json());
    let out = run(&[
        "lowfreq",
        "--structure",
        s.to_str().unwrap(),
        "--order",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["schema"], "svanish-coeffs/1");
    assert_eq!(doc["entries"].as_array().unwrap().len(), 6);
}

#[test]
fn nonstandard_frame_warns_on_stderr() {
    let dir = tempdir("frame");
    let s = write_structure(
        &dir,
        "wide.json",
        &bare_sphere_json().replace("[2.0, 1.0]", "[3.0, 1.0]"),
    );
    let out = run(&[
        "wcoef",
        "--structure",
        s.to_str().unwrap(),
        "--tcount",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("warning"), "stderr: {err}");
}

#[test]
fn cloak_map_writes_csv_and_sidecar() {
    let dir = tempdir("cloak");
    let s = write_structure(&dir, "s.json", bare_sphere_json());
    let csv_path = dir.join("cloak.csv");
    let out = run(&[
        "cloak-map",
        "--structure",
        s.to_str().unwrap(),
        "--rho",
        "0.25",
        "--tcount",
        "6",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("x1,x2,x3,mu11,"));
    assert_eq!(csv.lines().count(), 1 + 6 * 3);
    let sidecar: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("cloak.csv.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(sidecar["rho"], 0.25);
    assert_eq!(sidecar["structure_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn verify_exits_zero_on_a_fresh_build() {
    let out = run(&["verify"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(
        out.status.code(),
        Some(0),
        "verify failed; output:\n{text}\nstderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(text.lines().count(), 10);
    for i in 1..=10 {
        assert!(
            text.contains(&format!("criterion {i:>2} ")),
            "missing line for criterion {i}:\n{text}"
        );
    }
}
