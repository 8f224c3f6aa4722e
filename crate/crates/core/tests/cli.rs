use std::path::Path;

use dspectra_core::cli::{self, EXIT_COUNTEREXAMPLE, EXIT_FAILURE, EXIT_NO_CROSSING, EXIT_OK, EXIT_USAGE};
use dspectra_core::region::{read_outline_csv, RegionPM};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["dspectra"];
    full.extend_from_slice(args);
    let code = cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn pairs_counts() {
    let (code, out, _) = run(&["pairs", "--n", "5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("pairs=98") && out.contains("naive=840"), "{out}");
    let (code, out, _) = run(&["pairs", "--n", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("pairs=3") && out.contains("naive=4"), "{out}");
    let (code, _, err) = run(&["pairs", "--n", "1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--n"));
    assert_eq!(run(&["pairs", "--n", "11"]).0, EXIT_USAGE);
    assert_eq!(run(&["pairs"]).0, EXIT_USAGE);
}

#[test]
fn pairs_writes_census_files() {
    let dir = tempfile::tempdir().unwrap();
    let jsonl = dir.path().join("c.jsonl");
    assert_eq!(run(&["pairs", "--n", "4", "--out", path_str(&jsonl)]).0, EXIT_OK);
    let text = std::fs::read_to_string(&jsonl).unwrap();
    assert_eq!(text.lines().count(), 28);
    let recs = dspectra_core::permgroup::read_census_jsonl(text.as_bytes()).unwrap();
    assert_eq!(recs.len(), 28);
    let csv = dir.path().join("c.csv");
    assert_eq!(run(&["pairs", "--n", "4", "--format", "csv", "--out", path_str(&csv)]).0, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 29);
}

#[test]
fn scan_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.jsonl");
    let (code, out, _) = run(&["scan", "--n", "5", "--mesh", "15", "--out", path_str(&report)]);
    assert_eq!(code, EXIT_COUNTEREXAMPLE, "{out}");
    assert!(out.contains("reports=1"));
    assert_eq!(std::fs::read_to_string(&report).unwrap().lines().count(), 1);
    assert_eq!(run(&["scan", "--n", "4", "--mesh", "1001"]).0, EXIT_OK);
    assert_eq!(run(&["scan", "--n", "6", "--mesh", "1001"]).0, EXIT_OK);
    assert_eq!(run(&["scan", "--n", "5", "--mesh", "1"]).0, EXIT_USAGE);
}

#[test]
fn scan_points_and_formats() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("p.csv");
    let report = dir.path().join("r.csv");
    let (code, _, _) = run(&[
        "scan", "--n", "3", "--mesh", "5", "--format", "csv", "--points", path_str(&pts), "--out", path_str(&report),
    ]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&pts).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,w1,w2,re,im"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    // 8 classes, 5 mesh points, 2 eigenvalues each.
    assert_eq!(rows.len(), 8 * 5 * 2);
    assert!(rows.iter().all(|r| r.len() == 5 && (r[1] + r[2] - 1.0).abs() < 1e-15));
    assert_eq!(std::fs::read_to_string(&report).unwrap().lines().count(), 1);
}

#[test]
fn sampled_tuple_scan_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("t{i}.jsonl"));
            let pts = dir.path().join(format!("p{i}.csv"));
            let workers = (i + 1).to_string();
            let (code, _, _) = run(&[
                "scan", "--n", "5", "--tuple-order", "3", "--mesh", "10", "--samples", "300", "--seed", "9",
                "--workers", &workers, "--out", path_str(&out), "--points", path_str(&pts),
            ]);
            assert!(code == EXIT_OK || code == EXIT_COUNTEREXAMPLE);
            let mut bytes = std::fs::read(out).unwrap();
            bytes.extend(std::fs::read(pts).unwrap());
            bytes
        })
        .collect();
    assert_eq!(files[0], files[1]);
    let (code, _, err) = run(&["scan", "--n", "5", "--tuple-order", "3", "--samples", "10"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--seed"));
}

#[test]
fn checkpoint_mismatch_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.jsonl");
    assert_eq!(run(&["scan", "--n", "4", "--mesh", "101", "--checkpoint", path_str(&ck)]).0, EXIT_OK);
    // Same config resumes from a complete checkpoint.
    assert_eq!(run(&["scan", "--n", "4", "--mesh", "101", "--checkpoint", path_str(&ck)]).0, EXIT_OK);
    let (code, _, err) = run(&["scan", "--n", "4", "--mesh", "102", "--checkpoint", path_str(&ck)]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(err.contains("checkpoint"), "{err}");
}

#[test]
fn refine_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("i.json");
    let (code, text, _) = run(&["refine", "--n", "5", "(145)(23)", "(1425)", "--out", path_str(&out)]);
    assert_eq!(code, EXIT_OK);
    let nums: Vec<f64> = text.split_whitespace().map(|s| s.parse().unwrap()).collect();
    assert!((nums[0] - 0.4705275).abs() < 1e-5 && (nums[1] - 0.5490013).abs() < 1e-5, "{text}");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(json["classIndex"].is_u64());
    let (code, text, _) = run(&["refine", "--n", "5", "(12)(345)", "(1425)"]);
    assert_eq!(code, EXIT_NO_CROSSING);
    assert!(text.contains("no crossing"));
    assert_eq!(run(&["refine", "--n", "5", "(14", "(1425)"]).0, EXIT_USAGE);
    assert_eq!(run(&["refine", "--n", "5", "(145)(23)", "(1425)", "--tol", "1e-14"]).0, EXIT_USAGE);
}

fn class_of(out: &str) -> u64 {
    out.strip_prefix("class ").unwrap().split(':').next().unwrap().parse().unwrap()
}

#[test]
fn classify_examples() {
    let (code, a, _) = run(&["classify", "--n", "5", "(145)(23)", "(1425)"]);
    assert_eq!(code, EXIT_OK);
    let (_, b, _) = run(&["classify", "--n", "5", "(1425)", "(145)(23)"]);
    assert_eq!(class_of(&a), class_of(&b));
    // Same class as the exceptional pair.
    let (_, c, _) = run(&["classify", "--n", "5", "(34)(125)", "(1425)"]);
    assert_eq!(class_of(&a), class_of(&c));
    let (_, d, _) = run(&["classify", "--n", "5", "(25)(134)", "(1425)"]);
    let (_, e, _) = run(&["classify", "--n", "5", "(24)(153)", "(1425)"]);
    assert_eq!(class_of(&d), class_of(&e));
    assert_ne!(class_of(&a), class_of(&d));
    assert_eq!(run(&["classify", "--n", "5", "(16)", "(1425)"]).0, EXIT_USAGE);
    assert_eq!(run(&["classify", "--n", "5", "(1,2)(3,4)", "()"]).0, EXIT_OK);
}

#[test]
fn outline_files() {
    let (code, text, _) = run(&["outline", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(read_outline_csv(text.as_bytes()).unwrap().len(), 6);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    assert_eq!(run(&["outline", "--n", "5", "--out", path_str(&out)]).0, EXIT_OK);
    let rows = read_outline_csv(std::fs::read_to_string(&out).unwrap().as_bytes()).unwrap();
    let region = RegionPM::new(5).unwrap();
    assert_eq!(rows.len(), 15);
    for (k, j, z) in &rows {
        assert_eq!(*z, region.polygon(*k)[*j]);
    }
    let pentagon: Vec<_> = rows.iter().filter(|r| r.0 == 5).collect();
    for (_, j, z) in pentagon {
        let a = 2.0 * std::f64::consts::PI * *j as f64 / 5.0;
        assert!((z.re - a.cos()).abs() < 1e-15 && (z.im - a.sin()).abs() < 1e-15);
    }
    assert_eq!(run(&["outline", "--n", "1"]).0, EXIT_USAGE);
}

#[test]
fn hull_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.json");
    let (code, text, _) = run(&[
        "hull", "--group", "alternating", "--n", "4", "--tuple-order", "3", "--mesh", "12", "--out", path_str(&out),
    ]);
    assert_eq!(code, EXIT_OK, "{text}");
    assert!(text.contains("envelopeExcess="));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(json["maxEnvelopeExcess"].as_f64().unwrap() > 0.0);
    assert_eq!(run(&["hull", "--group", "dihedral", "--n", "4"]).0, EXIT_USAGE);
}

#[test]
fn help_and_bad_flags() {
    assert_eq!(run(&["--help"]).0, EXIT_OK);
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["scan", "--n", "4", "--workers", "0"]).0, EXIT_USAGE);
}
