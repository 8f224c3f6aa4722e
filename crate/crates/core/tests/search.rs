use dspectra_core::permgroup::{inequivalent_pairs, parse_cycles, Permutation};
use dspectra_core::region::RegionPM;
use dspectra_core::search::{
    refine_crossing, scan_census, scan_census_with, scan_tuples_with, BranchHint, Sampling, ScanOptions, Subgroup,
};
use dspectra_core::spectra::{deflate, ConvexCombo, ScanConfig, Scanner};
use dspectra_core::Error;

fn perm(s: &str, n: usize) -> Permutation {
    parse_cycles(s, n).unwrap()
}

fn to_lines<T: serde::Serialize>(items: &[T]) -> Vec<String> {
    items.iter().map(|r| serde_json::to_string(r).unwrap()).collect()
}

#[test]
fn n5_coarse_mesh_has_single_exceptional_report() {
    let census = inequivalent_pairs(5).unwrap();
    let reports = scan_census(&census, &ScanConfig::pairs(15).unwrap()).unwrap();
    assert_eq!(reports.len(), 1);
    let r = &reports[0];
    let gens = r.generator_perms(5).unwrap();
    let expected = census
        .classify(&perm("(145)(23)", 5), &perm("(1425)", 5))
        .unwrap();
    assert_eq!(r.class_index, expected);
    assert_eq!(census.classify(&gens[0], &gens[1]).unwrap(), expected);
    assert!(r.violating_weights.iter().all(|w| w[0] > 0.4 && w[0] < 0.6));
}

#[test]
fn witnesses_recompute() {
    let region = RegionPM::new(5).unwrap();
    let census = inequivalent_pairs(5).unwrap();
    for m in [15, 101, 1001] {
        for r in scan_census(&census, &ScanConfig::pairs(m).unwrap()).unwrap() {
            let (z, d) = r.recompute_witness(&region).unwrap();
            assert!((z - r.witness.value).norm() < 1e-9);
            assert!(d > 0.0 && (d - r.max_violation).abs() < 1e-9);
        }
    }
}

#[test]
fn interrupted_scan_resumes_to_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let census = inequivalent_pairs(5).unwrap();
    let cfg = ScanConfig::pairs(41).unwrap();
    let reference = scan_census_with(&census, &cfg, &ScanOptions { workers: Some(1), ..Default::default() }).unwrap();
    assert!(reference.is_complete());

    let ck = dir.path().join("ck.jsonl");
    let opts = |max_chunks| ScanOptions {
        workers: Some(2),
        checkpoint: Some(ck.clone()),
        chunk_size: 7,
        max_chunks,
    };
    let first = scan_census_with(&census, &cfg, &opts(Some(3))).unwrap();
    assert!(!first.is_complete());
    assert_eq!(first.units_done, 21);
    // A torn trailing line is discarded on resume.
    let mut text = std::fs::read_to_string(&ck).unwrap();
    text.push_str("{\"chunk\":9,\"rep");
    std::fs::write(&ck, text).unwrap();
    let second = scan_census_with(&census, &cfg, &opts(Some(4))).unwrap();
    assert_eq!(second.units_done, 49);
    let done = scan_census_with(&census, &cfg, &opts(None)).unwrap();
    assert!(done.is_complete());
    assert_eq!(to_lines(&done.reports), to_lines(&reference.reports));
}

#[test]
fn checkpoint_for_other_config_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let census = inequivalent_pairs(4).unwrap();
    let ck = dir.path().join("ck.jsonl");
    let opts = ScanOptions {
        checkpoint: Some(ck),
        chunk_size: 4,
        ..Default::default()
    };
    scan_census_with(&census, &ScanConfig::pairs(21).unwrap(), &opts).unwrap();
    let err = scan_census_with(&census, &ScanConfig::pairs(22).unwrap(), &opts).unwrap_err();
    assert!(matches!(err, Error::CheckpointMismatch { .. }), "{err}");
}

#[test]
fn refined_interval_brackets_the_crossing() {
    let region = RegionPM::new(5).unwrap();
    let (s, t) = (perm("(145)(23)", 5), perm("(1425)", 5));
    let tol = 1e-9;
    let iv = refine_crossing(&s, &t, BranchHint::MaxViolation, tol).unwrap();
    assert!(iv.t_high - iv.t_low > 0.07);
    assert!((iv.t_low - 0.4705275).abs() < 1e-5 && (iv.t_high - 0.5490013).abs() < 1e-5);
    let max_dist = |w: f64| {
        let mut scanner = Scanner::new();
        scanner
            .eigenvalues_at(&[s.clone(), t.clone()], &[w, 1.0 - w])
            .unwrap()
            .iter()
            .map(|&z| region.signed_distance(z))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    assert!(max_dist(iv.t_low - 10.0 * tol) < 0.0);
    assert!(max_dist(iv.t_high + 10.0 * tol) < 0.0);
    assert!(max_dist(iv.t_low + 10.0 * tol) > 0.0);
    assert!(max_dist(iv.t_high - 10.0 * tol) > 0.0);
    assert!(max_dist(0.5 * (iv.t_low + iv.t_high)) > 0.0);
}

#[test]
fn deflation_is_linear_in_the_weights() {
    let n = 6;
    let perms = [perm("(123456)", n), perm("(12)(34)", n), perm("(135)", n)];
    let weights = [0.2, 0.5, 0.3];
    let combo = ConvexCombo::new(weights.iter().copied().zip(perms.iter().cloned()).collect()).unwrap();
    let whole = deflate(&combo).unwrap();
    let mut sum = dspectra_core::spectra::DenseMatrix::zeros(n - 1);
    for (w, p) in weights.iter().zip(&perms) {
        sum.axpy(*w, deflate(&ConvexCombo::single(p.clone())).unwrap().matrix());
    }
    assert!(whole.matrix().max_abs_diff(&sum) < 1e-14);
}

#[test]
fn sampled_triples_in_degree_six_stay_inside() {
    let cfg = ScanConfig::new(30, 3).unwrap();
    let sampling = Sampling::Random { count: 100_000, seed: 1 };
    let outcome = scan_tuples_with(Subgroup::Symmetric, 6, &cfg, sampling, &ScanOptions::default()).unwrap();
    assert!(outcome.is_complete());
    assert!(outcome.reports.is_empty(), "{:?}", outcome.max_violation());
}

#[test]
fn tuple_scans_do_not_exceed_pair_violation() {
    let census = inequivalent_pairs(5).unwrap();
    let pair_max = scan_census(&census, &ScanConfig::pairs(10001).unwrap())
        .unwrap()
        .iter()
        .map(|r| r.max_violation)
        .fold(0.0, f64::max);
    for k in [3, 4] {
        let cfg = ScanConfig::new(20, k).unwrap();
        let sampling = Sampling::Random { count: 2000, seed: 7 };
        let outcome = scan_tuples_with(Subgroup::Symmetric, 5, &cfg, sampling, &ScanOptions::default()).unwrap();
        if let Some(m) = outcome.max_violation() {
            assert!(m <= pair_max + 1e-9, "k={k}: {m} > {pair_max}");
        }
    }
}
