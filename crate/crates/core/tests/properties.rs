use std::sync::OnceLock;

use dspectra_core::permgroup::{inequivalent_pairs, PairCensus, Permutation};
use dspectra_core::region::RegionPM;
use dspectra_core::spectra::{combo_matrix, deflate, eigenvalues, scan_pair, ConvexCombo, ScanConfig};
use proptest::prelude::*;

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(&v).unwrap())
}

fn census6() -> &'static PairCensus {
    static C: OnceLock<PairCensus> = OnceLock::new();
    C.get_or_init(|| inequivalent_pairs(6).unwrap())
}

fn sorted(mut v: Vec<num_complex::Complex64>) -> Vec<num_complex::Complex64> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn combos_are_doubly_stochastic(a in perm_strategy(6), b in perm_strategy(6), c in perm_strategy(6), w in 0.0f64..1.0, v in 0.0f64..1.0) {
        let w2 = (1.0 - w) * v;
        let combo = ConvexCombo::new(vec![(w, a), (w2, b), (1.0 - w - w2, c)]).unwrap();
        let m = combo_matrix(&combo);
        for i in 0..6 {
            let row: f64 = (0..6).map(|j| m[(i, j)]).sum();
            let col: f64 = (0..6).map(|j| m[(j, i)]).sum();
            prop_assert!((row - 1.0).abs() < 1e-14 && (col - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn deflated_spectrum_lies_in_pm(a in perm_strategy(7), b in perm_strategy(7), t in 0.0f64..=1.0) {
        let region = RegionPM::new(7).unwrap();
        let combo = ConvexCombo::pair(a, b, t).unwrap();
        let d = deflate(&combo).unwrap();
        let full = sorted(eigenvalues(&combo_matrix(&combo)).unwrap());
        let mut part = eigenvalues(d.matrix()).unwrap();
        for z in &part {
            prop_assert!(z.norm() <= 1.0 + 1e-9);
            prop_assert!(region.signed_distance(*z) < 1e-6);
        }
        part.push(num_complex::Complex64::new(1.0, 0.0));
        let part = sorted(part);
        // Modulus-sum check avoids pairing issues at repeated roots.
        let fs: f64 = full.iter().map(|z| z.re).sum();
        let ps: f64 = part.iter().map(|z| z.re).sum();
        prop_assert!((fs - ps).abs() < 1e-9);
    }

    #[test]
    fn pair_spectra_are_similarity_invariant(a in perm_strategy(5), b in perm_strategy(5), g in perm_strategy(5)) {
        let cfg = ScanConfig::pairs(9).unwrap();
        let base = scan_pair(&a, &b, &cfg).unwrap();
        let conj = scan_pair(&a.conjugate(&g).unwrap(), &b.conjugate(&g).unwrap(), &cfg).unwrap();
        for j in 0..9 {
            let pick = |pts: &[dspectra_core::spectra::EigenPoint]| {
                let t = j as f64 / 8.0;
                sorted(pts.iter().filter(|p| (p.weights[0] - t).abs() < 1e-15).map(|p| p.value).collect())
            };
            let (x, y) = (pick(&base), pick(&conj));
            prop_assert_eq!(x.len(), y.len());
            // Match greedily: each value in x has a partner in y.
            for z in &x {
                prop_assert!(y.iter().any(|w| (z - w).norm() < 1e-6));
            }
        }
    }

    #[test]
    fn classify_is_invariant(a in perm_strategy(6), b in perm_strategy(6), g in perm_strategy(6)) {
        let census = census6();
        let idx = census.classify(&a, &b).unwrap();
        prop_assert_eq!(census.classify(&b, &a).unwrap(), idx);
        prop_assert_eq!(census.classify(&a.conjugate(&g).unwrap(), &b.conjugate(&g).unwrap()).unwrap(), idx);
    }
}
