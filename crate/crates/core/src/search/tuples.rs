use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permgroup::{all_permutations, canonical_cycle_form, cycle_types, format_cycles, Permutation};
use crate::region::RegionPM;
use crate::spectra::{ScanConfig, Scanner, SourceId};

use super::driver::{run_chunked, ScanOptions, ScanOutcome};
use super::report::{CrossingReport, ReportBuilder};

/// Largest degree for which group elements are enumerated.
pub const MAX_TUPLE_DEGREE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Subgroup {
    Symmetric,
    Alternating,
}

impl std::str::FromStr for Subgroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "symmetric" | "s" | "sym" => Ok(Self::Symmetric),
            "alternating" | "a" | "alt" => Ok(Self::Alternating),
            _ => Err(Error::InvalidConfig(format!("unsupported subgroup {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Sampling {
    /// First element a canonical cycle form, the rest a strictly increasing
    /// run of group elements.
    Exhaustive,
    Random { count: u64, seed: u64 },
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// The k-tuples of a permutation group scanned for one experiment.
#[derive(Clone, Debug)]
pub struct TupleSpace {
    n: usize,
    k: usize,
    firsts: Vec<Permutation>,
    elements: Vec<Permutation>,
    sampling: Sampling,
}

impl TupleSpace {
    pub fn new(group: Subgroup, n: usize, k: usize, sampling: Sampling) -> Result<Self> {
        if !(2..=MAX_TUPLE_DEGREE).contains(&n) {
            return Err(Error::UnsupportedDegree {
                n,
                reason: "tuple scans enumerate group elements, so 2 <= n <= 8",
            });
        }
        if k < 2 {
            return Err(Error::InvalidConfig(format!("tuple order {k} < 2")));
        }
        let keep = |p: &Permutation| group == Subgroup::Symmetric || p.is_even();
        let firsts = cycle_types(n)
            .iter()
            .filter(|t| group == Subgroup::Symmetric || t.is_even())
            .map(canonical_cycle_form)
            .collect();
        let elements: Vec<_> = all_permutations(n).filter(keep).collect();
        if elements.len() < k - 1 {
            return Err(Error::InvalidConfig(format!(
                "group of order {} has no {}-subsets",
                elements.len(),
                k - 1
            )));
        }
        Ok(Self {
            n,
            k,
            firsts,
            elements,
            sampling,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn len(&self) -> u64 {
        match self.sampling {
            Sampling::Exhaustive => {
                let rest = binomial(self.elements.len() as u128, (self.k - 1) as u128);
                u64::try_from(rest * self.firsts.len() as u128).unwrap_or(u64::MAX)
            }
            Sampling::Random { count, .. } => count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The `index`-th tuple.
    pub fn tuple(&self, index: u64) -> Vec<Permutation> {
        let mut out = Vec::with_capacity(self.k);
        match self.sampling {
            Sampling::Exhaustive => {
                let per = binomial(self.elements.len() as u128, (self.k - 1) as u128);
                let idx = index as u128;
                out.push(self.firsts[(idx / per) as usize]);
                let mut r = idx % per;
                let total = self.elements.len();
                let mut c = 0;
                for slot in 0..self.k - 1 {
                    let left = (self.k - 2 - slot) as u128;
                    loop {
                        let cnt = binomial((total - c - 1) as u128, left);
                        if r < cnt {
                            break;
                        }
                        r -= cnt;
                        c += 1;
                    }
                    out.push(self.elements[c]);
                    c += 1;
                }
            }
            Sampling::Random { seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(index);
                out.push(self.firsts[rng.random_range(0..self.firsts.len())]);
                let mut picks: Vec<usize> = Vec::with_capacity(self.k - 1);
                while picks.len() < self.k - 1 {
                    let c = rng.random_range(0..self.elements.len());
                    if !picks.contains(&c) {
                        picks.push(c);
                    }
                }
                picks.sort_unstable();
                out.extend(picks.into_iter().map(|c| self.elements[c]));
            }
        }
        out
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TupleScanKey<'a> {
    kind: &'static str,
    group: Subgroup,
    n: usize,
    sampling: Sampling,
    scan: &'a ScanConfig,
}

/// Scans the weight grid of one tuple for eigenvalues outside `PM_n`.
pub fn scan_tuple_exterior(
    scanner: &mut Scanner,
    region: &RegionPM,
    perms: &[Permutation],
    cfg: &ScanConfig,
    source: SourceId,
) -> Result<Option<CrossingReport>> {
    let m = cfg.mesh_size();
    let mut builder = ReportBuilder::new();
    let mut exterior: Vec<(Complex64, f64)> = Vec::new();
    let mut weights = vec![0.0; perms.len()];
    let index = match source {
        SourceId::Class(c) | SourceId::Tuple(c) => c,
        SourceId::Unspecified => 0,
    };
    scanner.for_each_tuple(perms, m, cfg.filter(), |comp, vals| {
        exterior.clear();
        exterior.extend(vals.iter().filter_map(|&z| region.exterior_distance(z).map(|d| (z, d))));
        if !exterior.is_empty() {
            for (w, &a) in weights.iter_mut().zip(comp) {
                *w = a as f64 / m as f64;
            }
            builder.record(&weights, &exterior, || {
                (index, perms.len(), perms.iter().map(format_cycles).collect())
            });
        }
        Ok(())
    })?;
    Ok(builder.finish(source))
}

/// Scans k-tuples of `S_n` for eigenvalues outside `PM_n`.
pub fn scan_tuples(n: usize, cfg: &ScanConfig, sampling: Sampling) -> Result<Vec<CrossingReport>> {
    Ok(scan_tuples_with(Subgroup::Symmetric, n, cfg, sampling, &ScanOptions::default())?.reports)
}

pub fn scan_tuples_with(
    group: Subgroup,
    n: usize,
    cfg: &ScanConfig,
    sampling: Sampling,
    opts: &ScanOptions,
) -> Result<ScanOutcome> {
    let space = TupleSpace::new(group, n, cfg.tuple_order(), sampling)?;
    let region = RegionPM::new(n)?;
    let key = TupleScanKey {
        kind: "tuples",
        group,
        n,
        sampling,
        scan: cfg,
    };
    run_chunked(space.len(), &key, opts, |scanner, i| {
        let perms = space.tuple(i);
        scan_tuple_exterior(scanner, &region, &perms, cfg, SourceId::Tuple(i)).map_err(|e| Error::ClassFailed {
            class_index: i,
            source: Box::new(e),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_space_is_complete_and_increasing() {
        let space = TupleSpace::new(Subgroup::Symmetric, 4, 3, Sampling::Exhaustive).unwrap();
        assert_eq!(space.len(), 5 * 276);
        let mut seen = std::collections::HashSet::new();
        for i in 0..space.len() {
            let t = space.tuple(i);
            assert_eq!(t.len(), 3);
            assert!(t[1] < t[2]);
            assert!(seen.insert(t));
        }
    }

    #[test]
    fn alternating_space() {
        let space = TupleSpace::new(Subgroup::Alternating, 4, 3, Sampling::Exhaustive).unwrap();
        assert_eq!(space.elements().len(), 12);
        assert_eq!(space.len(), 3 * 66);
        assert!((0..space.len()).all(|i| space.tuple(i).iter().all(Permutation::is_even)));
    }

    #[test]
    fn random_space_is_reproducible() {
        let a = TupleSpace::new(Subgroup::Symmetric, 6, 3, Sampling::Random { count: 50, seed: 7 }).unwrap();
        let b = TupleSpace::new(Subgroup::Symmetric, 6, 3, Sampling::Random { count: 50, seed: 7 }).unwrap();
        assert_eq!(a.len(), 50);
        for i in 0..50 {
            let t = a.tuple(i);
            assert_eq!(t, b.tuple(i));
            assert!(t[1] < t[2]);
        }
        assert!("alternating".parse::<Subgroup>().is_ok());
        assert!("dihedral".parse::<Subgroup>().is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(120, 2), 7140);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }
}
