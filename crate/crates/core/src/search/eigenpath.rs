use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permgroup::{check_degrees, Permutation};
use crate::region::RegionPM;
use crate::spectra::Scanner;

/// Total-cost gap below which two matchings count as tied.
pub const AMBIGUITY_TOL: f64 = 1e-12;

const FORBIDDEN: f64 = 1e100;

/// Minimum-cost perfect matching on a square cost matrix. Returns
/// `assign[row] = col` and the total cost.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    // Potentials formulation, 1-based with a virtual column 0.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            if j1 == 0 {
                // Only infinite costs remain.
                break;
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![usize::MAX; n];
    for j in 1..=n {
        if p[j] > 0 {
            assign[p[j] - 1] = j - 1;
        }
    }
    let total = assign
        .iter()
        .enumerate()
        .map(|(i, &j)| if j == usize::MAX { f64::INFINITY } else { cost[i][j] })
        .sum();
    (assign, total)
}

/// Optimal matching plus whether some other matching is within `tol`.
fn match_slices(prev: &[Complex64], next: &[Complex64], tol: f64) -> (Vec<usize>, bool) {
    let cost: Vec<Vec<f64>> = prev
        .iter()
        .map(|a| next.iter().map(|b| (a - b).norm()).collect())
        .collect();
    let (assign, best) = min_cost_assignment(&cost);
    // The runner-up differs from the optimum in at least one edge.
    let ambiguous = assign.len() > 1
        && (0..assign.len()).any(|i| {
            let mut c = cost.clone();
            c[i][assign[i]] = FORBIDDEN;
            let (_, alt) = min_cost_assignment(&c);
            alt - best <= tol
        });
    (assign, ambiguous)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EigenPaths {
    pub t: Vec<f64>,
    /// `branches[b][s]` is branch `b` at `t[s]`.
    pub branches: Vec<Vec<Complex64>>,
    /// Slices `s` whose matching to `s - 1` was tied.
    pub ambiguous: Vec<usize>,
}

impl EigenPaths {
    pub fn branch(&self, b: usize) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.t.iter().copied().zip(self.branches[b].iter().copied())
    }
}

/// Follows each eigenvalue of `t·σ + (1 - t)·τ` across `t_grid` by optimal
/// matching of consecutive slices.
pub fn track_eigenpath(sigma: &Permutation, tau: &Permutation, t_grid: &[f64]) -> Result<EigenPaths> {
    check_degrees(sigma, tau)?;
    if t_grid.is_empty() {
        return Err(Error::InvalidConfig("empty t grid".into()));
    }
    if t_grid.windows(2).any(|w| w[0] > w[1]) || t_grid.iter().any(|t| !(0.0..=1.0).contains(t)) {
        return Err(Error::InvalidConfig("t grid must be sorted within [0, 1]".into()));
    }
    let perms = [*sigma, *tau];
    let mut scanner = Scanner::new();
    let first = scanner.eigenvalues_at(&perms, &[t_grid[0], 1.0 - t_grid[0]])?.to_vec();
    let mut branches: Vec<Vec<Complex64>> = first.iter().map(|&z| vec![z]).collect();
    let mut ambiguous = Vec::new();
    let mut prev = first;
    for (s, &t) in t_grid.iter().enumerate().skip(1) {
        let next = scanner.eigenvalues_at(&perms, &[t, 1.0 - t])?;
        let (assign, tied) = match_slices(&prev, next, AMBIGUITY_TOL);
        if tied {
            ambiguous.push(s);
        }
        for (b, &j) in assign.iter().enumerate() {
            branches[b].push(next[j]);
            prev[b] = next[j];
        }
    }
    Ok(EigenPaths {
        t: t_grid.to_vec(),
        branches,
        ambiguous,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BranchHint {
    /// The branch reaching farthest outside `PM_n`.
    MaxViolation,
    Index(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RefinedInterval {
    pub class_index: Option<u64>,
    pub t_low: f64,
    pub t_high: f64,
    pub tolerance: f64,
    pub branch: usize,
    /// Largest signed distance seen on the coarse grid.
    pub max_violation: f64,
}

/// Coarse grid used to bracket crossings before bisection.
pub const REFINE_GRID: usize = 2001;

/// Brackets the exterior stretch of one eigenpath on a coarse grid and
/// bisects both ends of it down to `tol`.
pub fn refine_crossing(sigma: &Permutation, tau: &Permutation, hint: BranchHint, tol: f64) -> Result<RefinedInterval> {
    if !(tol >= 1e-12) {
        return Err(Error::InvalidConfig(format!("tolerance {tol} below 1e-12")));
    }
    let region = RegionPM::new(sigma.degree())?;
    let grid: Vec<f64> = (0..REFINE_GRID).map(|j| j as f64 / (REFINE_GRID - 1) as f64).collect();
    let paths = track_eigenpath(sigma, tau, &grid)?;
    let g: Vec<Vec<f64>> = paths
        .branches
        .iter()
        .map(|br| br.iter().map(|&z| region.signed_distance(z)).collect())
        .collect();
    let peak = |b: usize| -> (usize, f64) {
        g[b].iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty grid")
    };
    let branch = match hint {
        BranchHint::Index(b) if b < paths.branches.len() => b,
        BranchHint::Index(b) => return Err(Error::InvalidConfig(format!("no branch {b}"))),
        BranchHint::MaxViolation => (0..paths.branches.len())
            .max_by(|&a, &b| peak(a).1.total_cmp(&peak(b).1))
            .ok_or(Error::NoSignChange)?,
    };
    let (top, max_violation) = peak(branch);
    if max_violation <= crate::region::EXTERIOR_TOL {
        return Err(Error::NoSignChange);
    }
    let gb = &g[branch];
    let mut lo = top;
    while lo > 0 && gb[lo - 1] > 0.0 {
        lo -= 1;
    }
    let mut hi = top;
    while hi + 1 < gb.len() && gb[hi + 1] > 0.0 {
        hi += 1;
    }
    if lo == 0 || hi + 1 == gb.len() {
        // The path is still outside at an endpoint of [0, 1].
        return Err(Error::NoSignChange);
    }
    let br = &paths.branches[branch];
    let mut scanner = Scanner::new();
    let perms = [*sigma, *tau];
    let t_low = bisect(&mut scanner, &perms, &region, (grid[lo - 1], br[lo - 1]), (grid[lo], br[lo]), tol)?;
    let t_high = bisect(&mut scanner, &perms, &region, (grid[hi + 1], br[hi + 1]), (grid[hi], br[hi]), tol)?;
    Ok(RefinedInterval {
        class_index: None,
        t_low,
        t_high,
        tolerance: tol,
        branch,
        max_violation,
    })
}

/// `inside` has `g ≤ 0`, `outside` has `g > 0`; returns the crossing `t`.
fn bisect(
    scanner: &mut Scanner,
    perms: &[Permutation; 2],
    region: &RegionPM,
    mut inside: (f64, Complex64),
    mut outside: (f64, Complex64),
    tol: f64,
) -> Result<f64> {
    while (outside.0 - inside.0).abs() > tol {
        let t = 0.5 * (inside.0 + outside.0);
        let guess = 0.5 * (inside.1 + outside.1);
        let z = scanner
            .eigenvalues_at(perms, &[t, 1.0 - t])?
            .iter()
            .copied()
            .min_by(|a, b| (a - guess).norm().total_cmp(&(b - guess).norm()))
            .ok_or(Error::NoSignChange)?;
        if t == inside.0 || t == outside.0 {
            break;
        }
        if region.signed_distance(z) > 0.0 {
            outside = (t, z);
        } else {
            inside = (t, z);
        }
    }
    Ok(0.5 * (inside.0 + outside.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::parse_cycles;
    use std::f64::consts::PI;

    fn brute_assignment(cost: &[Vec<f64>]) -> f64 {
        fn go(cost: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
            if row == cost.len() {
                return 0.0;
            }
            let mut best = f64::INFINITY;
            for j in 0..cost.len() {
                if !used[j] {
                    used[j] = true;
                    best = best.min(cost[row][j] + go(cost, row + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        go(cost, 0, &mut vec![false; cost.len()])
    }

    #[test]
    fn assignment_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            for _ in 0..50 {
                let cost: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.random::<f64>()).collect()).collect();
                let (assign, total) = min_cost_assignment(&cost);
                let mut cols = assign.clone();
                cols.sort_unstable();
                assert_eq!(cols, (0..n).collect::<Vec<_>>());
                assert!((total - brute_assignment(&cost)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_pair_gives_constant_branches() {
        let s = parse_cycles("(12)(345)", 5).unwrap();
        let grid: Vec<f64> = (0..11).map(|j| j as f64 / 10.0).collect();
        let paths = track_eigenpath(&s, &s, &grid).unwrap();
        for br in &paths.branches {
            assert!(br.iter().all(|z| (z - br[0]).norm() < 1e-12));
        }
    }

    #[test]
    fn identity_cycle_branch_is_linear() {
        let id = Permutation::identity(3);
        let c = parse_cycles("(123)", 3).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let grid: Vec<f64> = (0..21).map(|j| j as f64 / 20.0).collect();
        let paths = track_eigenpath(&id, &c, &grid).unwrap();
        let b = (0..2)
            .find(|&b| (paths.branches[b][0] - w).norm() < 1e-9)
            .expect("branch starting at ω");
        for (t, z) in paths.branch(b) {
            assert!((z - (t + (1.0 - t) * w)).norm() < 1e-9);
        }
        // Both branches meet at 1 when t = 1.
        assert_eq!(paths.ambiguous, vec![20]);
    }

    #[test]
    fn exceptional_branch_connects_roots() {
        let s = parse_cycles("(145)(23)", 5).unwrap();
        let t = parse_cycles("(1425)", 5).unwrap();
        let grid: Vec<f64> = (0..401).map(|j| j as f64 / 400.0).collect();
        let paths = track_eigenpath(&s, &t, &grid).unwrap();
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let i = Complex64::new(0.0, 1.0);
        let region = RegionPM::new(5).unwrap();
        let b = (0..4)
            .filter(|&b| paths.branches[b][200].im > 0.0)
            .max_by(|&a, &b| {
                let pa = paths.branches[a].iter().map(|&z| region.signed_distance(z)).fold(f64::MIN, f64::max);
                let pb = paths.branches[b].iter().map(|&z| region.signed_distance(z)).fold(f64::MIN, f64::max);
                pa.total_cmp(&pb)
            })
            .unwrap();
        let br = &paths.branches[b];
        assert!((br[0] - i).norm() < 1e-9, "t=0 end {}", br[0]);
        assert!((br[400] - w).norm() < 1e-9, "t=1 end {}", br[400]);
    }

    #[test]
    fn refine_rejects_inside_pairs_and_reflects() {
        let s = parse_cycles("(145)(23)", 5).unwrap();
        let t = parse_cycles("(1425)", 5).unwrap();
        let fwd = refine_crossing(&s, &t, BranchHint::MaxViolation, 1e-9).unwrap();
        let rev = refine_crossing(&t, &s, BranchHint::MaxViolation, 1e-9).unwrap();
        assert!((fwd.t_low - (1.0 - rev.t_high)).abs() < 1e-8);
        assert!((fwd.t_high - (1.0 - rev.t_low)).abs() < 1e-8);
        let inside = parse_cycles("(12)(345)", 5).unwrap();
        assert!(matches!(
            refine_crossing(&inside, &t, BranchHint::MaxViolation, 1e-9),
            Err(Error::NoSignChange)
        ));
    }
}
