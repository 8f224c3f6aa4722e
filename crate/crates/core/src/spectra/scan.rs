//! Mesh scans of eigenvalues along pairs and k-tuples of permutations.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permgroup::{check_degrees, Permutation};

use super::combo::accumulate_deflated;
use super::eigen::EigenSolver;

/// Eigenvalues with `|Im λ|` below this are treated as real.
pub const REAL_AXIS_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanConfig {
    mesh_size: usize,
    tuple_order: usize,
    half_plane_only: bool,
    drop_real_axis: bool,
}

impl ScanConfig {
    pub fn new(mesh_size: usize, tuple_order: usize) -> Result<Self> {
        if mesh_size < 2 {
            return Err(Error::InvalidConfig(format!("mesh size {mesh_size} < 2")));
        }
        if tuple_order < 2 {
            return Err(Error::InvalidConfig(format!("tuple order {tuple_order} < 2")));
        }
        Ok(Self {
            mesh_size,
            tuple_order,
            half_plane_only: false,
            drop_real_axis: false,
        })
    }

    pub fn pairs(mesh_size: usize) -> Result<Self> {
        Self::new(mesh_size, 2)
    }

    pub fn half_plane_only(mut self, on: bool) -> Self {
        self.half_plane_only = on;
        self
    }

    pub fn drop_real_axis(mut self, on: bool) -> Self {
        self.drop_real_axis = on;
        self
    }

    pub fn mesh_size(&self) -> usize {
        self.mesh_size
    }

    pub fn tuple_order(&self) -> usize {
        self.tuple_order
    }

    pub fn filter(&self) -> PointFilter {
        PointFilter {
            half_plane_only: self.half_plane_only,
            drop_real_axis: self.drop_real_axis,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PointFilter {
    pub half_plane_only: bool,
    pub drop_real_axis: bool,
}

impl PointFilter {
    #[inline]
    pub fn keeps(&self, z: Complex64) -> bool {
        !(self.half_plane_only && z.im < 0.0) && !(self.drop_real_axis && z.im.abs() < REAL_AXIS_TOL)
    }
}

/// Where an [`EigenPoint`] came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SourceId {
    Unspecified,
    Class(u64),
    Tuple(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EigenPoint {
    pub value: Complex64,
    pub source: SourceId,
    pub weights: Vec<f64>,
}

/// Lexicographic iterator over compositions of `m` into `k` nonnegative parts.
#[derive(Clone, Debug)]
pub struct Compositions {
    current: Option<Vec<usize>>,
}

pub fn compositions(m: usize, k: usize) -> Compositions {
    let current = (k > 0).then(|| {
        let mut v = vec![0; k];
        v[k - 1] = m;
        v
    });
    Compositions { current }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        if let Some(p) = (1..next.len()).rev().find(|&i| next[i] > 0) {
            let rest = next[p] - 1;
            next[p] = 0;
            next[p - 1] += 1;
            let last = next.len() - 1;
            next[last] = rest;
            self.current = Some(next);
        }
        Some(cur)
    }
}

/// `C(m + k - 1, k - 1)`.
pub fn composition_count(m: usize, k: usize) -> u128 {
    if k == 0 {
        return u128::from(m == 0);
    }
    let mut c: u128 = 1;
    for i in 1..k as u128 {
        c = c * (m as u128 + i) / i;
    }
    c
}

/// Reusable scratch for repeated scans on one worker.
#[derive(Clone, Debug)]
pub struct Scanner {
    solver: EigenSolver,
    basis: Vec<Vec<f64>>,
    work: Vec<f64>,
    values: Vec<Complex64>,
}

impl Default for Scanner {
    fn default() -> Self {
        Self::new()
    }
}

impl Scanner {
    pub fn new() -> Self {
        Self {
            solver: EigenSolver::new(0),
            basis: Vec::new(),
            work: Vec::new(),
            values: Vec::new(),
        }
    }

    fn load(&mut self, perms: &[Permutation]) -> Result<usize> {
        let Some(first) = perms.first() else {
            return Err(Error::InvalidConfig("no permutations to scan".into()));
        };
        let n = first.degree();
        for p in perms {
            check_degrees(first, p)?;
        }
        if n < 2 {
            return Err(Error::UnsupportedDegree {
                n,
                reason: "deflation needs n >= 2",
            });
        }
        let d = n - 1;
        self.basis.resize_with(perms.len(), Vec::new);
        for (buf, p) in self.basis.iter_mut().zip(perms) {
            buf.clear();
            buf.resize(d * d, 0.0);
            accumulate_deflated(buf, 1.0, p);
        }
        Ok(d)
    }

    /// Eigenvalues of the deflated combination `Σ weights[i]·perms[i]`.
    pub fn eigenvalues_at(&mut self, perms: &[Permutation], weights: &[f64]) -> Result<&[Complex64]> {
        if perms.len() != weights.len() {
            return Err(Error::InvalidConfig(format!(
                "{} permutations but {} weights",
                perms.len(),
                weights.len()
            )));
        }
        let d = self.load(perms)?;
        self.solve_loaded(d, weights)?;
        Ok(&self.values)
    }

    fn solve_loaded(&mut self, d: usize, weights: &[f64]) -> Result<()> {
        self.work.clear();
        self.work.resize(d * d, 0.0);
        for (b, &w) in self.basis.iter().zip(weights) {
            if w != 0.0 {
                for (x, y) in self.work.iter_mut().zip(b) {
                    *x += w * y;
                }
            }
        }
        self.solver.solve(&self.work, d, &mut self.values)
    }

    /// Calls `f(j, t, eigenvalues)` for `t = j/(m-1)`, `j = 0..m`, on
    /// `t·σ + (1 - t)·τ`. Eigenvalues are filtered.
    pub fn for_each_pair<F>(
        &mut self,
        sigma: &Permutation,
        tau: &Permutation,
        m: usize,
        filter: PointFilter,
        mut f: F,
    ) -> Result<()>
    where
        F: FnMut(usize, f64, &[Complex64]) -> Result<()>,
    {
        if m < 2 {
            return Err(Error::InvalidConfig(format!("mesh size {m} < 2")));
        }
        let d = self.load(&[*sigma, *tau])?;
        let mut kept = Vec::with_capacity(d);
        for j in 0..m {
            let t = j as f64 / (m - 1) as f64;
            self.solve_loaded(d, &[t, 1.0 - t])?;
            kept.clear();
            kept.extend(self.values.iter().copied().filter(|&z| filter.keeps(z)));
            f(j, t, &kept)?;
        }
        Ok(())
    }

    /// Calls `f(composition, eigenvalues)` for every composition of `m`
    /// into `perms.len()` parts, weights `a_i / m`.
    pub fn for_each_tuple<F>(
        &mut self,
        perms: &[Permutation],
        m: usize,
        filter: PointFilter,
        mut f: F,
    ) -> Result<()>
    where
        F: FnMut(&[usize], &[Complex64]) -> Result<()>,
    {
        if perms.len() < 2 {
            return Err(Error::InvalidConfig("tuple scans need k >= 2".into()));
        }
        if m < 1 {
            return Err(Error::InvalidConfig("tuple mesh size must be >= 1".into()));
        }
        let d = self.load(perms)?;
        let mut weights = vec![0.0; perms.len()];
        let mut kept = Vec::with_capacity(d);
        for comp in compositions(m, perms.len()) {
            for (w, &a) in weights.iter_mut().zip(&comp) {
                *w = a as f64 / m as f64;
            }
            self.solve_loaded(d, &weights)?;
            kept.clear();
            kept.extend(self.values.iter().copied().filter(|&z| filter.keeps(z)));
            f(&comp, &kept)?;
        }
        Ok(())
    }
}

/// Eigenvalues of the deflated `t·σ + (1 - t)·τ` on the pair mesh.
/// Weights are recorded as `[t, 1 - t]`.
pub fn scan_pair(sigma: &Permutation, tau: &Permutation, cfg: &ScanConfig) -> Result<Vec<EigenPoint>> {
    let mut out = Vec::new();
    Scanner::new().for_each_pair(sigma, tau, cfg.mesh_size(), cfg.filter(), |_, t, vals| {
        out.extend(vals.iter().map(|&value| EigenPoint {
            value,
            source: SourceId::Unspecified,
            weights: vec![t, 1.0 - t],
        }));
        Ok(())
    })?;
    Ok(out)
}

/// Eigenvalues of the deflated `Σ (a_i/m)·P_i` over all compositions of `m`.
pub fn scan_tuple(perms: &[Permutation], cfg: &ScanConfig) -> Result<Vec<EigenPoint>> {
    let m = cfg.mesh_size();
    let mut out = Vec::new();
    Scanner::new().for_each_tuple(perms, m, cfg.filter(), |comp, vals| {
        let weights: Vec<f64> = comp.iter().map(|&a| a as f64 / m as f64).collect();
        out.extend(vals.iter().map(|&value| EigenPoint {
            value,
            source: SourceId::Unspecified,
            weights: weights.clone(),
        }));
        Ok(())
    })?;
    Ok(out)
}
