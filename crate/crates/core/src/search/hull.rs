//! Hull-spectrum experiments: eigenvalues of k-tuple combinations of a
//! permutation group compared against the cloud generated by its pairs.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permgroup::{format_cycles, inequivalent_pairs, Permutation};
use crate::region::RegionPM;
use crate::spectra::{PointFilter, ScanConfig, Scanner, SourceId};

use super::driver::ScanOptions;
use super::eigenpath::track_eigenpath;
use super::pairs::scan_census_with;
use super::report::{CrossingReport, ReportBuilder};
use super::tuples::{Sampling, Subgroup, TupleSpace};

/// Pair paths are sampled this many times finer than the tuple grid.
pub const PAIR_REFINEMENT: usize = 4;

const ANGLE_BINS: usize = 4096;

#[inline]
fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Convex hull by monotone chain, counterclockwise, without collinear points.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if cross(b - a, p - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let s = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * s)).norm()
}

/// Radius of the largest origin-centred disc inside a counterclockwise
/// convex polygon; zero if the origin is not interior.
pub fn hull_inradius(hull: &[Complex64]) -> f64 {
    let k = hull.len();
    if k < 3 {
        return 0.0;
    }
    (0..k)
        .map(|j| {
            let (a, b) = (hull[j], hull[(j + 1) % k]);
            cross(b - a, -a) / (b - a).norm()
        })
        .fold(f64::INFINITY, f64::min)
        .max(0.0)
}

/// Distance outside a counterclockwise convex polygon, zero inside.
pub fn hull_distance(hull: &[Complex64], z: Complex64) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (z - hull[0]).norm(),
        2 => segment_distance(z, hull[0], hull[1]),
        k => {
            let inside = (0..k).all(|j| cross(hull[(j + 1) % k] - hull[j], z - hull[j]) >= 0.0);
            if inside {
                0.0
            } else {
                (0..k)
                    .map(|j| segment_distance(z, hull[j], hull[(j + 1) % k]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Farthest crossing of each ray from the origin with a set of polylines.
#[derive(Clone, Debug)]
pub struct RadialEnvelope {
    segments: Vec<(Complex64, Complex64)>,
    /// Per bin, segment indices by decreasing outer radius.
    bins: Vec<Vec<u32>>,
}

fn outer((a, b): (Complex64, Complex64)) -> f64 {
    a.norm().max(b.norm())
}

fn angle_bin(theta: f64) -> usize {
    let x = (theta.rem_euclid(2.0 * PI)) / (2.0 * PI) * ANGLE_BINS as f64;
    (x as usize).min(ANGLE_BINS - 1)
}

impl RadialEnvelope {
    pub fn new(polylines: &[Vec<Complex64>]) -> Self {
        let mut segments = Vec::new();
        let mut bins = vec![Vec::new(); ANGLE_BINS];
        for line in polylines {
            for w in line.windows(2) {
                let (a, b) = (w[0], w[1]);
                if a.norm() < 1e-12 || b.norm() < 1e-12 {
                    continue;
                }
                let (ta, tb) = (a.arg(), b.arg());
                let diff = (tb - ta + PI).rem_euclid(2.0 * PI) - PI;
                if diff.abs() > PI - 1e-9 {
                    // Passes through the origin.
                    continue;
                }
                let idx = segments.len() as u32;
                segments.push((a, b));
                let (lo, hi) = if diff >= 0.0 { (ta, ta + diff) } else { (ta + diff, ta) };
                let (b0, b1) = (angle_bin(lo), angle_bin(hi));
                let mut bin = b0;
                loop {
                    bins[bin].push(idx);
                    if bin == b1 {
                        break;
                    }
                    bin = (bin + 1) % ANGLE_BINS;
                }
            }
        }
        for bin in &mut bins {
            bin.sort_by(|&i, &j| outer(segments[j as usize]).total_cmp(&outer(segments[i as usize])));
        }
        Self { segments, bins }
    }

    /// Largest `s ≥ 0` with `s·z/|z|` on a polyline, or 0 if none.
    pub fn radius(&self, z: Complex64) -> f64 {
        self.radius_until(z, f64::INFINITY)
    }

    /// Like [`Self::radius`], but may stop early once a crossing at or
    /// beyond `stop` is found.
    fn radius_until(&self, z: Complex64, stop: f64) -> f64 {
        let r = z.norm();
        if r == 0.0 {
            return 0.0;
        }
        let u = z / r;
        let mut best: f64 = 0.0;
        for &i in &self.bins[angle_bin(z.arg())] {
            let (a, b) = self.segments[i as usize];
            if best >= stop || outer((a, b)) <= best {
                break;
            }
            let d = b - a;
            let den = cross(u, d);
            if den == 0.0 {
                continue;
            }
            // a + λ d = s u
            let lambda = cross(a, u) / den;
            if (-1e-12..=1.0 + 1e-12).contains(&lambda) {
                let s = cross(a, d) / den;
                if s >= 0.0 {
                    best = best.max(s);
                }
            }
        }
        best
    }

    /// How far `z` lies beyond the envelope along its own ray. Exact when
    /// positive; a nonpositive result only means `z` is not beyond it.
    pub fn excess(&self, z: Complex64) -> f64 {
        let r = z.norm();
        r - self.radius_until(z, r)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HullWitness {
    pub value: Complex64,
    pub generators: Vec<String>,
    pub weights: Vec<f64>,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CloudPoint {
    pub source: SourceId,
    pub weights: Vec<f64>,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HullReport {
    pub group: Subgroup,
    pub n: usize,
    pub tuple_order: usize,
    pub mesh_size: usize,
    pub pair_points: u64,
    pub tuple_points: u64,
    pub hull: Vec<Complex64>,
    /// Largest distance of a tuple eigenvalue outside the pair hull.
    pub max_hull_distance: f64,
    pub hull_witness: Option<HullWitness>,
    /// Largest distance of a tuple eigenvalue beyond every pair path along
    /// its ray from the origin.
    pub max_envelope_excess: f64,
    pub envelope_witness: Option<HullWitness>,
    /// Eigenvalues outside `PM_n`.
    pub reports: Vec<CrossingReport>,
}

#[derive(Clone, Debug, Default)]
pub struct HullScan {
    pub report: Option<HullReport>,
    pub pair_cloud: Vec<CloudPoint>,
    pub tuple_cloud: Vec<CloudPoint>,
}

#[derive(Clone, Debug, Default)]
pub struct HullOptions {
    pub scan: ScanOptions,
    /// Keep every eigenvalue in [`HullScan`]'s clouds.
    pub collect_points: bool,
}

struct TupleOutcome {
    points: u64,
    hull: Option<HullWitness>,
    envelope: Option<HullWitness>,
    report: Option<CrossingReport>,
    cloud: Vec<CloudPoint>,
}

fn better(a: Option<HullWitness>, b: Option<HullWitness>) -> Option<HullWitness> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.distance > x.distance { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Scans k-tuples of the chosen group and compares them with its pairs.
pub fn hull_spectrum_scan(group: Subgroup, n: usize, k: usize, m: usize, sampling: Sampling) -> Result<HullReport> {
    hull_spectrum_scan_with(group, n, k, m, sampling, &HullOptions::default())?
        .report
        .ok_or_else(|| Error::InvalidConfig("scan produced no report".into()))
}

pub fn hull_spectrum_scan_with(
    group: Subgroup,
    n: usize,
    k: usize,
    m: usize,
    sampling: Sampling,
    opts: &HullOptions,
) -> Result<HullScan> {
    if m < 1 {
        return Err(Error::InvalidConfig("mesh size must be >= 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.scan.resolved_workers()?)
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let region = RegionPM::new(n)?;

    // Pair stage: every pair with a canonical first element.
    let pairs = TupleSpace::new(group, n, 2, Sampling::Exhaustive)?;
    let pm = m * PAIR_REFINEMENT;
    let grid: Vec<f64> = (0..=pm).map(|j| j as f64 / pm as f64).collect();
    let paths: Vec<(u64, Vec<Vec<Complex64>>)> = pool.install(|| {
        (0..pairs.len())
            .into_par_iter()
            .map(|i| {
                let p = pairs.tuple(i);
                track_eigenpath(&p[0], &p[1], &grid).map(|e| (i, e.branches))
            })
            .collect::<Result<_>>()
    })?;
    let mut pair_cloud = Vec::new();
    let mut cloud_values = Vec::new();
    let mut polylines = Vec::new();
    for (i, branches) in paths {
        for br in branches {
            cloud_values.extend(br.iter().copied());
            if opts.collect_points {
                pair_cloud.extend(br.iter().zip(&grid).map(|(&value, &t)| CloudPoint {
                    source: SourceId::Tuple(i),
                    weights: vec![t, 1.0 - t],
                    value,
                }));
            }
            polylines.push(br);
        }
    }
    let hull = convex_hull(&cloud_values);
    let inradius = hull_inradius(&hull) * (1.0 - 1e-12);
    let envelope = RadialEnvelope::new(&polylines);

    let symmetric_pairs = group == Subgroup::Symmetric && k == 2;
    let tuples = TupleSpace::new(group, n, k, sampling)?;
    let scan_one = |scanner: &mut Scanner, i: u64| -> Result<TupleOutcome> {
        let perms: Vec<Permutation> = tuples.tuple(i);
        let names = || perms.iter().map(format_cycles).collect::<Vec<_>>();
        let mut out = TupleOutcome {
            points: 0,
            hull: None,
            envelope: None,
            report: None,
            cloud: Vec::new(),
        };
        let mut builder = ReportBuilder::new();
        let mut weights = vec![0.0; k];
        let mut exterior = Vec::new();
        scanner.for_each_tuple(&perms, m, PointFilter::default(), |comp, vals| {
            for (w, &a) in weights.iter_mut().zip(comp) {
                *w = a as f64 / m as f64;
            }
            exterior.clear();
            for &z in vals {
                out.points += 1;
                let hd = if z.norm() < inradius { 0.0 } else { hull_distance(&hull, z) };
                if hd > out.hull.as_ref().map_or(0.0, |w| w.distance) {
                    out.hull = Some(HullWitness {
                        value: z,
                        generators: names(),
                        weights: weights.clone(),
                        distance: hd,
                    });
                }
                let ex = envelope.excess(z);
                if ex > out.envelope.as_ref().map_or(0.0, |w| w.distance) {
                    out.envelope = Some(HullWitness {
                        value: z,
                        generators: names(),
                        weights: weights.clone(),
                        distance: ex,
                    });
                }
                if let Some(d) = region.exterior_distance(z) {
                    exterior.push((z, d));
                }
                if opts.collect_points {
                    out.cloud.push(CloudPoint {
                        source: SourceId::Tuple(i),
                        weights: weights.clone(),
                        value: z,
                    });
                }
            }
            if !exterior.is_empty() {
                builder.record(&weights, &exterior, || (i, k, names()));
            }
            Ok(())
        })?;
        out.report = builder.finish(SourceId::Tuple(i));
        Ok(out)
    };
    let outcomes: Vec<TupleOutcome> = pool.install(|| {
        (0..tuples.len())
            .into_par_iter()
            .map_init(Scanner::new, |s, i| {
                scan_one(s, i).map_err(|e| Error::ClassFailed {
                    class_index: i,
                    source: Box::new(e),
                })
            })
            .collect::<Result<_>>()
    })?;

    let mut report = HullReport {
        group,
        n,
        tuple_order: k,
        mesh_size: m,
        pair_points: cloud_values.len() as u64,
        tuple_points: 0,
        hull,
        max_hull_distance: 0.0,
        hull_witness: None,
        max_envelope_excess: 0.0,
        envelope_witness: None,
        reports: Vec::new(),
    };
    let mut tuple_cloud = Vec::new();
    for o in outcomes {
        report.tuple_points += o.points;
        report.hull_witness = better(report.hull_witness.take(), o.hull);
        report.envelope_witness = better(report.envelope_witness.take(), o.envelope);
        report.reports.extend(o.report);
        tuple_cloud.extend(o.cloud);
    }
    report.max_hull_distance = report.hull_witness.as_ref().map_or(0.0, |w| w.distance);
    report.max_envelope_excess = report.envelope_witness.as_ref().map_or(0.0, |w| w.distance);
    if symmetric_pairs {
        let census = inequivalent_pairs(n)?;
        let pair_cfg = ScanConfig::pairs(m + 1)?;
        report.reports = scan_census_with(&census, &pair_cfg, &opts.scan)?.reports;
    }
    Ok(HullScan {
        report: Some(report),
        pair_cloud,
        tuple_cloud,
    })
}
