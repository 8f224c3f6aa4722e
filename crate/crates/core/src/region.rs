//! Geometry of the Perfect–Mirsky region `PM_n`, the union of the convex
//! hulls `Π_k` of the k-th roots of unity for `k ≤ n`.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::format::fmt_f64;

/// Signed distances at or below this count as inside. Eigenvalues sitting
/// on a vertex of `PM_n` land slightly outside after rounding; repeated
/// eigenvalues at 1 from intransitive pairs show errors up to ~6e-9.
pub const EXTERIOR_TOL: f64 = 1e-6;

/// Vertex `j` of `Π_k`, exact at the axis crossings.
pub fn root_of_unity(j: usize, k: usize) -> Complex64 {
    let j = j % k;
    if j == 0 {
        Complex64::new(1.0, 0.0)
    } else if 2 * j == k {
        Complex64::new(-1.0, 0.0)
    } else if 4 * j == k {
        Complex64::new(0.0, 1.0)
    } else if 4 * j == 3 * k {
        Complex64::new(0.0, -1.0)
    } else {
        let (s, c) = (2.0 * PI * j as f64 / k as f64).sin_cos();
        Complex64::new(c, s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub k: usize,
    pub start: Complex64,
    pub end: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionPM {
    n: usize,
    polygons: Vec<Vec<Complex64>>,
    inradius: f64,
}

#[inline]
fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
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

impl RegionPM {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::UnsupportedDegree {
                n,
                reason: "the region needs n >= 2",
            });
        }
        let polygons = (1..=n)
            .map(|k| (0..k).map(|j| root_of_unity(j, k)).collect())
            .collect();
        let inradius = if n > 2 { (PI / n as f64).cos() } else { 0.0 };
        Ok(Self { n, polygons, inradius })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    /// Vertices of `Π_k` in counterclockwise order.
    pub fn polygon(&self, k: usize) -> &[Complex64] {
        &self.polygons[k - 1]
    }

    /// Closed membership in `PM_n`, using the inradius shortcut and the
    /// edge located by `Re λ`.
    pub fn contains(&self, z: Complex64) -> bool {
        if z.norm_sqr() <= self.inradius * self.inradius {
            return true;
        }
        let z = if z.im < 0.0 { z.conj() } else { z };
        if z.re > 1.0 {
            return false;
        }
        if z == Complex64::new(1.0, 0.0) {
            return true;
        }
        if z.im == 0.0 && z.re >= -1.0 {
            return true;
        }
        (3..=self.n).any(|k| self.polygon_upper_contains(k, z))
    }

    /// `z` must be in the closed upper half plane with `Re z ≤ 1`.
    fn polygon_upper_contains(&self, k: usize, z: Complex64) -> bool {
        let verts = self.polygon(k);
        // Upper boundary runs over vertices 0..=k/2 with decreasing real part.
        let last = k / 2;
        let end_re = verts[last].re;
        if z.re < end_re {
            return false;
        }
        let theta = z.re.clamp(-1.0, 1.0).acos();
        let j = ((theta * k as f64 / (2.0 * PI)).floor() as usize).min(last - 1);
        let (a, b) = (verts[j], verts[j + 1]);
        cross(b - a, z - a) >= 0.0
    }

    /// Point-in-polygon test against every edge of every `Π_k`.
    pub fn contains_oracle(&self, z: Complex64) -> bool {
        if z == Complex64::new(1.0, 0.0) {
            return true;
        }
        if self.n >= 2 && z.im == 0.0 && (-1.0..=1.0).contains(&z.re) {
            return true;
        }
        (3..=self.n).any(|k| {
            let v = self.polygon(k);
            (0..k).all(|j| cross(v[(j + 1) % k] - v[j], z - v[j]) >= 0.0)
        })
    }

    /// Signed distance to `Π_k`: negative inside, positive outside.
    pub fn polygon_signed_distance(&self, k: usize, z: Complex64) -> f64 {
        let v = self.polygon(k);
        match k {
            1 => (z - v[0]).norm(),
            2 => segment_distance(z, v[0], v[1]),
            _ => {
                let mut inside = true;
                let mut line = f64::INFINITY;
                let mut seg = f64::INFINITY;
                for j in 0..k {
                    let (a, b) = (v[j], v[(j + 1) % k]);
                    let c = cross(b - a, z - a) / (b - a).norm();
                    if c < 0.0 {
                        inside = false;
                    }
                    line = line.min(c);
                    seg = seg.min(segment_distance(z, a, b));
                }
                if inside {
                    -line
                } else {
                    seg
                }
            }
        }
    }

    /// Minimum over `k ≤ n` of the signed distance to `Π_k`.
    pub fn signed_distance(&self, z: Complex64) -> f64 {
        (1..=self.n)
            .map(|k| self.polygon_signed_distance(k, z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Signed distance when `z` is outside by more than [`EXTERIOR_TOL`].
    #[inline]
    pub fn exterior_distance(&self, z: Complex64) -> Option<f64> {
        if self.contains(z) {
            return None;
        }
        let d = self.signed_distance(z);
        (d > EXTERIOR_TOL).then_some(d)
    }

    pub fn boundary_segments(&self) -> Vec<Segment> {
        let mut out = Vec::new();
        for k in 2..=self.n {
            let v = self.polygon(k);
            if k == 2 {
                out.push(Segment { k, start: v[1], end: v[0] });
                continue;
            }
            out.extend((0..k).map(|j| Segment {
                k,
                start: v[j],
                end: v[(j + 1) % k],
            }));
        }
        out
    }

    /// CSV of `k,j,x,y` vertex records for every `Π_k`.
    pub fn write_outline_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,j,x,y")?;
        for k in 1..=self.n {
            for (j, z) in self.polygon(k).iter().enumerate() {
                writeln!(w, "{k},{j},{},{}", fmt_f64(z.re), fmt_f64(z.im))?;
            }
        }
        Ok(())
    }
}

/// Reads back the output of [`RegionPM::write_outline_csv`].
pub fn read_outline_csv<R: BufRead>(r: R) -> Result<Vec<(usize, usize, Complex64)>> {
    let bad = |line: &str, reason: &str| Error::Parse {
        input: line.to_string(),
        reason: reason.to_string(),
    };
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(bad(&line, "expected 4 fields"));
        }
        let k = f[0].parse().map_err(|_| bad(&line, "bad k"))?;
        let j = f[1].parse().map_err(|_| bad(&line, "bad j"))?;
        let x = f[2].parse().map_err(|_| bad(&line, "bad x"))?;
        let y = f[3].parse().map_err(|_| bad(&line, "bad y"))?;
        out.push((k, j, Complex64::new(x, y)));
    }
    Ok(out)
}

pub fn pm_contains(r: &RegionPM, z: Complex64) -> bool {
    r.contains(z)
}

pub fn pm_contains_oracle(r: &RegionPM, z: Complex64) -> bool {
    r.contains_oracle(z)
}

pub fn pm_signed_distance(r: &RegionPM, z: Complex64) -> f64 {
    r.signed_distance(z)
}

pub fn boundary_segments(r: &RegionPM) -> Vec<Segment> {
    r.boundary_segments()
}
