//! Eigenvalues of small dense real matrices.
//!
//! Householder reduction to upper Hessenberg form followed by the
//! implicitly double-shifted Francis QR iteration, eigenvalues only. The
//! iteration follows the classical EISPACK `hqr` structure, including the
//! ad hoc exceptional shifts, which matter here: cyclic permutation
//! matrices are the textbook case where plain Francis shifts stall.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension accepted by the solver.
pub const MAX_EIGEN_DIM: usize = 64;

/// Dense row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NonSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::NonSquare {
                rows: dim,
                cols: data.len().checked_div(dim).unwrap_or(0),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.dim.max(1))
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

/// All eigenvalues of `m` with multiplicity.
pub fn eigenvalues(m: &DenseMatrix) -> Result<Vec<Complex64>> {
    let mut solver = EigenSolver::new(m.dim());
    let mut out = Vec::with_capacity(m.dim());
    solver.solve(m.as_slice(), m.dim(), &mut out)?;
    Ok(out)
}

/// Reusable scratch space for repeated solves of one dimension.
#[derive(Clone, Debug)]
pub struct EigenSolver {
    h: Vec<f64>,
    ort: Vec<f64>,
    wr: Vec<f64>,
    wi: Vec<f64>,
}

/// Iterations allowed per eigenvalue before giving up.
const ITERATIONS_PER_EIGENVALUE: usize = 60;

impl EigenSolver {
    pub fn new(dim: usize) -> Self {
        Self {
            h: vec![0.0; dim * dim],
            ort: vec![0.0; dim],
            wr: vec![0.0; dim],
            wi: vec![0.0; dim],
        }
    }

    /// Eigenvalues of the row-major `dim × dim` matrix `a`, appended to
    /// `out` after clearing it.
    pub fn solve(&mut self, a: &[f64], dim: usize, out: &mut Vec<Complex64>) -> Result<()> {
        if a.len() != dim * dim {
            return Err(Error::NonSquare {
                rows: dim,
                cols: a.len().checked_div(dim).unwrap_or(0),
            });
        }
        if dim > MAX_EIGEN_DIM {
            return Err(Error::InvalidConfig(format!(
                "eigensolver dimension {dim} exceeds {MAX_EIGEN_DIM}"
            )));
        }
        out.clear();
        match dim {
            0 => return Ok(()),
            1 => {
                out.push(Complex64::new(a[0], 0.0));
                return Ok(());
            }
            _ => {}
        }
        if self.h.len() != dim * dim {
            *self = Self::new(dim);
        }
        self.h.copy_from_slice(a);
        self.reduce_to_hessenberg(dim);
        self.hqr(dim)?;
        out.extend(
            self.wr
                .iter()
                .zip(&self.wi)
                .map(|(&re, &im)| Complex64::new(re, im)),
        );
        Ok(())
    }

    fn reduce_to_hessenberg(&mut self, n: usize) {
        let h = &mut self.h;
        let ort = &mut self.ort;
        let at = |i: usize, j: usize| i * n + j;
        let high = n - 1;
        for m in 1..high {
            let scale: f64 = (m..=high).map(|i| h[at(i, m - 1)].abs()).sum();
            if scale == 0.0 {
                continue;
            }
            let mut hh = 0.0;
            for i in (m..=high).rev() {
                ort[i] = h[at(i, m - 1)] / scale;
                hh += ort[i] * ort[i];
            }
            let mut g = hh.sqrt();
            if ort[m] > 0.0 {
                g = -g;
            }
            hh -= ort[m] * g;
            ort[m] -= g;

            for j in m..n {
                let mut f = 0.0;
                for i in (m..=high).rev() {
                    f += ort[i] * h[at(i, j)];
                }
                f /= hh;
                for i in m..=high {
                    h[at(i, j)] -= f * ort[i];
                }
            }
            for i in 0..=high {
                let mut f = 0.0;
                for j in (m..=high).rev() {
                    f += ort[j] * h[at(i, j)];
                }
                f /= hh;
                for j in m..=high {
                    h[at(i, j)] -= f * ort[j];
                }
            }
            h[at(m, m - 1)] = scale * g;
            for i in m + 1..=high {
                h[at(i, m - 1)] = 0.0;
            }
        }
    }

    fn hqr(&mut self, nn: usize) -> Result<()> {
        let h = &mut self.h;
        let wr = &mut self.wr;
        let wi = &mut self.wi;
        let at = |i: usize, j: usize| i * nn + j;
        let eps = f64::EPSILON;

        let mut norm = 0.0;
        for i in 0..nn {
            for j in i.saturating_sub(1)..nn {
                norm += h[at(i, j)].abs();
            }
        }

        let low = 0usize;
        // `n` is the last row of the active block; signed since it steps
        // below zero on the final deflation.
        let mut n = nn as isize - 1;
        let mut exshift = 0.0;
        let mut iter = 0usize;
        let mut total_iter = 0usize;
        let max_total = ITERATIONS_PER_EIGENVALUE * nn;
        let (mut p, mut q, mut r, mut s, mut z);
        let (mut x, mut y, mut w);

        while n >= low as isize {
            let nu = n as usize;
            // Look for a single small subdiagonal element.
            let mut l = nu;
            while l > low {
                s = h[at(l - 1, l - 1)].abs() + h[at(l, l)].abs();
                if s == 0.0 {
                    s = norm;
                }
                if h[at(l, l - 1)].abs() < eps * s {
                    break;
                }
                l -= 1;
            }

            if l == nu {
                wr[nu] = h[at(nu, nu)] + exshift;
                wi[nu] = 0.0;
                n -= 1;
                iter = 0;
            } else if l + 1 == nu {
                w = h[at(nu, nu - 1)] * h[at(nu - 1, nu)];
                p = (h[at(nu - 1, nu - 1)] - h[at(nu, nu)]) / 2.0;
                q = p * p + w;
                z = q.abs().sqrt();
                x = h[at(nu, nu)] + exshift;
                if q >= 0.0 {
                    z = if p >= 0.0 { p + z } else { p - z };
                    wr[nu - 1] = x + z;
                    wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = z;
                    wi[nu] = -z;
                }
                n -= 2;
                iter = 0;
            } else {
                x = h[at(nu, nu)];
                y = h[at(nu - 1, nu - 1)];
                w = h[at(nu, nu - 1)] * h[at(nu - 1, nu)];

                if iter > 0 && iter % 10 == 0 {
                    if (iter / 10) % 2 == 1 {
                        // Wilkinson's ad hoc shift
                        exshift += x;
                        for i in low..=nu {
                            h[at(i, i)] -= x;
                        }
                        s = h[at(nu, nu - 1)].abs() + h[at(nu - 1, nu - 2)].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    } else {
                        // the newer MATLAB shift
                        s = (y - x) / 2.0;
                        s = s * s + w;
                        if s > 0.0 {
                            s = s.sqrt();
                            if y < x {
                                s = -s;
                            }
                            s = x - w / ((y - x) / 2.0 + s);
                            for i in low..=nu {
                                h[at(i, i)] -= s;
                            }
                            exshift += s;
                            x = 0.964;
                            y = x;
                            w = x;
                        }
                    }
                }

                iter += 1;
                total_iter += 1;
                if total_iter > max_total {
                    return Err(Error::NoConvergence {
                        iterations: total_iter,
                        remaining: nu + 1,
                        partial: h.clone(),
                    });
                }

                // Look for two consecutive small subdiagonal elements.
                let mut m = nu - 2;
                loop {
                    z = h[at(m, m)];
                    r = x - z;
                    s = y - z;
                    p = (r * s - w) / h[at(m + 1, m)] + h[at(m, m + 1)];
                    q = h[at(m + 1, m + 1)] - z - r - s;
                    r = h[at(m + 2, m + 1)];
                    s = p.abs() + q.abs() + r.abs();
                    p /= s;
                    q /= s;
                    r /= s;
                    if m == l {
                        break;
                    }
                    let lhs = h[at(m, m - 1)].abs() * (q.abs() + r.abs());
                    let rhs = eps
                        * (p.abs()
                            * (h[at(m - 1, m - 1)].abs() + z.abs() + h[at(m + 1, m + 1)].abs()));
                    if lhs < rhs {
                        break;
                    }
                    m -= 1;
                }

                for i in m + 2..=nu {
                    h[at(i, i - 2)] = 0.0;
                    if i > m + 2 {
                        h[at(i, i - 3)] = 0.0;
                    }
                }

                // Double QR step on rows l..=n and columns m..=n; the rest of
                // the matrix does not affect the eigenvalues.
                let mut k = m;
                while k < nu {
                    let notlast = k != nu - 1;
                    if k != m {
                        p = h[at(k, k - 1)];
                        q = h[at(k + 1, k - 1)];
                        r = if notlast { h[at(k + 2, k - 1)] } else { 0.0 };
                        x = p.abs() + q.abs() + r.abs();
                        if x == 0.0 {
                            k += 1;
                            continue;
                        }
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                    s = (p * p + q * q + r * r).sqrt();
                    if p < 0.0 {
                        s = -s;
                    }
                    if s != 0.0 {
                        if k != m {
                            h[at(k, k - 1)] = -s * x;
                        } else if l != m {
                            h[at(k, k - 1)] = -h[at(k, k - 1)];
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;

                        for j in k..=nu {
                            let mut pp = h[at(k, j)] + q * h[at(k + 1, j)];
                            if notlast {
                                pp += r * h[at(k + 2, j)];
                                h[at(k + 2, j)] -= pp * z;
                            }
                            h[at(k, j)] -= pp * x;
                            h[at(k + 1, j)] -= pp * y;
                        }
                        let top = nu.min(k + 3);
                        for i in l..=top {
                            let mut pp = x * h[at(i, k)] + y * h[at(i, k + 1)];
                            if notlast {
                                pp += z * h[at(i, k + 2)];
                                h[at(i, k + 2)] -= pp * r;
                            }
                            h[at(i, k)] -= pp;
                            h[at(i, k + 1)] -= pp * q;
                        }
                    }
                    k += 1;
                }
            }
        }
        Ok(())
    }
}
