//! Convex combinations of permutation matrices and their deflation to the
//! standard representation.
//!
//! The permutation matrix of `σ` has a one at `(i, σ(i))`. Writing a
//! doubly stochastic `A` as `[[a₀₀, r], [c, B]]`, the similarity by
//! `S = [[1, 0], [e, I]]` leaves `B - e·r` as its lower-right block, which
//! carries every eigenvalue of `A` except one copy of 1.

use crate::error::{Error, Result};
use crate::permgroup::Permutation;

use super::eigen::DenseMatrix;

/// Tolerance on the weight sum of a [`ConvexCombo`].
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexCombo {
    degree: usize,
    terms: Vec<(f64, Permutation)>,
}

impl ConvexCombo {
    pub fn new(terms: Vec<(f64, Permutation)>) -> Result<Self> {
        let Some(&(_, first)) = terms.first() else {
            return Err(Error::InvalidConfig("empty convex combination".into()));
        };
        let degree = first.degree();
        let mut sum = 0.0;
        for (w, p) in &terms {
            if p.degree() != degree {
                return Err(Error::DegreeMismatch(degree, p.degree()));
            }
            if !(*w >= 0.0) {
                return Err(Error::InvalidConfig(format!("negative weight {w}")));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidConfig(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self { degree, terms })
    }

    pub fn single(p: Permutation) -> Self {
        Self {
            degree: p.degree(),
            terms: vec![(1.0, p)],
        }
    }

    /// `t·σ + (1 - t)·τ`.
    pub fn pair(sigma: Permutation, tau: Permutation, t: f64) -> Result<Self> {
        Self::new(vec![(t, sigma), (1.0 - t, tau)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(f64, Permutation)] {
        &self.terms
    }
}

/// The `n × n` doubly stochastic matrix of the combination.
pub fn combo_matrix(c: &ConvexCombo) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(c.degree());
    for &(w, p) in c.terms() {
        for i in 0..c.degree() {
            m[(i, p.apply(i))] += w;
        }
    }
    m
}

/// Adds `weight · P'` into the row-major `(n-1) × (n-1)` buffer `out`.
///
/// `P'` has entries in `{-1, 0, 1}`: a one at `(i-1, σ(i)-1)` for each row
/// `i ≥ 1` with `σ(i) ≠ 0`, minus a full column at `σ(0) - 1` when
/// `σ(0) ≠ 0`.
#[inline]
pub fn accumulate_deflated(out: &mut [f64], weight: f64, p: &Permutation) {
    let n = p.degree();
    let d = n - 1;
    for i in 1..n {
        let j = p.apply(i);
        if j != 0 {
            out[(i - 1) * d + (j - 1)] += weight;
        }
    }
    let top = p.apply(0);
    if top != 0 {
        for row in 0..d {
            out[row * d + (top - 1)] -= weight;
        }
    }
}

/// Lower-right block of `S⁻¹ A S`, the image of the combination in the
/// standard representation.
#[derive(Clone, Debug, PartialEq)]
pub struct DeflatedMatrix(pub DenseMatrix);

impl DeflatedMatrix {
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.0
    }
}

/// Deflation computed term by term on the permutations.
pub fn deflate(c: &ConvexCombo) -> Result<DeflatedMatrix> {
    if c.degree() < 2 {
        return Err(Error::UnsupportedDegree {
            n: c.degree(),
            reason: "deflation needs n >= 2",
        });
    }
    let d = c.degree() - 1;
    let mut m = DenseMatrix::zeros(d);
    for &(w, p) in c.terms() {
        accumulate_deflated(m.as_mut_slice(), w, &p);
    }
    Ok(DeflatedMatrix(m))
}

/// Deflation of an assembled `n × n` matrix: `B - e·r`.
pub fn deflate_matrix(a: &DenseMatrix) -> Result<DeflatedMatrix> {
    let n = a.dim();
    if n < 2 {
        return Err(Error::UnsupportedDegree {
            n,
            reason: "deflation needs n >= 2",
        });
    }
    let mut m = DenseMatrix::zeros(n - 1);
    for i in 1..n {
        for j in 1..n {
            m[(i - 1, j - 1)] = a[(i, j)] - a[(0, j)];
        }
    }
    Ok(DeflatedMatrix(m))
}
