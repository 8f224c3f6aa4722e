//! Permutations of `{0, .., n-1}` stored as inline image arrays.
//!
//! Points are 0-based internally. Every user-facing surface (cycle notation,
//! one-line exports) is 1-based.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported degree.
pub const MAX_DEGREE: usize = 16;

/// A bijection on `{0, .., n-1}`; `images[i]` is the image of `i`.
///
/// Slots past `n` are always zero, so the derived ordering is the
/// lexicographic order of one-line images among permutations of equal degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    n: u8,
    images: [u8; MAX_DEGREE],
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_DEGREE, "degree {n} out of range");
        let mut images = [0u8; MAX_DEGREE];
        for (i, slot) in images.iter_mut().enumerate().take(n) {
            *slot = i as u8;
        }
        Self { n: n as u8, images }
    }

    /// Builds a permutation from 0-based images, validating bijectivity.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::InvalidPermutation(format!(
                "degree {n} outside 1..={MAX_DEGREE}"
            )));
        }
        let mut seen = [false; MAX_DEGREE];
        let mut out = [0u8; MAX_DEGREE];
        for (i, &img) in images.iter().enumerate() {
            if img >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {img} of point {i} is out of range for degree {n}"
                )));
            }
            if seen[img] {
                return Err(Error::InvalidPermutation(format!(
                    "image {img} appears twice"
                )));
            }
            seen[img] = true;
            out[i] = img as u8;
        }
        Ok(Self {
            n: n as u8,
            images: out,
        })
    }

    /// Builds a permutation from a 1-based one-line array.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        let zero_based = one_line
            .iter()
            .map(|&v| {
                v.checked_sub(1).ok_or_else(|| {
                    Error::InvalidPermutation("one-line entries are 1-based".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(&zero_based)
    }

    /// Unchecked constructor for trusted image arrays.
    pub(crate) fn from_raw(n: usize, images: [u8; MAX_DEGREE]) -> Self {
        debug_assert!(images[n..].iter().all(|&v| v == 0));
        Self { n: n as u8, images }
    }

    #[inline]
    pub(crate) fn raw_images(&self) -> [u8; MAX_DEGREE] {
        self.images
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    #[inline]
    pub fn images(&self) -> &[u8] {
        &self.images[..self.n as usize]
    }

    /// 1-based one-line form.
    pub fn one_line(&self) -> Vec<usize> {
        self.images().iter().map(|&v| v as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images().iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut out = [0u8; MAX_DEGREE];
        for (i, &v) in self.images().iter().enumerate() {
            out[v as usize] = i as u8;
        }
        Self::from_raw(self.degree(), out)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_degrees(self, other)?;
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        let mut out = [0u8; MAX_DEGREE];
        for i in 0..self.degree() {
            out[i] = self.images[other.images[i] as usize];
        }
        Self::from_raw(self.degree(), out)
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate(&self, g: &Self) -> Result<Self> {
        check_degrees(self, g)?;
        Ok(self.conjugate_unchecked(g))
    }

    /// `g ∘ self ∘ g⁻¹` computed as `g(i) ↦ g(self(i))`.
    #[inline]
    pub(crate) fn conjugate_unchecked(&self, g: &Self) -> Self {
        let mut out = [0u8; MAX_DEGREE];
        for i in 0..self.degree() {
            out[g.images[i] as usize] = g.images[self.images[i] as usize];
        }
        Self::from_raw(self.degree(), out)
    }

    /// Disjoint cycles including fixed points, each starting at its
    /// smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = [false; MAX_DEGREE];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.apply(i);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut parts: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn is_even(&self) -> bool {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        transpositions % 2 == 0
    }

    /// Position of this permutation in the lexicographic enumeration of
    /// `S_n` (Lehmer code).
    pub fn lex_rank(&self) -> usize {
        let n = self.degree();
        let img = self.images();
        let mut rank = 0usize;
        let mut used: u32 = 0;
        for (i, &v) in img.iter().enumerate() {
            let smaller_unused = (used & ((1u32 << v) - 1)).count_ones() as usize;
            let below = v as usize - smaller_unused;
            rank = rank * (n - i) + below;
            used |= 1 << v;
        }
        rank
    }

    /// Inverse of [`Permutation::lex_rank`].
    pub fn from_lex_rank(n: usize, mut rank: usize) -> Self {
        let mut digits = [0usize; MAX_DEGREE];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut free: Vec<u8> = (0..n as u8).collect();
        let mut out = [0u8; MAX_DEGREE];
        for i in 0..n {
            out[i] = free.remove(digits[i]);
        }
        Self::from_raw(n, out)
    }

    /// Advances to the lexicographic successor in place; returns false when
    /// `self` was the last permutation.
    pub(crate) fn next_lex(&mut self) -> bool {
        let v = &mut self.images[..self.n as usize];
        let n = v.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}

/// Iterates over all of `S_n` in lexicographic order.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut next = Some(Permutation::identity(n));
    std::iter::from_fn(move || {
        let current = next?;
        let mut succ = current;
        next = if succ.next_lex() { Some(succ) } else { None };
        Some(current)
    })
}

pub(crate) fn check_degrees(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch(a.degree(), b.degree()));
    }
    Ok(())
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// A partition of `n` listing disjoint-cycle lengths in descending order.
///
/// Ordering is lexicographic on the descending parts, so `(n)` is the
/// largest type and `(1, .., 1)` the smallest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidCycleType(format!("{parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let n: usize = parts.iter().sum();
        if n > MAX_DEGREE {
            return Err(Error::InvalidCycleType(format!(
                "{parts:?} has degree above {MAX_DEGREE}"
            )));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `(multiplicity m_k)` for each distinct part `k`, descending in `k`.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((k, m)) if *k == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `∏ k^{m_k} m_k!`, the order of the centralizer of any element.
    pub fn centralizer_order(&self) -> u128 {
        self.multiplicities()
            .into_iter()
            .map(|(k, m)| (k as u128).pow(m as u32) * factorial(m))
            .product()
    }

    pub fn class_size(&self) -> u128 {
        factorial(self.degree()) / self.centralizer_order()
    }

    pub fn is_even(&self) -> bool {
        self.parts.iter().map(|p| p - 1).sum::<usize>() % 2 == 0
    }
}

impl PartialOrd for CycleType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CycleType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts.cmp(&other.parts)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// All cycle types of degree `n` in descending order.
pub fn cycle_types(n: usize) -> Vec<CycleType> {
    fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<CycleType>) {
        if remaining == 0 {
            out.push(CycleType {
                parts: prefix.clone(),
            });
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(one_line: &[usize]) -> Permutation {
        Permutation::from_one_line(one_line).unwrap()
    }

    #[test]
    fn compose_examples() {
        let id3 = Permutation::identity(3);
        let c = p(&[2, 3, 1]);
        assert_eq!(id3.compose(&c).unwrap(), c);
        let t = p(&[2, 1]);
        assert_eq!(t.compose(&t).unwrap(), Permutation::identity(2));
        // (123)(123): 1->2->3, 2->3->1, 3->1->2
        assert_eq!(c.compose(&c).unwrap(), p(&[3, 1, 2]));
        assert!(matches!(
            c.compose(&t),
            Err(Error::DegreeMismatch(3, 2))
        ));
    }

    #[test]
    fn conjugate_examples() {
        let t = p(&[2, 1]);
        assert_eq!(t.conjugate(&Permutation::identity(2)).unwrap(), t);
        // (12)(123)(12): images table 1->3, 3->2, 2->1
        let c = p(&[2, 3, 1]);
        let g = p(&[2, 1, 3]);
        assert_eq!(c.conjugate(&g).unwrap(), p(&[3, 1, 2]));
    }

    #[test]
    fn invalid_images_rejected() {
        assert!(Permutation::from_images(&[0, 0]).is_err());
        assert!(Permutation::from_images(&[0, 2]).is_err());
        assert!(Permutation::from_images(&[]).is_err());
        assert!(Permutation::from_one_line(&[0, 1]).is_err());
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(
            Permutation::identity(5).cycle_type().parts(),
            &[1, 1, 1, 1, 1]
        );
        // (145)(23)
        assert_eq!(p(&[4, 3, 2, 5, 1]).cycle_type().parts(), &[3, 2]);
        // (1425)
        assert_eq!(p(&[4, 5, 3, 2, 1]).cycle_type().parts(), &[4, 1]);
    }

    #[test]
    fn lex_rank_roundtrip_and_order() {
        for (r, perm) in all_permutations(5).enumerate() {
            assert_eq!(perm.lex_rank(), r);
            assert_eq!(Permutation::from_lex_rank(5, r), perm);
        }
        assert_eq!(all_permutations(6).count(), 720);
        let v: Vec<_> = all_permutations(4).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cycle_type_enumeration() {
        let counts: Vec<usize> = (1..=10).map(|n| cycle_types(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        let t = cycle_types(5);
        assert!(t.windows(2).all(|w| w[0] > w[1]));
        let total: u128 = t.iter().map(CycleType::class_size).sum();
        assert_eq!(total, 120);
    }

    #[test]
    fn parity() {
        assert!(Permutation::identity(4).is_even());
        assert!(!p(&[2, 1, 3]).is_even());
        assert!(p(&[2, 3, 1]).is_even());
        let evens = all_permutations(5).filter(Permutation::is_even).count();
        assert_eq!(evens, 60);
    }
}
