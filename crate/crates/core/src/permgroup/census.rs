//! Inequivalent pairs of permutations.
//!
//! Ordered pairs `(σ, τ)` in `S_n × S_n` are equivalent when they are
//! uniformly conjugate, possibly after swapping the two entries. For each
//! pair of cycle types `(i, j)` with `type_i ≥ type_j`, we fix `σ` to the
//! canonical form of type `i` and split the conjugacy class of type `j`
//! into orbits of the centralizer of `σ`. Those orbits are in bijection
//! with the double cosets `C(σ) \ S_n / C(τ)`. Each orbit is represented by
//! its lexicographically least member.
//!
//! Same-type orbits are all kept, including those whose reversal lands in
//! a different orbit, so the class count is exactly `(a(n) + b(n)) / 2`.
//! Each class records the class holding its reversed pair, and
//! classification always answers with the smaller of the two.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classes::{
    canonical_cycle_form, centralizer_generators, conjugation_orbit, conjugator_to_canonical,
};
use super::perm::{all_permutations, check_degrees, cycle_types, factorial, CycleType, Permutation};
use crate::error::{Error, Result};

/// Largest degree accepted by [`inequivalent_pairs`].
pub const MAX_CENSUS_DEGREE: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub class_index: u64,
    pub sigma: Permutation,
    pub tau: Permutation,
    pub type_sigma: CycleType,
    pub type_tau: CycleType,
    /// Class containing `(τ, σ)`; equal to `class_index` unless the types
    /// agree and the reversal is a different orbit.
    pub reverse_class: u64,
}

impl PairClass {
    /// Whether this class is the one [`PairCensus::classify`] reports for
    /// its reversal pair.
    pub fn is_primary(&self) -> bool {
        self.class_index <= self.reverse_class
    }
}

/// JSON-lines record for census export; one-line arrays are 1-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PairClassRecord {
    pub n: usize,
    pub class_index: u64,
    pub sigma: Vec<usize>,
    pub tau: Vec<usize>,
    pub type_sigma: CycleType,
    pub type_tau: CycleType,
    pub reverse_class: u64,
}

impl From<&PairClass> for PairClassRecord {
    fn from(c: &PairClass) -> Self {
        Self {
            n: c.sigma.degree(),
            class_index: c.class_index,
            sigma: c.sigma.one_line(),
            tau: c.tau.one_line(),
            type_sigma: c.type_sigma.clone(),
            type_tau: c.type_tau.clone(),
            reverse_class: c.reverse_class,
        }
    }
}

#[derive(Debug)]
pub struct PairCensus {
    n: usize,
    types: Vec<CycleType>,
    classes: Vec<PairClass>,
    a_n: u128,
    b_n: u128,
    lookup: OnceLock<HashMap<(usize, Permutation), u64>>,
}

impl PairCensus {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[PairClass] {
        &self.classes
    }

    pub fn count_total(&self) -> usize {
        self.classes.len()
    }

    /// Orbits of uniform conjugation on `S_n × S_n`.
    pub fn a_n(&self) -> u128 {
        self.a_n
    }

    /// Orbits whose two components share a cycle type.
    pub fn b_n(&self) -> u128 {
        self.b_n
    }

    /// Cycle types in the census order (descending).
    pub fn types(&self) -> &[CycleType] {
        &self.types
    }

    pub fn class(&self, class_index: u64) -> Option<&PairClass> {
        self.classes.get(class_index as usize)
    }

    /// Classes that are not the non-primary half of a reversal pair.
    pub fn primary_count(&self) -> usize {
        self.classes.iter().filter(|c| c.is_primary()).count()
    }

    /// Classes whose representative pairs have the given types, in either
    /// order.
    pub fn classes_for_types<'a>(
        &'a self,
        a: &'a CycleType,
        b: &'a CycleType,
    ) -> impl Iterator<Item = &'a PairClass> + 'a {
        self.classes.iter().filter(move |c| {
            (&c.type_sigma == a && &c.type_tau == b) || (&c.type_sigma == b && &c.type_tau == a)
        })
    }

    fn type_index(&self, t: &CycleType) -> usize {
        self.types
            .iter()
            .position(|x| x == t)
            .expect("cycle type of matching degree")
    }

    fn lookup(&self) -> &HashMap<(usize, Permutation), u64> {
        self.lookup.get_or_init(|| {
            self.classes
                .iter()
                .map(|c| ((self.type_index(&c.type_sigma), c.tau), c.class_index))
                .collect()
        })
    }

    /// Index of the class containing `(σ, τ)`, allowing reversal.
    pub fn classify(&self, sigma: &Permutation, tau: &Permutation) -> Result<u64> {
        check_degrees(sigma, tau)?;
        if sigma.degree() != self.n {
            return Err(Error::DegreeMismatch(sigma.degree(), self.n));
        }
        let (ti, tj) = (sigma.cycle_type(), tau.cycle_type());
        let (first, second, type_first) = if ti >= tj {
            (sigma, tau, ti)
        } else {
            (tau, sigma, tj)
        };
        let canon = canonical_cycle_form(&type_first);
        let gens = centralizer_generators(&canon)?;

        let reduce = |a: &Permutation, b: &Permutation| -> Permutation {
            let g = conjugator_to_canonical(a);
            let moved = b.conjugate_unchecked(&g);
            conjugation_orbit(&moved, &gens)
                .into_iter()
                .min()
                .expect("orbit contains its seed")
        };
        let mut key = reduce(first, second);
        if first.cycle_type() == second.cycle_type() {
            key = key.min(reduce(second, first));
        }
        let i = self.type_index(&type_first);
        let index = self
            .lookup()
            .get(&(i, key))
            .copied()
            .ok_or_else(|| Error::InvalidPermutation(format!("pair ({sigma}, {tau}) not in census")))?;
        Ok(index.min(self.classes[index as usize].reverse_class))
    }

    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for c in &self.classes {
            serde_json::to_writer(&mut w, &PairClassRecord::from(c))?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Reads census records back; used to check exports.
pub fn read_census_jsonl<R: BufRead>(r: R) -> Result<Vec<PairClassRecord>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

struct Buckets {
    /// Members of each cycle type, lexicographically sorted.
    members: Vec<Vec<Permutation>>,
    /// Position of each permutation (by lex rank) inside its type bucket.
    position: Vec<u32>,
}

impl Buckets {
    fn build(n: usize, types: &[CycleType]) -> Self {
        let index: HashMap<&CycleType, usize> =
            types.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let total = factorial(n) as usize;
        let mut members = vec![Vec::new(); types.len()];
        let mut position = vec![0u32; total];
        for (rank, p) in all_permutations(n).enumerate() {
            let t = index[&p.cycle_type()];
            position[rank] = members[t].len() as u32;
            members[t].push(p);
        }
        Self { members, position }
    }
}

struct Block {
    /// Orbit representatives in key order.
    reps: Vec<Permutation>,
    /// Orbit holding the reversed pair, per orbit.
    reverse: Vec<usize>,
}

fn enumerate_block(buckets: &Buckets, sigma: &Permutation, gens: &[Permutation], j: usize, same: bool) -> Block {
    const UNSEEN: u32 = u32::MAX;
    let members = &buckets.members[j];
    let mut label = vec![UNSEEN; members.len()];
    let mut reps: Vec<usize> = Vec::new();
    let mut stack = Vec::new();
    // Members are in lex order, so the first unseen member of an orbit is
    // its least element.
    for (idx, tau) in members.iter().enumerate() {
        if label[idx] != UNSEEN {
            continue;
        }
        let orbit = reps.len() as u32;
        reps.push(idx);
        label[idx] = orbit;
        stack.push(*tau);
        while let Some(x) = stack.pop() {
            for g in gens {
                let y = x.conjugate_unchecked(g);
                let pos = buckets.position[y.lex_rank()] as usize;
                if label[pos] == UNSEEN {
                    label[pos] = orbit;
                    stack.push(y);
                }
            }
        }
    }

    let reverse = (0..reps.len())
        .map(|orbit| {
            if !same {
                return orbit;
            }
            let tau = members[reps[orbit]];
            let h = conjugator_to_canonical(&tau);
            let back = sigma.conjugate_unchecked(&h);
            label[buckets.position[back.lex_rank()] as usize] as usize
        })
        .collect();
    Block {
        reps: reps.into_iter().map(|idx| members[idx]).collect(),
        reverse,
    }
}

/// One representative per class of ordered pairs under uniform conjugation
/// and reversal.
pub fn inequivalent_pairs(n: usize) -> Result<PairCensus> {
    if n < 2 {
        return Err(Error::UnsupportedDegree {
            n,
            reason: "census needs n >= 2",
        });
    }
    if n > MAX_CENSUS_DEGREE {
        return Err(Error::UnsupportedDegree {
            n,
            reason: "census degree capped at 12",
        });
    }
    let types = cycle_types(n);
    let buckets = Buckets::build(n, &types);
    let sigmas: Vec<Permutation> = types.iter().map(canonical_cycle_form).collect();
    let gens: Vec<Vec<Permutation>> = sigmas
        .iter()
        .map(|s| centralizer_generators(s).expect("canonical by construction"))
        .collect();

    let tasks: Vec<(usize, usize)> = (0..types.len())
        .flat_map(|i| (i..types.len()).map(move |j| (i, j)))
        .collect();
    let blocks: Vec<Block> = tasks
        .par_iter()
        .map(|&(i, j)| enumerate_block(&buckets, &sigmas[i], &gens[i], j, i == j))
        .collect();

    let mut classes = Vec::new();
    let (mut a_n, mut b_n) = (0u128, 0u128);
    for (&(i, j), block) in tasks.iter().zip(blocks) {
        let orbits = block.reps.len() as u128;
        if i == j {
            a_n += orbits;
            b_n += orbits;
        } else {
            a_n += 2 * orbits;
        }
        let base = classes.len() as u64;
        for (tau, rev) in block.reps.into_iter().zip(block.reverse) {
            classes.push(PairClass {
                class_index: classes.len() as u64,
                sigma: sigmas[i],
                tau,
                type_sigma: types[i].clone(),
                type_tau: types[j].clone(),
                reverse_class: base + rev as u64,
            });
        }
    }
    Ok(PairCensus {
        n,
        types,
        classes,
        a_n,
        b_n,
        lookup: OnceLock::new(),
    })
}

/// `p(n) · n!`, the pair count before the orbit reduction.
pub fn naive_pair_count(n: usize) -> u128 {
    cycle_types(n).len() as u128 * factorial(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::parse_cycles;

    #[test]
    fn small_counts() {
        let expected = [(2, 3), (3, 8), (4, 28), (5, 98), (6, 518)];
        for (n, count) in expected {
            let c = inequivalent_pairs(n).unwrap();
            assert_eq!(c.count_total(), count, "n = {n}");
            assert_eq!((c.a_n() + c.b_n()) % 2, 0);
            assert_eq!((c.a_n() + c.b_n()) / 2, count as u128);
        }
    }

    #[test]
    fn burnside_agrees_with_orbit_count() {
        // orbits of S_n on S_n × S_n = Σ over classes of |C(g)|
        for n in 2..=7 {
            let burnside: u128 = cycle_types(n).iter().map(CycleType::centralizer_order).sum();
            assert_eq!(inequivalent_pairs(n).unwrap().a_n(), burnside, "n = {n}");
        }
    }

    #[test]
    fn rejects_small_degree() {
        assert!(inequivalent_pairs(1).is_err());
        assert!(inequivalent_pairs(0).is_err());
    }

    #[test]
    fn census_invariants() {
        let c = inequivalent_pairs(5).unwrap();
        for (k, class) in c.classes().iter().enumerate() {
            assert_eq!(class.class_index as usize, k);
            assert_eq!(class.sigma, canonical_cycle_form(&class.type_sigma));
            assert_eq!(class.tau.cycle_type(), class.type_tau);
            assert!(class.type_sigma >= class.type_tau);
            let got = c.classify(&class.sigma, &class.tau).unwrap();
            assert_eq!(got, class.class_index.min(class.reverse_class));
            let partner = c.class(class.reverse_class).unwrap();
            assert_eq!(partner.reverse_class, class.class_index);
        }
        // two same-type orbit pairs at n = 5 are reversals of each other
        assert_eq!(c.primary_count(), 96);
        assert_eq!(naive_pair_count(5), 840);
    }

    #[test]
    fn classify_reversal_and_degenerate() {
        let c = inequivalent_pairs(5).unwrap();
        let s = parse_cycles("(145)(23)", 5).unwrap();
        let t = parse_cycles("(1425)", 5).unwrap();
        assert_eq!(c.classify(&s, &t).unwrap(), c.classify(&t, &s).unwrap());
        let same = c.classify(&s, &s).unwrap();
        let class = c.class(same).unwrap();
        assert_eq!(class.type_sigma, class.type_tau);
        assert!(c.classify(&Permutation::identity(4), &Permutation::identity(4)).is_err());
    }

    #[test]
    fn jsonl_roundtrip() {
        let c = inequivalent_pairs(4).unwrap();
        let mut buf = Vec::new();
        c.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().next().unwrap().contains("\"classIndex\":0"));
        let back = read_census_jsonl(&buf[..]).unwrap();
        assert_eq!(back.len(), 28);
        for (r, class) in back.iter().zip(c.classes()) {
            assert_eq!(r, &PairClassRecord::from(class));
        }
    }
}
