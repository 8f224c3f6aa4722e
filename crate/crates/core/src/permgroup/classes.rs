//! Canonical cycle forms, centralizers and conjugacy classes in `S_n`.

use std::collections::HashSet;

use super::perm::{all_permutations, CycleType, Permutation, MAX_DEGREE};
use crate::error::{Error, Result};

/// The permutation whose cycles occupy consecutive index blocks in
/// descending length order, each block cycled forward.
pub fn canonical_cycle_form(t: &CycleType) -> Permutation {
    let n = t.degree();
    let mut images = [0u8; MAX_DEGREE];
    let mut start = 0;
    for &len in t.parts() {
        for k in 0..len {
            images[start + k] = (start + (k + 1) % len) as u8;
        }
        start += len;
    }
    Permutation::from_raw(n, images)
}

pub fn is_canonical(p: &Permutation) -> bool {
    *p == canonical_cycle_form(&p.cycle_type())
}

/// Some `g` with `g p g⁻¹` equal to the canonical form of `p`'s cycle type.
pub fn conjugator_to_canonical(p: &Permutation) -> Permutation {
    let mut cycles = p.cycles();
    // stable: equal-length cycles keep smallest-point order
    cycles.sort_by(|a, b| b.len().cmp(&a.len()));
    let mut images = [0u8; MAX_DEGREE];
    let mut slot = 0u8;
    for cycle in &cycles {
        for &pt in cycle {
            images[pt] = slot;
            slot += 1;
        }
    }
    Permutation::from_raw(p.degree(), images)
}

/// Generators of the centralizer of a canonical cycle form: one rotation
/// per nontrivial block and one swap per adjacent pair of equal-length
/// blocks.
pub fn centralizer_generators(p: &Permutation) -> Result<Vec<Permutation>> {
    if !is_canonical(p) {
        return Err(Error::NotCanonical(p.to_string()));
    }
    let n = p.degree();
    let parts = p.cycle_type().parts().to_vec();
    let mut gens = Vec::new();
    let mut start = 0;
    for (b, &len) in parts.iter().enumerate() {
        if len > 1 {
            let mut images = identity_images(n);
            for k in 0..len {
                images[start + k] = (start + (k + 1) % len) as u8;
            }
            gens.push(Permutation::from_raw(n, images));
        }
        if b + 1 < parts.len() && parts[b + 1] == len {
            let mut images = identity_images(n);
            for k in 0..len {
                images[start + k] = (start + len + k) as u8;
                images[start + len + k] = (start + k) as u8;
            }
            gens.push(Permutation::from_raw(n, images));
        }
        start += len;
    }
    if gens.is_empty() {
        gens.push(Permutation::identity(n));
    }
    Ok(gens)
}

fn identity_images(n: usize) -> [u8; MAX_DEGREE] {
    Permutation::identity(n).raw_images()
}

/// Order of the group generated by `gens` (breadth-first closure).
pub fn generated_order(gens: &[Permutation]) -> usize {
    let Some(first) = gens.first() else {
        return 1;
    };
    let id = Permutation::identity(first.degree());
    let mut seen = HashSet::from([id]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.compose_unchecked(&x);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

/// Orbit of `x` under conjugation by the group generated by `gens`.
pub fn conjugation_orbit(x: &Permutation, gens: &[Permutation]) -> Vec<Permutation> {
    let mut seen = HashSet::from([*x]);
    let mut out = vec![*x];
    let mut i = 0;
    while i < out.len() {
        let y = out[i];
        for g in gens {
            let z = y.conjugate_unchecked(g);
            if seen.insert(z) {
                out.push(z);
            }
        }
        i += 1;
    }
    out
}

/// Every permutation of cycle type `t`, in lexicographic order.
pub fn conjugacy_class(t: &CycleType) -> impl Iterator<Item = Permutation> + '_ {
    all_permutations(t.degree()).filter(move |p| p.cycle_type() == *t)
}
