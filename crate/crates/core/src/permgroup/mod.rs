//! Permutation arithmetic and the reduction of permutation pairs to
//! inequivalent classes.

mod census;
mod classes;
mod notation;
mod perm;

pub use census::{
    inequivalent_pairs, naive_pair_count, read_census_jsonl, PairCensus, PairClass,
    PairClassRecord, MAX_CENSUS_DEGREE,
};
pub use classes::{
    canonical_cycle_form, centralizer_generators, conjugacy_class, conjugation_orbit,
    conjugator_to_canonical, generated_order, is_canonical,
};
pub use notation::{format_cycles, parse_cycles, DegreeCycles};
pub(crate) use perm::check_degrees;
pub use perm::{all_permutations, cycle_types, factorial, CycleType, Permutation, MAX_DEGREE};

/// Free-function form of [`Permutation::compose`].
pub fn compose(p: &Permutation, q: &Permutation) -> crate::Result<Permutation> {
    p.compose(q)
}

/// Free-function form of [`Permutation::conjugate`]: `g p g⁻¹`.
pub fn conjugate(p: &Permutation, g: &Permutation) -> crate::Result<Permutation> {
    p.conjugate(g)
}

/// Class index of `(σ, τ)` in `census`, allowing reversal.
pub fn classify_pair(sigma: &Permutation, tau: &Permutation, census: &PairCensus) -> crate::Result<u64> {
    census.classify(sigma, tau)
}
