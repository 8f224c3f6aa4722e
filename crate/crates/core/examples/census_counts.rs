//! Prints census sizes and build times for a range of degrees.

use std::time::Instant;

use dspectra_core::permgroup::{inequivalent_pairs, naive_pair_count};

fn main() {
    let max: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    for n in 2..=max {
        let start = Instant::now();
        let census = inequivalent_pairs(n).expect("census");
        println!(
            "n={n:2} pairs={:>10} naive={:>14} a={} b={} primary={} ({:.2?})",
            census.count_total(),
            naive_pair_count(n),
            census.a_n(),
            census.b_n(),
            census.primary_count(),
            start.elapsed()
        );
    }
}
