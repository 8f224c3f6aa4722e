//! Counterexample scans over the pair census and k-tuples, eigenpath
//! tracking, crossing refinement and hull-spectrum experiments.

mod driver;
mod eigenpath;
mod hull;
mod pairs;
mod report;
mod tuples;

pub use driver::{config_hash, ScanOptions, ScanOutcome, WORKERS_ENV};
pub use eigenpath::{
    min_cost_assignment, refine_crossing, track_eigenpath, BranchHint, EigenPaths,
    RefinedInterval, AMBIGUITY_TOL, REFINE_GRID,
};
pub use hull::{
    convex_hull, hull_distance, hull_inradius, hull_spectrum_scan, hull_spectrum_scan_with, CloudPoint,
    HullOptions, HullReport, HullScan, HullWitness, RadialEnvelope, PAIR_REFINEMENT,
};
pub use pairs::{scan_census, scan_census_with, scan_pair_exterior};
pub use report::CrossingReport;
pub use tuples::{
    scan_tuple_exterior, scan_tuples, scan_tuples_with, Sampling, Subgroup, TupleSpace,
    MAX_TUPLE_DEGREE,
};
