use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::permgroup::{format_cycles, PairCensus, PairClass, Permutation};
use crate::region::RegionPM;
use crate::spectra::{ScanConfig, Scanner, SourceId};

use super::driver::{run_chunked, ScanOptions, ScanOutcome};
use super::report::{CrossingReport, ReportBuilder};

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PairScanKey<'a> {
    kind: &'static str,
    n: usize,
    classes: usize,
    scan: &'a ScanConfig,
}

/// Scans `t·σ + (1 - t)·τ` for one pair on the mesh of `cfg`, reporting
/// eigenvalues outside `PM_n`.
pub fn scan_pair_exterior(
    scanner: &mut Scanner,
    region: &RegionPM,
    sigma: &Permutation,
    tau: &Permutation,
    cfg: &ScanConfig,
    source: SourceId,
) -> Result<Option<CrossingReport>> {
    let mut builder = ReportBuilder::new();
    let mut exterior: Vec<(Complex64, f64)> = Vec::new();
    let class_index = match source {
        SourceId::Class(c) | SourceId::Tuple(c) => c,
        SourceId::Unspecified => 0,
    };
    scanner.for_each_pair(sigma, tau, cfg.mesh_size(), cfg.filter(), |_, t, vals| {
        exterior.clear();
        exterior.extend(vals.iter().filter_map(|&z| region.exterior_distance(z).map(|d| (z, d))));
        if !exterior.is_empty() {
            builder.record(&[t, 1.0 - t], &exterior, || {
                (class_index, 2, vec![format_cycles(sigma), format_cycles(tau)])
            });
        }
        Ok(())
    })?;
    Ok(builder.finish(source))
}

fn scan_class(scanner: &mut Scanner, region: &RegionPM, class: &PairClass, cfg: &ScanConfig) -> Result<Option<CrossingReport>> {
    scan_pair_exterior(scanner, region, &class.sigma, &class.tau, cfg, SourceId::Class(class.class_index)).map_err(|e| {
        Error::ClassFailed {
            class_index: class.class_index,
            source: Box::new(e),
        }
    })
}

/// Runs the pair scan over every class of the census.
pub fn scan_census(census: &PairCensus, cfg: &ScanConfig) -> Result<Vec<CrossingReport>> {
    Ok(scan_census_with(census, cfg, &ScanOptions::default())?.reports)
}

pub fn scan_census_with(census: &PairCensus, cfg: &ScanConfig, opts: &ScanOptions) -> Result<ScanOutcome> {
    if cfg.tuple_order() != 2 {
        return Err(Error::InvalidConfig(format!(
            "census scans need tuple order 2, got {}",
            cfg.tuple_order()
        )));
    }
    let region = RegionPM::new(census.degree())?;
    let key = PairScanKey {
        kind: "pairs",
        n: census.degree(),
        classes: census.count_total(),
        scan: cfg,
    };
    let classes = census.classes();
    run_chunked(classes.len() as u64, &key, opts, |scanner, i| {
        scan_class(scanner, &region, &classes[i as usize], cfg)
    })
}
