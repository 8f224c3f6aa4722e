use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permgroup::{parse_cycles, Permutation};
use crate::region::RegionPM;
use crate::spectra::{EigenPoint, Scanner};

/// Exterior points found for one class or tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CrossingReport {
    pub class_index: u64,
    pub tuple_order: usize,
    /// The combined permutations, in cycle notation.
    pub generators: Vec<String>,
    pub violating_weights: Vec<Vec<f64>>,
    pub max_violation: f64,
    pub witness: EigenPoint,
}

impl CrossingReport {
    pub fn generator_perms(&self, n: usize) -> Result<Vec<Permutation>> {
        self.generators.iter().map(|s| parse_cycles(s, n)).collect()
    }

    /// Rebuilds the witness matrix and returns the nearest eigenvalue with
    /// its signed distance.
    pub fn recompute_witness(&self, region: &RegionPM) -> Result<(Complex64, f64)> {
        let perms = self.generator_perms(region.degree())?;
        let mut scanner = Scanner::new();
        let vals = scanner.eigenvalues_at(&perms, &self.witness.weights)?;
        let best = vals
            .iter()
            .copied()
            .min_by(|a, b| {
                (a - self.witness.value)
                    .norm()
                    .total_cmp(&(b - self.witness.value).norm())
            })
            .ok_or_else(|| Error::InvalidConfig("empty spectrum".into()))?;
        Ok((best, region.signed_distance(best)))
    }
}

/// Accumulates exterior points for one scan unit.
#[derive(Debug)]
pub(crate) struct ReportBuilder {
    report: Option<CrossingReport>,
}

impl ReportBuilder {
    pub fn new() -> Self {
        Self { report: None }
    }

    /// Records the exterior eigenvalues at one weight vector.
    pub fn record<F>(&mut self, weights: &[f64], exterior: &[(Complex64, f64)], init: F)
    where
        F: FnOnce() -> (u64, usize, Vec<String>),
    {
        let Some(&(value, dist)) = exterior.iter().max_by(|a, b| a.1.total_cmp(&b.1)) else {
            return;
        };
        let r = self.report.get_or_insert_with(|| {
            let (class_index, tuple_order, generators) = init();
            CrossingReport {
                class_index,
                tuple_order,
                generators,
                violating_weights: Vec::new(),
                max_violation: f64::NEG_INFINITY,
                witness: EigenPoint {
                    value,
                    source: crate::spectra::SourceId::Unspecified,
                    weights: Vec::new(),
                },
            }
        });
        r.violating_weights.push(weights.to_vec());
        if dist > r.max_violation {
            r.max_violation = dist;
            r.witness.value = value;
            r.witness.weights = weights.to_vec();
        }
    }

    pub fn finish(self, source: crate::spectra::SourceId) -> Option<CrossingReport> {
        self.report.map(|mut r| {
            r.witness.source = source;
            r
        })
    }
}
