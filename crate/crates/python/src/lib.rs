//! Python bindings for `dspectra_core`.

use dspectra_core::permgroup::{self, PairCensus};
use dspectra_core::region::RegionPM;
use dspectra_core::search::{self, BranchHint, Sampling, ScanOptions, Subgroup};
use dspectra_core::spectra::{self, ScanConfig, Scanner};
use dspectra_core::Error;
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

create_exception!(dspectra, NoCrossingError, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NoSignChange => NoCrossingError::new_err(e.to_string()),
        Error::Io(_) | Error::NoConvergence { .. } | Error::ClassFailed { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_value(py: Python<'_>, v: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn sampling(samples: Option<u64>, seed: Option<u64>) -> PyResult<Sampling> {
    match (samples, seed) {
        (None, _) => Ok(Sampling::Exhaustive),
        (Some(count), Some(seed)) => Ok(Sampling::Random { count, seed }),
        (Some(_), None) => Err(PyValueError::new_err("seed is required with samples")),
    }
}

fn options(workers: Option<usize>) -> ScanOptions {
    ScanOptions {
        workers,
        ..Default::default()
    }
}

/// A permutation of `{1, ..., n}`.
#[pyclass(name = "Permutation", frozen, from_py_object, eq, hash, module = "dspectra")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPermutation(permgroup::Permutation);

#[pymethods]
impl PyPermutation {
    /// Parse cycle notation such as `"(145)(23)"`.
    #[staticmethod]
    fn parse(text: &str, n: usize) -> PyResult<Self> {
        permgroup::parse_cycles(text, n).map(Self).map_err(to_py)
    }

    /// Build from one-line notation with 1-based images.
    #[staticmethod]
    fn from_one_line(images: Vec<usize>) -> PyResult<Self> {
        permgroup::Permutation::from_one_line(&images).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn identity(n: usize) -> Self {
        Self(permgroup::Permutation::identity(n))
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn one_line(&self) -> Vec<usize> {
        self.0.one_line()
    }

    fn cycle_type(&self) -> Vec<usize> {
        self.0.cycle_type().parts().to_vec()
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    /// `self * other`, applying `other` first.
    fn compose(&self, other: &Self) -> PyResult<Self> {
        self.0.compose(&other.0).map(Self).map_err(to_py)
    }

    fn conjugate(&self, g: &Self) -> PyResult<Self> {
        self.0.conjugate(&g.0).map(Self).map_err(to_py)
    }

    fn __str__(&self) -> String {
        permgroup::format_cycles(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Permutation.parse({:?}, {})", permgroup::format_cycles(&self.0), self.0.degree())
    }
}

fn perms(list: &[PyRef<'_, PyPermutation>]) -> Vec<permgroup::Permutation> {
    list.iter().map(|p| p.0.clone()).collect()
}

/// Simultaneous conjugacy classes of pairs in `S_n`.
#[pyclass(name = "PairCensus", frozen, module = "dspectra")]
struct PyPairCensus(PairCensus);

#[pymethods]
impl PyPairCensus {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        permgroup::inequivalent_pairs(n).map(Self).map_err(to_py)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn __len__(&self) -> usize {
        self.0.classes().len()
    }

    /// `(class_index, sigma, tau, reverse_class)` for every class.
    fn classes(&self) -> Vec<(u64, PyPermutation, PyPermutation, u64)> {
        self.0
            .classes()
            .iter()
            .map(|c| (c.class_index, PyPermutation(c.sigma.clone()), PyPermutation(c.tau.clone()), c.reverse_class))
            .collect()
    }

    fn classify(&self, sigma: &PyPermutation, tau: &PyPermutation) -> PyResult<u64> {
        self.0.classify(&sigma.0, &tau.0).map_err(to_py)
    }

    /// Scan every class along its segment and return crossing reports.
    #[pyo3(signature = (mesh=1001, workers=None))]
    fn scan(&self, py: Python<'_>, mesh: usize, workers: Option<usize>) -> PyResult<Vec<Py<PyAny>>> {
        let cfg = ScanConfig::pairs(mesh).map_err(to_py)?;
        let outcome = py
            .detach(|| search::scan_census_with(&self.0, &cfg, &options(workers)))
            .map_err(to_py)?;
        outcome.reports.iter().map(|r| json_value(py, r)).collect()
    }
}

/// The region `PM_n`, a union of regular polygons.
#[pyclass(name = "Region", frozen, module = "dspectra")]
struct PyRegion(RegionPM);

#[pymethods]
impl PyRegion {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        RegionPM::new(n).map(Self).map_err(to_py)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    #[getter]
    fn inradius(&self) -> f64 {
        self.0.inradius()
    }

    fn contains(&self, z: Complex64) -> bool {
        self.0.contains(z)
    }

    /// Negative inside, positive outside.
    fn signed_distance(&self, z: Complex64) -> f64 {
        self.0.signed_distance(z)
    }

    fn polygon(&self, k: usize) -> PyResult<Vec<Complex64>> {
        if k < 1 || k > self.0.degree() {
            return Err(PyValueError::new_err(format!("k must be in 1..={}", self.0.degree())));
        }
        Ok(self.0.polygon(k).to_vec())
    }
}

/// Eigenvalues of the deflated matrix of `sum w_i P_i`.
#[pyfunction]
fn deflated_eigenvalues(perms_: Vec<PyRef<'_, PyPermutation>>, weights: Vec<f64>) -> PyResult<Vec<Complex64>> {
    let ps = perms(&perms_);
    let mut scanner = Scanner::new();
    scanner.eigenvalues_at(&ps, &weights).map(<[_]>::to_vec).map_err(to_py)
}

/// `(weights, eigenvalue)` for each mesh point along `t sigma + (1-t) tau`.
#[pyfunction]
#[pyo3(signature = (sigma, tau, mesh=1001))]
fn scan_pair(sigma: &PyPermutation, tau: &PyPermutation, mesh: usize) -> PyResult<Vec<(Vec<f64>, Complex64)>> {
    let cfg = ScanConfig::pairs(mesh).map_err(to_py)?;
    let pts = spectra::scan_pair(&sigma.0, &tau.0, &cfg).map_err(to_py)?;
    Ok(pts.into_iter().map(|p| (p.weights, p.value)).collect())
}

/// Scan `k`-tuples of `S_n` and return crossing reports.
#[pyfunction]
#[pyo3(signature = (n, k, mesh=40, samples=None, seed=None, workers=None))]
fn scan_tuples(
    py: Python<'_>,
    n: usize,
    k: usize,
    mesh: usize,
    samples: Option<u64>,
    seed: Option<u64>,
    workers: Option<usize>,
) -> PyResult<Vec<Py<PyAny>>> {
    let cfg = ScanConfig::new(mesh, k).map_err(to_py)?;
    let sampling = sampling(samples, seed)?;
    let outcome = py
        .detach(|| search::scan_tuples_with(Subgroup::Symmetric, n, &cfg, sampling, &options(workers)))
        .map_err(to_py)?;
    outcome.reports.iter().map(|r| json_value(py, r)).collect()
}

/// Bracket the interval of `t` where the spectrum leaves the region.
#[pyfunction]
#[pyo3(signature = (sigma, tau, tol=1e-9, branch=None))]
fn refine(py: Python<'_>, sigma: &PyPermutation, tau: &PyPermutation, tol: f64, branch: Option<usize>) -> PyResult<(f64, f64)> {
    let hint = branch.map_or(BranchHint::MaxViolation, BranchHint::Index);
    let iv = py
        .detach(|| search::refine_crossing(&sigma.0, &tau.0, hint, tol))
        .map_err(to_py)?;
    Ok((iv.t_low, iv.t_high))
}

/// Compare tuple spectra of a subgroup against the hull of its pair spectra.
#[pyfunction]
#[pyo3(signature = (group, n, k=3, mesh=40, samples=None, seed=None))]
fn hull_scan(
    py: Python<'_>,
    group: &str,
    n: usize,
    k: usize,
    mesh: usize,
    samples: Option<u64>,
    seed: Option<u64>,
) -> PyResult<Py<PyAny>> {
    let group: Subgroup = group.parse().map_err(to_py)?;
    let sampling = sampling(samples, seed)?;
    let report = py
        .detach(|| search::hull_spectrum_scan(group, n, k, mesh, sampling))
        .map_err(to_py)?;
    json_value(py, &report)
}

#[pymodule]
fn dspectra(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPermutation>()?;
    m.add_class::<PyPairCensus>()?;
    m.add_class::<PyRegion>()?;
    m.add_function(wrap_pyfunction!(deflated_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(scan_pair, m)?)?;
    m.add_function(wrap_pyfunction!(scan_tuples, m)?)?;
    m.add_function(wrap_pyfunction!(refine, m)?)?;
    m.add_function(wrap_pyfunction!(hull_scan, m)?)?;
    m.add("NoCrossingError", m.py().get_type::<NoCrossingError>())?;
    m.add("EXTERIOR_TOL", dspectra_core::region::EXTERIOR_TOL)?;
    Ok(())
}
