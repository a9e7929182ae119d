//! Python bindings: samplers, reshaping functions, sample metrics, bound
//! checks and benchmarks.

use oneshot::benchmark::{self, BenchGrid, FunctionId, NamedMethod, Prior};
use oneshot::metrics::{self, DiscrepancyMethod};
use oneshot::reshaping;
use oneshot::{RngSeed, Sample, SamplerSpec, Target, UnitSample};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn to_py(e: oneshot::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type Rows = Vec<Vec<f64>>;

/// A parsed sampling method, e.g. `Sampler("CauchyRctg0.55ScrHammersley")`.
#[pyclass(name = "Sampler", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PySampler {
    spec: SamplerSpec,
}

#[pymethods]
impl PySampler {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(Self { spec: SamplerSpec::parse(name).map_err(to_py)? })
    }

    /// Canonical method name; parses back to the same sampler.
    #[getter]
    fn name(&self) -> String {
        self.spec.canonical_name()
    }

    /// `n` points in `[0, 1)^d`, as a list of rows.
    fn cube(&self, n: usize, d: usize, seed: u64) -> PyResult<Rows> {
        Ok(self.spec.generate_cube(n, d, RngSeed(seed)).map_err(to_py)?.to_rows())
    }

    /// `n` points in `R^d`, as a list of rows.
    fn unbounded(&self, n: usize, d: usize, seed: u64) -> PyResult<Rows> {
        Ok(self.spec.generate_unbounded(n, d, RngSeed(seed)).map_err(to_py)?.to_rows())
    }

    fn __repr__(&self) -> String {
        format!("Sampler({:?})", self.spec.canonical_name())
    }
}

/// Points of a named method; `unbounded` converts them to `R^d`.
#[pyfunction]
#[pyo3(signature = (method, n, d, seed, unbounded = false))]
fn sample(method: &str, n: usize, d: usize, seed: u64, unbounded: bool) -> PyResult<Rows> {
    let target = if unbounded { Target::Unbounded } else { Target::UnitCube };
    let spec = SamplerSpec::parse(method).map_err(to_py)?.with_target(target);
    Ok(match spec.generate(n, d, RngSeed(seed)).map_err(to_py)? {
        Sample::Cube(s) => s.to_rows(),
        Sample::Real(r) => r.to_rows(),
    })
}

/// Canonical form of a method name (accepts the spaced table spellings).
#[pyfunction]
fn canonical_name(method: &str) -> PyResult<String> {
    Ok(SamplerSpec::parse(method).map_err(to_py)?.canonical_name())
}

#[pyfunction]
fn normal_inv_cdf(u: f64) -> PyResult<f64> {
    reshaping::normal_inv_cdf(u).map_err(to_py)
}

#[pyfunction]
fn cauchy_inv_cdf(u: f64) -> PyResult<f64> {
    reshaping::cauchy_inv_cdf(u).map_err(to_py)
}

#[pyfunction]
fn normal_cdf(x: f64) -> f64 {
    reshaping::normal_cdf(x)
}

#[pyfunction]
fn meta_lambda(budget: f64, dimension: f64) -> PyResult<f64> {
    reshaping::meta_lambda(budget, dimension).map_err(to_py)
}

/// Star discrepancy of points in `[0, 1)^d`; exact when `boxes` is None.
#[pyfunction]
#[pyo3(signature = (points, boxes = None, seed = 0))]
fn star_discrepancy(points: Rows, boxes: Option<usize>, seed: u64) -> PyResult<f64> {
    let sample = UnitSample::from_rows(&points).map_err(to_py)?;
    let method = match boxes {
        None => DiscrepancyMethod::ExactSmall,
        Some(boxes) => DiscrepancyMethod::MonteCarlo { boxes, seed: RngSeed(seed) },
    };
    Ok(metrics::star_discrepancy(&sample, method).map_err(to_py)?.value)
}

/// Euclidean distance from `x` to the nearest point.
#[pyfunction]
fn min_distance(x: Vec<f64>, points: Rows) -> PyResult<f64> {
    metrics::min_distance(&x, points.iter().map(Vec::as_slice)).map_err(to_py)
}

/// Default bound-check suite, one `key=value` line per check.
#[pyfunction]
#[pyo3(signature = (seed, replicas = None))]
fn check_bounds(py: Python<'_>, seed: u64, replicas: Option<usize>) -> PyResult<Vec<String>> {
    let reports = py.detach(|| metrics::default_bound_suite(RngSeed(seed), replicas)).map_err(to_py)?;
    Ok(reports.iter().map(|r| r.to_line()).collect())
}

/// Runs a benchmark; returns `(results_csv, win_table_text or None)`.
#[pyfunction]
#[pyo3(name = "bench", signature = (methods, dims, budgets, replicas, seed, functions = None, prior = "NormalStd"))]
#[allow(clippy::too_many_arguments)]
fn run_bench(
    py: Python<'_>,
    methods: Vec<String>,
    dims: Vec<(usize, usize)>,
    budgets: Vec<usize>,
    replicas: usize,
    seed: u64,
    functions: Option<Vec<String>>,
    prior: &str,
) -> PyResult<(String, Option<String>)> {
    let methods = methods.iter().map(|m| NamedMethod::parse(m)).collect::<Result<Vec<_>, _>>().map_err(to_py)?;
    let functions = match functions {
        None => FunctionId::ALL.to_vec(),
        Some(f) => f.iter().map(|s| s.parse()).collect::<Result<Vec<_>, _>>().map_err(to_py)?,
    };
    let grid = BenchGrid { dims, budgets, functions, prior: prior.parse::<Prior>().map_err(to_py)? };
    let out = py.detach(|| benchmark::run_benchmark(&methods, &grid, replicas, RngSeed(seed))).map_err(to_py)?;
    let csv = benchmark::results_to_csv(&out.results).map_err(to_py)?;
    Ok((csv, out.table.map(|t| t.to_text())))
}

#[pymodule]
fn oneshot_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds every class, function and constant to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySampler>()?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_name, m)?)?;
    m.add_function(wrap_pyfunction!(normal_inv_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(cauchy_inv_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(normal_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(meta_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(star_discrepancy, m)?)?;
    m.add_function(wrap_pyfunction!(min_distance, m)?)?;
    m.add_function(wrap_pyfunction!(check_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(run_bench, m)?)?;
    m.add("DEFAULT_METHODS", oneshot::method::DEFAULT_METHODS.to_vec())?;
    Ok(())
}
