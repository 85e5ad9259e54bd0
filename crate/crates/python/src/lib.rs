//! Python bindings. Group elements are plain integers (bit patterns), an
//! infinite length is returned as `None`, and rate bounds and schedules are
//! selected by name.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use davenport_core::counting::{self, RatioMode};
use davenport_core::gf2::{self, DistanceStrategy, GF2Matrix, GroupElement, WorkLimits};
use davenport_core::rate::{self, RateBoundKind};
use davenport_core::recursion::{self, Schedule};
use davenport_core::zerosum::{self, OracleLimits, Sequence};
use davenport_core::{Error, Length};

fn py_err(e: Error) -> PyErr {
    if e.is_computation_failure() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn kind(name: &str) -> PyResult<RateBoundKind> {
    name.parse().map_err(py_err)
}

fn schedule(name: &str) -> PyResult<Schedule> {
    name.parse().map_err(py_err)
}

fn length(l: Length) -> Option<u64> {
    l.finite()
}

fn oracle_limits(max_rank: Option<usize>, budget: Option<u64>) -> OracleLimits {
    let mut limits = OracleLimits::default();
    if let Some(r) = max_rank {
        limits.davenport_max_rank = r;
        limits.sconst_max_rank = r;
    }
    if let Some(b) = budget {
        limits.node_budget = b;
    }
    limits
}

/// Parity-check matrix over GF(2), stored by columns.
#[pyclass(name = "GF2Matrix", frozen)]
struct PyMatrix(GF2Matrix);

#[pymethods]
impl PyMatrix {
    /// Columns are given as bit patterns of height `rows`.
    #[new]
    fn new(rows: usize, columns: Vec<u64>) -> PyResult<Self> {
        GF2Matrix::new(rows, columns).map(Self).map_err(py_err)
    }

    /// Parses the 0/1 row dump produced by `str()`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(py_err)
    }

    /// Random full-rank `r x n` matrix.
    #[staticmethod]
    fn random(r: usize, n: usize, seed: u64) -> PyResult<Self> {
        gf2::random_parity_matrix(r, n, seed).map(Self).map_err(py_err)
    }

    #[getter]
    fn rows(&self) -> usize {
        self.0.rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.0.cols()
    }

    fn columns(&self) -> Vec<u64> {
        self.0.columns().map(GroupElement::bits).collect()
    }

    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn null_space_basis(&self) -> PyResult<Vec<u64>> {
        self.0.null_space_basis().map_err(py_err)
    }

    /// Minimum distance of the code with this parity-check matrix.
    #[pyo3(signature = (strategy = "auto"))]
    fn min_distance(&self, strategy: &str) -> PyResult<Option<u64>> {
        let strategy = match strategy {
            "auto" => DistanceStrategy::Auto,
            "null-space" => DistanceStrategy::NullSpace,
            "column-subsets" => DistanceStrategy::ColumnSubsets,
            other => return Err(PyValueError::new_err(format!("unknown strategy {other:?}"))),
        };
        gf2::min_distance_with(&self.0, strategy, &WorkLimits::default()).map(length).map_err(py_err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("GF2Matrix(rows={}, cols={})", self.0.rows(), self.0.cols())
    }
}

#[pyclass(name = "CoefficientRow", frozen, get_all)]
struct PyCoefficientRow {
    j: usize,
    increment: f64,
    cumulative: f64,
    rate_bound: Option<String>,
    residual: f64,
}

#[pyclass(name = "ProfileRow", frozen, get_all)]
struct PyProfileRow {
    j: usize,
    increment: f64,
    cumulative: f64,
    rho: f64,
    kappa: f64,
}

#[pyclass(name = "OracleResult", frozen, get_all)]
struct PyOracleResult {
    r: usize,
    /// `j` for Davenport constants, `d` for bounded constants.
    parameter: usize,
    value: u64,
    witness: Vec<u64>,
}

#[pyclass(name = "RatioReport", frozen, get_all)]
struct PyRatioReport {
    n: usize,
    r: usize,
    j: usize,
    exact_ratio: Option<(BigInt, BigInt)>,
    log2_ratio: f64,
    crude_log2: f64,
    admissible_guaranteed: bool,
}

#[pyfunction]
fn entropy(u: f64) -> PyResult<f64> {
    rate::entropy(u).map_err(py_err)
}

/// Value of the named rate bound at normalized distance `delta`.
#[pyfunction]
fn evaluate(kind_name: &str, delta: f64) -> PyResult<f64> {
    rate::evaluate(kind(kind_name)?, delta).map_err(py_err)
}

#[pyfunction]
fn solve_increment(p: f64, kind_name: &str) -> PyResult<f64> {
    recursion::solve_increment(p, kind(kind_name)?).map_err(py_err)
}

#[pyfunction]
fn coefficient_sequence(schedule_name: &str, j_max: usize) -> PyResult<Vec<PyCoefficientRow>> {
    let table = recursion::coefficient_sequence(&schedule(schedule_name)?, j_max).map_err(py_err)?;
    Ok(table
        .rows
        .into_iter()
        .map(|r| PyCoefficientRow {
            j: r.j,
            increment: r.increment,
            cumulative: r.cumulative,
            rate_bound: r.rate_bound.map(|k| k.name().to_string()),
            residual: r.residual,
        })
        .collect())
}

/// `(j, lower, upper)` coefficient triples for `j = 1..=j_max`.
#[pyfunction]
#[pyo3(signature = (j_max, schedule_name = "mrrw1"))]
fn theorem_table(j_max: usize, schedule_name: &str) -> PyResult<Vec<(usize, f64, f64)>> {
    let rows = recursion::theorem_table(&schedule(schedule_name)?, j_max).map_err(py_err)?;
    Ok(rows.into_iter().map(|r| (r.j, r.lower, r.upper)).collect())
}

#[pyfunction]
fn asymptotic_profile(j_max: usize) -> PyResult<Vec<PyProfileRow>> {
    let profile = recursion::asymptotic_profile(j_max).map_err(py_err)?;
    Ok(profile
        .rows
        .into_iter()
        .map(|r| PyProfileRow { j: r.j, increment: r.increment, cumulative: r.cumulative, rho: r.rho, kappa: r.kappa })
        .collect())
}

/// `(coefficient, value, asymptotic_in_r)`.
#[pyfunction]
#[pyo3(signature = (r, n, schedule_name = "mrrw1"))]
fn corollary_bound(r: usize, n: usize, schedule_name: &str) -> PyResult<(f64, f64, bool)> {
    let b = recursion::corollary_bound(r, n, &schedule(schedule_name)?).map_err(py_err)?;
    Ok((b.coefficient, b.value, b.asymptotic_in_r))
}

#[pyfunction]
fn min_zero_sum_length(rank: usize, elements: Vec<u64>) -> PyResult<Option<u64>> {
    let cols = elements.into_iter().map(|b| GroupElement::new(b, rank)).collect::<Result<Vec<_>, _>>().map_err(py_err)?;
    gf2::min_zero_sum_length(&cols, &WorkLimits::default()).map(length).map_err(py_err)
}

/// `(max_disjoint, witness)`; witness indices refer to the sorted elements.
#[pyfunction]
fn max_disjoint_zero_sums(rank: usize, elements: Vec<u64>) -> PyResult<(usize, Vec<Vec<usize>>)> {
    let seq = Sequence::from_bits(rank, &elements).map_err(py_err)?;
    let report = zerosum::max_disjoint_zero_sums(&seq, &OracleLimits::default()).map_err(py_err)?;
    Ok((report.max_disjoint, report.witness))
}

#[pyfunction]
#[pyo3(signature = (r, j, max_rank = None, budget = None))]
fn davenport_exact(py: Python<'_>, r: usize, j: usize, max_rank: Option<usize>, budget: Option<u64>) -> PyResult<PyOracleResult> {
    let limits = oracle_limits(max_rank, budget);
    let res = py.detach(|| zerosum::davenport_exact(r, j, &limits)).map_err(py_err)?;
    Ok(PyOracleResult { r: res.r, parameter: res.j, value: res.value, witness: res.witness })
}

#[pyfunction]
#[pyo3(signature = (r, d, max_rank = None, budget = None))]
fn bounded_constant_exact(
    py: Python<'_>,
    r: usize,
    d: usize,
    max_rank: Option<usize>,
    budget: Option<u64>,
) -> PyResult<PyOracleResult> {
    let limits = oracle_limits(max_rank, budget);
    let res = py.detach(|| zerosum::bounded_constant_exact(r, d, &limits)).map_err(py_err)?;
    Ok(PyOracleResult { r: res.r, parameter: res.d, value: res.value, witness: res.witness })
}

/// Upper bound for `D_{j+1}` from `D_j <= dj` and a table `d -> s_{<=d}`
/// (`None` for infinite entries).
#[pyfunction]
fn eqrec_combine(dj: u64, s_table: BTreeMap<u64, Option<u64>>) -> PyResult<Option<u64>> {
    let table = s_table.into_iter().map(|(d, s)| (d, s.map_or(Length::Infinite, Length::Finite))).collect();
    zerosum::eqrec_combine(dj, &table).map(length).map_err(py_err)
}

#[pyfunction]
fn gaussian_binomial(n: usize, k: usize) -> PyResult<BigInt> {
    counting::gaussian_binomial(n, k).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, r, j, mode = "exact"))]
fn inadmissible_ratio(n: usize, r: usize, j: usize, mode: &str) -> PyResult<PyRatioReport> {
    let mode: RatioMode = mode.parse().map_err(py_err)?;
    let rep = counting::inadmissible_ratio(n, r, j, mode).map_err(py_err)?;
    Ok(PyRatioReport {
        n: rep.n,
        r: rep.r,
        j: rep.j,
        exact_ratio: rep.exact_ratio.map(|q| (q.numer().clone(), q.denom().clone())),
        log2_ratio: rep.log2_ratio,
        crude_log2: rep.crude_log2,
        admissible_guaranteed: rep.admissible_guaranteed,
    })
}

#[pyfunction]
fn prop6_coefficient(j: usize) -> f64 {
    counting::prop6_coefficient(j)
}

#[pyfunction]
fn prop6_lower_exact(r: usize, j: usize) -> PyResult<u64> {
    counting::prop6_lower_exact(r, j).map_err(py_err)
}

#[pymodule]
fn davenport(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyCoefficientRow>()?;
    m.add_class::<PyProfileRow>()?;
    m.add_class::<PyOracleResult>()?;
    m.add_class::<PyRatioReport>()?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(solve_increment, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_table, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_profile, m)?)?;
    m.add_function(wrap_pyfunction!(corollary_bound, m)?)?;
    m.add_function(wrap_pyfunction!(min_zero_sum_length, m)?)?;
    m.add_function(wrap_pyfunction!(max_disjoint_zero_sums, m)?)?;
    m.add_function(wrap_pyfunction!(davenport_exact, m)?)?;
    m.add_function(wrap_pyfunction!(bounded_constant_exact, m)?)?;
    m.add_function(wrap_pyfunction!(eqrec_combine, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(inadmissible_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(prop6_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(prop6_lower_exact, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
