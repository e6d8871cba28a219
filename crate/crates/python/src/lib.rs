//! Python bindings. Rationals cross the boundary as strings such as `"3/4"`.

use std::hash::{DefaultHasher, Hash, Hasher};

use pyo3::basic::CompareOp;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use ordlab::badseq::{self, Grid};
use ordlab::engine::{self, AlgoConfig, Budget, EvalError, EvalStats};
use ordlab::numerics::{FormatMode, Rational};
use ordlab::odf::FuncDesc;
use ordlab::ordinal::{self, theorem2_bound};
use ordlab::partition::{self, PartitionError};

create_exception!(ordlab, BudgetExhausted, PyException);
create_exception!(ordlab, DomainViolation, PyException);

fn eval_err(e: EvalError) -> PyErr {
    match e {
        EvalError::BudgetExhausted { .. } => BudgetExhausted::new_err(e.to_string()),
        EvalError::DomainViolation { .. } => DomainViolation::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn partition_err(e: PartitionError) -> PyErr {
    match e {
        PartitionError::Engine(e) => eval_err(e),
        PartitionError::NotPositive(_) => DomainViolation::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(s: &str) -> PyResult<Rational> {
    s.parse().map_err(value_err)
}

fn budget(max_calls: Option<u64>, max_depth: Option<usize>) -> Budget {
    let d = Budget::default();
    Budget { max_calls: max_calls.or(d.max_calls), max_depth: max_depth.or(d.max_depth), ..d }
}

/// Recursion configuration: a preset or an explicit JSON description.
#[pyclass(name = "Config", frozen)]
struct PyConfig(AlgoConfig);

#[pymethods]
impl PyConfig {
    #[staticmethod]
    #[pyo3(signature = (name, n=None))]
    fn preset(name: &str, n: Option<usize>) -> PyResult<Self> {
        AlgoConfig::preset(name, n).map(PyConfig).map_err(eval_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        AlgoConfig::from_json(text).map(PyConfig).map_err(eval_err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k
    }

    /// Exact `M(x)` with its call statistics.
    #[pyo3(signature = (x, max_calls=None, max_depth=None))]
    fn eval(&self, x: &str, max_calls: Option<u64>, max_depth: Option<usize>) -> PyResult<(String, Stats)> {
        let (v, stats) = engine::eval_m(&self.0, &rational(x)?, budget(max_calls, max_depth)).map_err(eval_err)?;
        Ok((v.to_string(), Stats(stats)))
    }

    /// `[M_1(x), ..., M_k(x)]`.
    fn levels(&self, x: &str) -> PyResult<Vec<String>> {
        let mut ev = engine::Evaluator::new(self.0.clone(), Budget::default());
        let levels = ev.levels(&rational(x)?).map_err(eval_err)?;
        Ok(levels.iter().map(Rational::to_string).collect())
    }

    /// Evenly spaced samples on `[lo, hi]`; failed points give `None`.
    #[pyo3(signature = (lo, hi, count=261))]
    fn sample(&self, lo: &str, hi: &str, count: usize) -> PyResult<Vec<(String, Option<String>)>> {
        let series = engine::sample_range(&self.0, &rational(lo)?, &rational(hi)?, count, Budget::default())
            .map_err(eval_err)?;
        Ok(series.into_iter().map(|s| (s.x.to_string(), s.value.ok().map(|v| v.to_string()))).collect())
    }

    /// Endpoints of the level-`level` partition below `prefix`.
    #[pyo3(signature = (level=1, prefix=Vec::new(), steps=10))]
    fn partition(&self, level: usize, prefix: Vec<String>, steps: usize) -> PyResult<Vec<String>> {
        let prefix = prefix.iter().map(|p| rational(p)).collect::<PyResult<Vec<_>>>()?;
        let run = partition::engine_partition(&self.0, level, &prefix, steps).map_err(partition_err)?;
        Ok(run.endpoints.iter().map(Rational::to_string).collect())
    }

    fn __repr__(&self) -> String {
        format!("Config({})", self.0.to_json())
    }
}

#[pyclass(name = "EvalStats", frozen)]
struct Stats(EvalStats);

#[pymethods]
impl Stats {
    #[getter]
    fn total_calls(&self) -> u64 {
        self.0.total_calls
    }

    #[getter]
    fn distinct_args(&self) -> u64 {
        self.0.distinct_args
    }

    #[getter]
    fn max_depth(&self) -> usize {
        self.0.max_depth
    }

    fn __repr__(&self) -> String {
        format!(
            "EvalStats(total_calls={}, distinct_args={}, max_depth={})",
            self.0.total_calls, self.0.distinct_args, self.0.max_depth
        )
    }
}

/// Ordinal below `φ_ω(0)` in normal form. `+` and `*` are the natural operations.
#[pyclass(name = "Ordinal", frozen)]
struct PyOrdinal(ordinal::Ordinal);

#[pymethods]
impl PyOrdinal {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyOrdinal).map_err(value_err)
    }

    #[staticmethod]
    fn veblen(n: u32, arg: &PyOrdinal) -> Self {
        PyOrdinal(ordinal::veblen(n, &arg.0))
    }

    fn __add__(&self, other: &PyOrdinal) -> Self {
        PyOrdinal(ordinal::nat_sum(&self.0, &other.0))
    }

    fn __mul__(&self, other: &PyOrdinal) -> Self {
        PyOrdinal(ordinal::nat_prod(&self.0, &other.0))
    }

    fn ord_sum(&self, other: &PyOrdinal) -> Self {
        PyOrdinal(ordinal::ord_sum(&self.0, &other.0))
    }

    fn ord_prod(&self, other: &PyOrdinal) -> Self {
        PyOrdinal(ordinal::ord_prod(&self.0, &other.0))
    }

    fn __richcmp__(&self, other: &PyOrdinal, op: CompareOp) -> bool {
        op.matches(ordinal::ord_cmp(&self.0, &other.0))
    }

    fn __hash__(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ordinal('{}')", self.0)
    }
}

/// `M(x)` for a preset, formatted as `2^-k` when it is a power of two.
#[pyfunction]
#[pyo3(signature = (x, preset="classic", n=None, max_calls=None, max_depth=None))]
fn eval_m(x: &str, preset: &str, n: Option<usize>, max_calls: Option<u64>, max_depth: Option<usize>) -> PyResult<String> {
    let cfg = AlgoConfig::preset(preset, n).map_err(eval_err)?;
    let (v, _) = engine::eval_m(&cfg, &rational(x)?, budget(max_calls, max_depth)).map_err(eval_err)?;
    Ok(v.format(FormatMode::Pow2))
}

/// Endpoints `p_0 = start, p_1, ...` for a step function in short form (`const:1`, `affine:1,1`, ...).
#[pyfunction]
#[pyo3(signature = (desc, start="0", cap=None, steps=10))]
fn iterate_endpoints(desc: &str, start: &str, cap: Option<&str>, steps: usize) -> PyResult<Vec<String>> {
    let d: FuncDesc = desc.parse().map_err(value_err)?;
    let cap = cap.map(rational).transpose()?;
    let run = partition::iterate_endpoints(&d, &rational(start)?, cap.as_ref(), steps).map_err(partition_err)?;
    Ok(run.endpoints.iter().map(Rational::to_string).collect())
}

/// `(gamma, bound)` for `k` inner heights.
#[pyfunction]
fn height_bound(k: u32, o_f: &PyOrdinal, o_s: &PyOrdinal, o_g: Vec<PyRef<'_, PyOrdinal>>) -> PyResult<(PyOrdinal, PyOrdinal)> {
    let o_g: Vec<_> = o_g.iter().map(|o| o.0.clone()).collect();
    let hb = theorem2_bound(k, &o_f.0, &o_s.0, &o_g).map_err(value_err)?;
    Ok((PyOrdinal(hb.gamma), PyOrdinal(hb.bound)))
}

/// Longest bad chain of `(x, v)` points with strictly descending `x`: `(length, witness indices)`.
#[pyfunction]
fn longest_bad(points: Vec<(String, String)>) -> PyResult<(usize, Vec<usize>)> {
    let points = points
        .iter()
        .map(|(x, v)| Ok((rational(x)?, rational(v)?)))
        .collect::<PyResult<Vec<_>>>()?;
    let lb = badseq::longest_bad(&Grid::new(points).map_err(value_err)?);
    Ok((lb.length, lb.witness))
}

/// Randomized composition, split and sum checks; returns violation counts.
#[pyfunction]
#[pyo3(signature = (seed=0, instances=1000))]
fn lemma_suite(seed: u64, instances: usize) -> PyResult<Vec<(&'static str, usize)>> {
    let s = badseq::run_lemma_suite(seed, instances).map_err(value_err)?;
    Ok(vec![
        ("instances", s.instances),
        ("composition", s.composition_violations),
        ("split", s.split_violations),
        ("sum", s.sum_violations),
        ("embedding", s.embedding_violations),
    ])
}

#[pymodule]
#[pyo3(name = "ordlab")]
fn ordlab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyConfig>()?;
    m.add_class::<Stats>()?;
    m.add_class::<PyOrdinal>()?;
    m.add_function(wrap_pyfunction!(eval_m, m)?)?;
    m.add_function(wrap_pyfunction!(iterate_endpoints, m)?)?;
    m.add_function(wrap_pyfunction!(height_bound, m)?)?;
    m.add_function(wrap_pyfunction!(longest_bad, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_suite, m)?)?;
    m.add("BudgetExhausted", py.get_type::<BudgetExhausted>())?;
    m.add("DomainViolation", py.get_type::<DomainViolation>())?;
    Ok(())
}
