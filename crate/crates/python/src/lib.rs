//! Python bindings. Terms, traces and configurations cross the boundary as
//! plain JSON-shaped Python values (lists, dicts, ints, `"p/q"` strings).

use std::cmp::Ordering;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde_json::Value;

use ordinal_ramsey::epsilon::{epsilon_compare, EpsilonTerm};
use ordinal_ramsey::harness::{self, Pipeline, PipelineConfig, Trace};
use ordinal_ramsey::omega::{compare_lex, delta, DeltaResult, OmegaTerm};
use ordinal_ramsey::orders::{self, Element, BUILTIN_NAMES};

create_exception!(ordinal_ramsey, OrdinalError, PyException, "Raised for every library error; the message starts with its kind.");

fn err(e: ordinal_ramsey::Error) -> PyErr {
    OrdinalError::new_err(format!("{}: {e}", e.kind()))
}

fn json_err(e: serde_json::Error) -> PyErr {
    OrdinalError::new_err(format!("Parse: {e}"))
}

fn to_json(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(json_err)
}

fn from_json<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn sign(o: Ordering) -> i8 {
    o as i8
}

fn element(obj: &Bound<'_, PyAny>) -> PyResult<Element> {
    serde_json::from_value(to_json(obj)?).map_err(json_err)
}

/// A built-in base order: `omega`, `omega-star`, `zeta`, `eta` or `finite:<k>`.
#[pyclass(frozen, name = "Order", module = "ordinal_ramsey")]
struct PyOrder {
    inner: orders::Order,
}

#[pymethods]
impl PyOrder {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(PyOrder {
            inner: orders::builtin_order(name).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    fn contains(&self, x: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.inner.contains(&element(x)?))
    }

    /// -1, 0 or 1.
    fn compare(&self, a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<i8> {
        self.inner.compare(&element(a)?, &element(b)?).map(sign).map_err(err)
    }

    /// First `n` terms of the canonical descending sequence.
    fn descending_witness<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyAny>> {
        let seq = orders::witness_sequence(&self.inner).map_err(err)?;
        let xs = seq.prefix(n).map_err(err)?;
        from_json(py, &serde_json::to_value(xs).map_err(json_err)?)
    }

    /// Compares two terms of ω^⟨level, X⟩ given as nested lists.
    #[pyo3(signature = (a, b, level = 1))]
    fn compare_omega(&self, a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>, level: u32) -> PyResult<i8> {
        let a = OmegaTerm::from_json(&*self.inner, level, &to_json(a)?).map_err(err)?;
        let b = OmegaTerm::from_json(&*self.inner, level, &to_json(b)?).map_err(err)?;
        compare_lex(&*self.inner, &a, &b).map(sign).map_err(err)
    }

    /// First position where the terms differ, or `None` if they are equal.
    #[pyo3(signature = (a, b, level = 1))]
    fn delta_omega(&self, a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>, level: u32) -> PyResult<Option<usize>> {
        let a = OmegaTerm::from_json(&*self.inner, level, &to_json(a)?).map_err(err)?;
        let b = OmegaTerm::from_json(&*self.inner, level, &to_json(b)?).map_err(err)?;
        Ok(match delta(&a, &b).map_err(err)? {
            DeltaResult::Equal => None,
            DeltaResult::DiffAt(i) => Some(i),
        })
    }

    /// Compares two ε-terms written as lists of `{"eps": x}` / `{"w": term}`.
    fn compare_epsilon(&self, a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<i8> {
        let a = EpsilonTerm::from_json(&*self.inner, &to_json(a)?).map_err(err)?;
        let b = EpsilonTerm::from_json(&*self.inner, &to_json(b)?).map_err(err)?;
        epsilon_compare(&*self.inner, &a, &b).map(sign).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Order({:?})", self.inner.name())
    }
}

fn config(pipeline: &str, kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<PipelineConfig> {
    let p: Pipeline = serde_json::from_value(Value::String(pipeline.to_string()))
        .map_err(|_| OrdinalError::new_err(format!("Parameter: unknown pipeline `{pipeline}`")))?;
    let mut v = serde_json::to_value(PipelineConfig::new(p)).map_err(json_err)?;
    if let Some(kw) = kwargs {
        let Value::Object(overrides) = to_json(kw.as_any())? else {
            unreachable!("keyword arguments form a dict")
        };
        let fields = v.as_object_mut().expect("config is an object");
        for (k, val) in overrides {
            if k == "pipeline" || !fields.contains_key(&k) {
                return Err(OrdinalError::new_err(format!("Parameter: unknown option `{k}`")));
            }
            fields.insert(k, val);
        }
    }
    serde_json::from_value(v).map_err(json_err)
}

#[pyfunction]
fn orders_list() -> Vec<&'static str> {
    BUILTIN_NAMES.to_vec()
}

/// Default configuration of `pipeline` with keyword overrides applied.
#[pyfunction]
#[pyo3(name = "config", signature = (pipeline, **kwargs))]
fn py_config<'py>(py: Python<'py>, pipeline: &str, kwargs: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(pipeline, kwargs)?;
    from_json(py, &serde_json::to_value(cfg).map_err(json_err)?)
}

/// First `count` instance terms.
#[pyfunction]
#[pyo3(signature = (pipeline, count = 10, **kwargs))]
fn gen<'py>(py: Python<'py>, pipeline: &str, count: usize, kwargs: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyAny>> {
    let terms = harness::gen_prefix(&config(pipeline, kwargs)?, count).map_err(err)?;
    from_json(py, &Value::Array(terms))
}

/// Colour of one tuple, exactly large set or block union.
#[pyfunction]
#[pyo3(signature = (pipeline, indices, **kwargs))]
fn color<'py>(
    py: Python<'py>,
    pipeline: &str,
    indices: Vec<usize>,
    kwargs: Option<&Bound<'py, PyDict>>,
) -> PyResult<Bound<'py, PyAny>> {
    let c = harness::color_of(&config(pipeline, kwargs)?, &indices).map_err(err)?;
    from_json(py, &c)
}

/// Runs a pipeline and returns its trace as a dict.
#[pyfunction]
#[pyo3(signature = (pipeline, **kwargs))]
fn run_pipeline<'py>(py: Python<'py>, pipeline: &str, kwargs: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(pipeline, kwargs)?;
    let trace = py.detach(|| harness::run_pipeline(&cfg));
    from_json(py, &serde_json::to_value(trace).map_err(json_err)?)
}

/// Re-checks a trace dict; returns `{"mismatches", "verified", "outcome", "exit_code"}`.
#[pyfunction]
fn verify_trace<'py>(py: Python<'py>, trace: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let trace: Trace = serde_json::from_value(to_json(trace)?).map_err(json_err)?;
    let report = py.detach(|| harness::verify_trace(&trace));
    let v = serde_json::json!({
        "mismatches": report.mismatches,
        "verified": report.verified,
        "outcome": report.outcome,
        "exit_code": report.exit_code(),
    });
    from_json(py, &v)
}

#[pymodule]
#[pyo3(name = "ordinal_ramsey")]
fn ordinal_ramsey_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("OrdinalError", m.py().get_type::<OrdinalError>())?;
    m.add_class::<PyOrder>()?;
    m.add_function(wrap_pyfunction!(orders_list, m)?)?;
    m.add_function(wrap_pyfunction!(py_config, m)?)?;
    m.add_function(wrap_pyfunction!(gen, m)?)?;
    m.add_function(wrap_pyfunction!(color, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(verify_trace, m)?)?;
    Ok(())
}
