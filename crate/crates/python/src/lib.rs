//! Python bindings. Numbers are accepted as anything whose `str()` is a
//! `"p/q"` or decimal string (int, str, `fractions.Fraction`) and returned as
//! `"p/q"` strings.

use mb_core::pricing::{price_interval, Asset};
use mb_core::rational::{format_rational, parse_rational};
use mb_core::verify::{run, VerifyConfig};
use mb_core::{MarketModel, PolytopeSpec, Rational, VertexDensity};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(e: mb_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = x.str()?.to_string();
    parse_rational(&text).map_err(value_error)
}

fn strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

fn vertex<'py>(py: Python<'py>, v: &VertexDensity) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    for (lambda, w) in v.support() {
        out.set_item(lambda.to_string(), format_rational(&w))?;
    }
    Ok(out)
}

/// Vertices of `P(b)`: `b_prime`, `b_dprime`, `supervertex`, `subvertex`
/// and `criterion_met`, or `{"empty": True}`.
#[pyfunction]
fn polytope<'py>(py: Python<'py>, b: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyDict>> {
    let b = b.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
    let spec = PolytopeSpec::new(b).map_err(value_error)?;
    let out = PyDict::new(py);
    out.set_item("b", strings(spec.b()))?;
    out.set_item("empty", spec.is_empty())?;
    if spec.is_empty() {
        return Ok(out);
    }
    out.set_item("b_prime", strings(spec.b_prime()))?;
    out.set_item("b_dprime", strings(spec.b_dprime()))?;
    out.set_item("supervertex", vertex(py, &spec.supervertex().map_err(value_error)?)?)?;
    out.set_item("subvertex", vertex(py, &spec.subvertex().map_err(value_error)?)?)?;
    out.set_item("criterion_met", spec.subvertex_in_polytope().map_err(value_error)?)?;
    Ok(out)
}

/// Price interval of the basket call `(Σ w_i S_i(n) - strike)^+`. Each asset
/// is a `(s0, down, up)` triple.
#[pyfunction]
#[pyo3(signature = (horizon, rate, assets, strike, weights=None, discount=false))]
fn price<'py>(
    py: Python<'py>,
    horizon: usize,
    rate: Bound<'py, PyAny>,
    assets: Vec<(Bound<'py, PyAny>, Bound<'py, PyAny>, Bound<'py, PyAny>)>,
    strike: Bound<'py, PyAny>,
    weights: Option<Vec<Bound<'py, PyAny>>>,
    discount: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let assets = assets
        .iter()
        .map(|(s0, down, up)| {
            Ok(Asset {
                s0: rational(s0)?,
                down: rational(down)?,
                up: rational(up)?,
            })
        })
        .collect::<PyResult<Vec<_>>>()?;
    let mut model = MarketModel::new(horizon, rational(&rate)?, assets, rational(&strike)?).map_err(value_error)?;
    if let Some(w) = weights {
        model.weights = w.iter().map(rational).collect::<PyResult<_>>()?;
    }
    model.discount = discount;
    model.validate().map_err(value_error)?;

    let p = price_interval(&model).map_err(value_error)?;
    let out = PyDict::new(py);
    out.set_item("b", strings(p.spec.b()))?;
    out.set_item("supervertex", vertex(py, &p.supervertex)?)?;
    out.set_item("subvertex", vertex(py, &p.subvertex)?)?;
    out.set_item("criterion_met", p.criterion_met)?;
    out.set_item("f_max", format_rational(&p.f_max))?;
    out.set_item("f_min", format_rational(&p.f_min))?;
    out.set_item("f_min_kind", p.f_min_kind.as_str())?;
    out.set_item("discounted", p.discounted)?;
    Ok(out)
}

/// Runs the seeded oracle cross-checks; returns `{check name: passed count}`
/// and raises on a counterexample.
#[pyfunction]
#[pyo3(signature = (m=3, n=4, cases=100, seed=42))]
fn verify<'py>(py: Python<'py>, m: usize, n: usize, cases: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let report = run(&VerifyConfig {
        m_max: m,
        n_max: n,
        cases,
        seed,
        ..VerifyConfig::default()
    })
    .map_err(value_error)?;
    if let Some(cx) = report.counterexample {
        return Err(PyRuntimeError::new_err(format!("{} failed: {cx:?}", cx.check.name())));
    }
    let out = PyDict::new(py);
    for c in &report.checks {
        out.set_item(c.check.name(), c.passed)?;
    }
    Ok(out)
}

#[pymodule]
fn mb_bounds(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(polytope, m)?)?;
    m.add_function(wrap_pyfunction!(price, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
