//! Python module `isocount_py`: the counting engines and the isogeny test.

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;

use isocount::counting::{self, Engine};
use isocount::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Overflow(_) | Error::TooLarge(_) => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn engine(tag: &str) -> PyResult<Engine> {
    tag.parse().map_err(to_py)
}

/// Number of curves with an N-isogeny and naive height below `x`.
#[pyfunction]
#[pyo3(signature = (level, x, engine_tag = "census"))]
fn count(py: Python<'_>, level: u32, x: u64, engine_tag: &str) -> PyResult<u64> {
    let e = engine(engine_tag)?;
    py.allow_threads(|| counting::run(e, level, x)).map(|r| r.count).map_err(to_py)
}

/// Counts at each bound of an increasing grid.
#[pyfunction]
#[pyo3(signature = (level, grid, engine_tag = "census"))]
fn count_grid(py: Python<'_>, level: u32, grid: Vec<u64>, engine_tag: &str) -> PyResult<Vec<u64>> {
    let e = engine(engine_tag)?;
    py.allow_threads(|| grid.iter().map(|&x| counting::run(e, level, x).map(|r| r.count)).collect::<isocount::Result<Vec<u64>>>())
        .map_err(to_py)
}

/// Whether y² = x³ + ax + b has a rational cyclic N-isogeny.
#[pyfunction]
fn has_isogeny(a: i64, b: i64, level: u32) -> PyResult<bool> {
    let c = isocount::Curve::new(a, b).map_err(to_py)?;
    isocount::isogeny::has_isogeny(&c, level).map_err(to_py)
}

/// Minimal model `(A, B)` of the curve with integer coefficients `(a, b)`.
#[pyfunction]
fn minimize(a: i64, b: i64) -> PyResult<(i64, i64)> {
    let c = isocount::curves::minimize(a, b).map_err(to_py)?;
    Ok((c.a(), c.b()))
}

/// `Σ_{n ≤ t} B(n⁴)`.
#[pyfunction]
fn summatory_b4(py: Python<'_>, t: u64) -> u64 {
    py.allow_threads(|| isocount::analytic::summatory_b4(t))
}

/// Best `(alpha, beta, c, residual)` for `count ≈ c X^alpha (log X)^beta`.
#[pyfunction]
#[pyo3(signature = (samples, betas = vec![0, 1, 2]))]
fn fit_growth(samples: Vec<(f64, f64)>, betas: Vec<u32>) -> PyResult<(f64, u32, f64, f64)> {
    let f = isocount::analytic::fit_growth(&samples, &betas).map_err(to_py)?;
    Ok((f.alpha, f.beta, f.c, f.residual))
}

#[pymodule]
fn isocount_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(count_grid, m)?)?;
    m.add_function(wrap_pyfunction!(has_isogeny, m)?)?;
    m.add_function(wrap_pyfunction!(minimize, m)?)?;
    m.add_function(wrap_pyfunction!(summatory_b4, m)?)?;
    m.add_function(wrap_pyfunction!(fit_growth, m)?)?;
    Ok(())
}
