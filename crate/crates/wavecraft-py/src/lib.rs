//! Python bindings: symbolic expressions plus the end-to-end solver entry
//! points, returning the same JSON reports as the command-line tool.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use wavecraft::case_studies::{bratu_pipeline, critical_point};
use wavecraft::parser::parse_any;
use wavecraft::{render, Error};

fn value_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An immutable symbolic expression in canonical form.
#[pyclass(frozen, name = "Expr")]
struct PyExpr {
    inner: wavecraft::Expr,
}

#[pymethods]
impl PyExpr {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let inner = parse_any(text).map_err(value_err)?;
        Ok(PyExpr { inner })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Expr({:?})", self.inner.to_string())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    /// Derivative with respect to the named symbol.
    fn diff(&self, var: &str) -> Self {
        PyExpr {
            inner: self.inner.differentiate(var),
        }
    }

    /// Replaces every occurrence of the named symbol by another expression.
    fn substitute(&self, name: &str, value: &Self) -> Self {
        PyExpr {
            inner: self.inner.substitute_symbol(name, &value.inner),
        }
    }

    /// Distributes products over sums and flattens the result.
    fn expand(&self) -> Self {
        PyExpr {
            inner: self.inner.expand(),
        }
    }

    /// Numeric value under the given symbol bindings.
    fn eval(&self, bindings: BTreeMap<String, f64>) -> PyResult<f64> {
        self.inner.eval(&bindings).map_err(value_err)
    }

    fn latex(&self) -> String {
        render::latex(&self.inner)
    }

    fn free_symbols(&self) -> Vec<String> {
        self.inner.free_symbols().into_iter().collect()
    }
}

/// Solves a problem description and returns the JSON report.
///
/// `text` uses the same format as the command-line problem files; `method`
/// is one of "ffx", "riccati", or "expfn"; `direction` selects the sign of
/// the wave coordinate; `ranges` overrides the expansion bounds (c, d, p, q)
/// for the expfn method.
#[pyfunction]
#[pyo3(signature = (text, method = "ffx", direction = 1, ranges = None))]
fn solve_problem(
    text: &str,
    method: &str,
    direction: i64,
    ranges: Option<(u32, u32, u32, u32)>,
) -> PyResult<String> {
    wavecraft::cli::solve_text(text, method, direction, ranges).map_err(value_err)
}

/// The ignition threshold of the planar Bratu-Gelfand problem as
/// `(alpha_c, lambda_c)`, located on the exact bifurcation curve.
#[pyfunction]
fn bratu_critical() -> PyResult<(f64, f64)> {
    let curve = bratu_pipeline().map_err(value_err)?;
    critical_point(&curve).map_err(value_err)
}

#[pymodule]
fn wavecraft_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyExpr>()?;
    m.add_function(wrap_pyfunction!(solve_problem, m)?)?;
    m.add_function(wrap_pyfunction!(bratu_critical, m)?)?;
    Ok(())
}
