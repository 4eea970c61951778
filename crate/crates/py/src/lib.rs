//! Python bindings for `residue-kernel`.
//!
//! Exact values cross the boundary as strings in the library's own notation
//! (`-3/8`, `3/2*i`), so nothing is rounded on the way out.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use residue_kernel::dsz::{CaseId, DszError, Session as Core, TheoremId};

fn err(e: DszError) -> PyErr {
    match e {
        DszError::UnknownRecord(_) => PyKeyError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = String>>(s: &str) -> PyResult<T> {
    s.parse().map_err(PyValueError::new_err)
}

/// A verification session over the bundled goldens.
#[pyclass(frozen)]
struct Session {
    inner: Core,
}

#[pymethods]
impl Session {
    #[new]
    fn new() -> Self {
        Session { inner: Core::builtin() }
    }

    /// Coefficient value from its derivative definition.
    fn coeff_defined(&self, name: &str, m: u32) -> PyResult<String> {
        self.inner.coeff_defined(name, m).map(|v| v.to_string()).map_err(err)
    }

    /// Coefficient value from its printed closed form.
    fn coeff_closed(&self, name: &str, m: u32) -> PyResult<String> {
        self.inner.coeff_closed(name, m).map(|v| v.to_string()).map_err(err)
    }

    /// `(name, m, defined, closed, matched)` for every catalog entry and `m` in range.
    fn verify_coefficients(&self, py: Python<'_>, m_lo: u32, m_hi: u32) -> PyResult<Vec<(String, u32, String, String, bool)>> {
        let rows = py.detach(|| self.inner.verify_coefficients(m_lo, m_hi)).map_err(err)?;
        Ok(rows.into_iter().map(|r| (r.name, r.m, r.defined.to_string(), r.closed.to_string(), r.matched)).collect())
    }

    /// `H5` under both derivative orders.
    fn probe_h5<'py>(&self, py: Python<'py>, m: u32) -> PyResult<Bound<'py, PyDict>> {
        let p = self.inner.probe_h5(m).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("m", p.m)?;
        d.set_item("order", p.order)?;
        d.set_item("value", p.value.to_string())?;
        d.set_item("alt_order", p.alt_order)?;
        d.set_item("alt_value", p.alt_value.to_string())?;
        d.set_item("closed", p.closed.to_string())?;
        Ok(d)
    }

    /// Run one case pipeline; theorem is `"A"`/`"B"`, case is `"I"`..`"V"`.
    fn run_case<'py>(&self, py: Python<'py>, theorem: &str, case: &str, m: u32) -> PyResult<Bound<'py, PyDict>> {
        let (th, c): (TheoremId, CaseId) = (parse(theorem)?, parse(case)?);
        let r = py.detach(|| self.inner.run_case(th, c, m)).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("theorem", r.theorem.to_string())?;
        d.set_item("case", r.case.to_string())?;
        d.set_item("m", r.m)?;
        d.set_item("computed", r.computed.to_string())?;
        d.set_item("expected", r.expected.to_string())?;
        d.set_item("residual", r.residual.to_string())?;
        d.set_item("matched", r.matched)?;
        d.set_item("by_parts", r.by_parts)?;
        Ok(d)
    }

    /// Run a whole theorem. Markers come back as `(label, computed, expected, matched)`.
    fn run_theorem<'py>(&self, py: Python<'py>, theorem: &str, m: u32) -> PyResult<Bound<'py, PyDict>> {
        let th: TheoremId = parse(theorem)?;
        let r = py.detach(|| self.inner.run_theorem(th, m)).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("theorem", r.theorem.to_string())?;
        d.set_item("m", r.m)?;
        d.set_item("total", r.total.to_string())?;
        d.set_item("expected", r.expected.to_string())?;
        d.set_item("residual", r.residual.to_string())?;
        let markers: Vec<_> = r.markers.iter().map(|mk| (mk.label.clone(), mk.computed.to_string(), mk.expected.to_string(), mk.matched)).collect();
        d.set_item("markers", markers)?;
        d.set_item("printed_cases_sum", r.printed_cases_sum)?;
        d.set_item("matched", r.matched)?;
        Ok(d)
    }
}

/// Run the `residue-verify` command line in-process; returns `(status, stdout, stderr)`.
#[pyfunction]
fn cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    py.detach(|| {
        let mut out = Vec::new();
        let mut errs = Vec::new();
        let argv = std::iter::once("residue-verify".to_string()).chain(args);
        let code = residue_kernel::cli::main_with(argv, &mut out, &mut errs);
        (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&errs).into_owned())
    })
}

#[pymodule]
fn residue_kernel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Session>()?;
    m.add_function(wrap_pyfunction!(cli, m)?)?;
    Ok(())
}
