use cycloscope::{cyclotomic, densities, matsuda, polyarith, survey, Caps, Error};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

create_exception!(cycloscope_py, CapacityError, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Usage(m) => PyValueError::new_err(m),
        Error::Capacity(m) => CapacityError::new_err(m),
        Error::Internal(m) => PyRuntimeError::new_err(m),
    }
}

/// Serialize through JSON so Python sees the same shape as the CLI.
fn to_object<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn caps(oracle_cap: Option<u64>) -> PyResult<Caps> {
    let mut caps = Caps::from_env().map_err(to_py)?;
    if let Some(c) = oracle_cap {
        caps.oracle_cap = c;
    }
    Ok(caps)
}

/// Polynomial over a prime field, coefficients low degree first.
#[pyclass(name = "Poly", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPoly(polyarith::Poly);

#[pymethods]
impl PyPoly {
    #[new]
    fn new(coeffs: Vec<i64>, modulus: u64) -> PyResult<Self> {
        let field = polyarith::PrimeField::new(modulus).map_err(to_py)?;
        Ok(PyPoly(polyarith::Poly::from_signed(field, &coeffs)))
    }

    #[getter]
    fn coeffs(&self) -> Vec<u64> {
        self.0.coeffs().to_vec()
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.0.modulus()
    }

    #[getter]
    fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        polyarith::add(&self.0, &other.0).map(PyPoly).map_err(to_py)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        polyarith::mul(&self.0, &other.0).map(PyPoly).map_err(to_py)
    }

    fn __divmod__(&self, other: &Self) -> PyResult<(Self, Self)> {
        let (q, r) = polyarith::divrem(&self.0, &other.0).map_err(to_py)?;
        Ok((PyPoly(q), PyPoly(r)))
    }

    fn gcd(&self, other: &Self) -> PyResult<Self> {
        polyarith::gcd(&self.0, &other.0).map(PyPoly).map_err(to_py)
    }

    fn reversal(&self) -> PyResult<Self> {
        matsuda::reversal(&self.0).map(PyPoly).map_err(to_py)
    }

    fn trace(&self) -> PyResult<u64> {
        matsuda::trace(&self.0).map(|t| t.value).map_err(to_py)
    }

    fn in_m_ring(&self) -> bool {
        matsuda::in_m_ring(&self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({:?}, {})", self.0.coeffs(), self.0.modulus())
    }
}

/// Membership of `p` in E(ell), as the CLI's `member` report.
#[pyfunction]
#[pyo3(signature = (p, ell, witness = false, oracle_cap = None))]
fn member(py: Python<'_>, p: u64, ell: u64, witness: bool, oracle_cap: Option<u64>) -> PyResult<Py<PyAny>> {
    let caps = caps(oracle_cap)?;
    let result = py.detach(|| matsuda::e_membership(p, ell, witness, &caps)).map_err(to_py)?;
    to_object(py, &result)
}

#[pyfunction]
#[pyo3(signature = (p, ell, oracle_cap = None))]
fn brute_force_member(py: Python<'_>, p: u64, ell: u64, oracle_cap: Option<u64>) -> PyResult<bool> {
    let caps = caps(oracle_cap)?;
    py.detach(|| matsuda::brute_force_membership(p, ell, &caps)).map_err(to_py)
}

/// Irreducible factors of Phi_p over F_ell in canonical order.
#[pyfunction]
#[pyo3(signature = (p, ell, oracle_cap = None))]
fn factor_phi(py: Python<'_>, p: u64, ell: u64, oracle_cap: Option<u64>) -> PyResult<Vec<PyPoly>> {
    let caps = caps(oracle_cap)?;
    let list = py.detach(|| cyclotomic::factor_oracle(p, ell, &caps)).map_err(to_py)?;
    Ok(list.factors.into_iter().map(PyPoly).collect())
}

/// Traces of the irreducible factors of Phi_p, as `{trace: multiplicity}`.
#[pyfunction]
fn trace_multiset<'py>(py: Python<'py>, p: u64, ell: u64) -> PyResult<Bound<'py, PyDict>> {
    let caps = caps(None)?;
    let t = py.detach(|| cyclotomic::trace_multiset(p, ell, &caps)).map_err(to_py)?;
    let d = PyDict::new(py);
    for (v, m) in t.entries {
        d.set_item(v, m)?;
    }
    Ok(d)
}

#[pyfunction]
fn multiplicative_order(a: i64, p: u64) -> PyResult<u64> {
    cyclotomic::multiplicative_order(a, p).map_err(to_py)
}

/// Enclosure of `artin`, `bound` (needs `ell`), `hooley` (needs `a`) or `golomb` (needs `a`, `r`).
#[pyfunction]
#[pyo3(signature = (which, ell = None, a = None, r = 1, precision = 1e-9))]
fn constants(
    py: Python<'_>,
    which: &str,
    ell: Option<u64>,
    a: Option<i64>,
    r: u64,
    precision: f64,
) -> PyResult<Py<PyAny>> {
    let caps = caps(None)?;
    let need = |v: Option<i64>, name: &str| v.ok_or_else(|| PyValueError::new_err(format!("{name} is required")));
    let est = match which {
        "artin" => py.detach(|| densities::restricted_artin_product(2, precision, &caps)),
        "bound" => {
            let l = need(ell.map(|v| v as i64), "ell")? as u64;
            py.detach(|| densities::theorem1_lower_bound(l, precision, &caps))
        }
        "hooley" => {
            let a = need(a, "a")?;
            py.detach(|| densities::hooley_constant(a, precision, &caps))
        }
        "golomb" => {
            let a = need(a, "a")?;
            py.detach(|| densities::golomb_constant(a, r, precision, &caps))
        }
        other => return Err(PyValueError::new_err(format!("unknown constant {other:?}"))),
    }
    .map_err(to_py)?;
    to_object(py, &est)
}

#[pyfunction]
#[pyo3(signature = (ell, limit, deep_limit = None, threads = None))]
fn run_survey(
    py: Python<'_>,
    ell: u64,
    limit: u64,
    deep_limit: Option<u64>,
    threads: Option<usize>,
) -> PyResult<Py<PyAny>> {
    let caps = caps(None)?;
    let deep = deep_limit.unwrap_or(limit);
    let report = py.detach(|| survey::run_survey(ell, limit, deep, threads, &caps)).map_err(to_py)?;
    to_object(py, &report)
}

#[pyfunction]
#[pyo3(signature = (a, r, limit, threads = None))]
fn golomb_survey(py: Python<'_>, a: i64, r: u64, limit: u64, threads: Option<usize>) -> PyResult<Py<PyAny>> {
    let caps = caps(None)?;
    let report = py.detach(|| survey::run_golomb_survey(a, r, limit, threads, &caps)).map_err(to_py)?;
    to_object(py, &report)
}

#[pyfunction]
#[pyo3(signature = (limit, threads = None))]
fn lemma_checks(py: Python<'_>, limit: u64, threads: Option<usize>) -> PyResult<Py<PyAny>> {
    let caps = caps(None)?;
    let report = py.detach(|| survey::lemma_checks(limit, threads, &caps)).map_err(to_py)?;
    to_object(py, &report)
}

#[pyfunction]
fn davenport(py: Python<'_>, ell: u64) -> PyResult<Py<PyAny>> {
    let report = py.detach(|| cycloscope::cli::davenport_report(ell)).map_err(to_py)?;
    to_object(py, &report)
}

#[pymodule]
fn cycloscope_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CapacityError", m.py().get_type::<CapacityError>())?;
    m.add_class::<PyPoly>()?;
    m.add_function(wrap_pyfunction!(member, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_member, m)?)?;
    m.add_function(wrap_pyfunction!(factor_phi, m)?)?;
    m.add_function(wrap_pyfunction!(trace_multiset, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicative_order, m)?)?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_function(wrap_pyfunction!(run_survey, m)?)?;
    m.add_function(wrap_pyfunction!(golomb_survey, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_checks, m)?)?;
    m.add_function(wrap_pyfunction!(davenport, m)?)?;
    Ok(())
}
