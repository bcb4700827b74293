//! Python bindings: exact scalars, multivectors, the catalog spaces and
//! the verification entry points.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use spingeo_core::catalog;
use spingeo_core::clifford::{sigma_t, Multivector};
use spingeo_core::estimates::EstimateInput;
use spingeo_core::exactfield::Scalar as CoreScalar;
use spingeo_core::report::{self, Arithmetic};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An exact element of a multi-quadratic extension of the rationals.
#[pyclass(name = "Scalar", frozen, from_py_object)]
#[derive(Clone)]
struct PyScalar {
    inner: CoreScalar,
}

#[pymethods]
impl PyScalar {
    /// Parses expressions like `-7/sqrt5`, `3/4*sqrt3 + 1/5` or `0.25`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyScalar { inner: CoreScalar::parse(text).map_err(value_err)? })
    }

    fn __repr__(&self) -> String {
        format!("{}", self.inner)
    }

    fn __str__(&self) -> String {
        format!("{}", self.inner)
    }

    fn __add__(&self, rhs: &PyScalar) -> PyScalar {
        PyScalar { inner: &self.inner + &rhs.inner }
    }

    fn __sub__(&self, rhs: &PyScalar) -> PyScalar {
        PyScalar { inner: &self.inner - &rhs.inner }
    }

    fn __mul__(&self, rhs: &PyScalar) -> PyScalar {
        PyScalar { inner: &self.inner * &rhs.inner }
    }

    fn __truediv__(&self, rhs: &PyScalar) -> PyResult<PyScalar> {
        let inv = rhs.inner.inverse().map_err(value_err)?;
        Ok(PyScalar { inner: &self.inner * &inv })
    }

    fn __neg__(&self) -> PyScalar {
        PyScalar { inner: -&self.inner }
    }

    fn __eq__(&self, rhs: &PyScalar) -> bool {
        self.inner == rhs.inner
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// The value as a double (must be real).
    fn to_float(&self) -> f64 {
        self.inner.to_f64()
    }

    /// Real and imaginary parts as doubles.
    fn to_complex(&self) -> (f64, f64) {
        self.inner.to_complex64()
    }
}

/// A graded element of the Clifford/exterior algebra over an orthonormal
/// frame (`e_i e_i = -1`).
#[pyclass(name = "Multivector", frozen, from_py_object)]
#[derive(Clone)]
struct PyMultivector {
    inner: Multivector,
}

#[pymethods]
impl PyMultivector {
    /// The zero multivector in the given frame dimension.
    #[new]
    fn new(dim: usize) -> PyResult<Self> {
        if !(3..=10).contains(&dim) {
            return Err(value_err("dimension must be in 3..=10"));
        }
        Ok(PyMultivector { inner: Multivector::zero(dim) })
    }

    /// The blade `coeff * e_{i_1} ^ ... ^ e_{i_k}` (1-based indices).
    #[staticmethod]
    fn blade(dim: usize, indices: Vec<usize>, coeff: &PyScalar) -> PyResult<Self> {
        Ok(PyMultivector {
            inner: Multivector::blade(dim, &indices, coeff.inner.clone()).map_err(value_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("{}", self.inner)
    }

    fn __add__(&self, rhs: &PyMultivector) -> PyResult<Self> {
        if self.inner.dim() != rhs.inner.dim() {
            return Err(value_err("dimension mismatch"));
        }
        Ok(PyMultivector { inner: &self.inner + &rhs.inner })
    }

    fn __sub__(&self, rhs: &PyMultivector) -> PyResult<Self> {
        if self.inner.dim() != rhs.inner.dim() {
            return Err(value_err("dimension mismatch"));
        }
        Ok(PyMultivector { inner: &self.inner - &rhs.inner })
    }

    fn __neg__(&self) -> Self {
        PyMultivector { inner: -&self.inner }
    }

    fn __eq__(&self, rhs: &PyMultivector) -> bool {
        self.inner == rhs.inner
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn grades(&self) -> Vec<u32> {
        self.inner.grades()
    }

    fn scale(&self, by: &PyScalar) -> Self {
        PyMultivector { inner: self.inner.scale(&by.inner) }
    }

    /// Clifford (geometric) product.
    fn geometric(&self, rhs: &PyMultivector) -> PyResult<Self> {
        Ok(PyMultivector { inner: self.inner.geometric_product(&rhs.inner).map_err(value_err)? })
    }

    /// Exterior product.
    fn wedge(&self, rhs: &PyMultivector) -> PyResult<Self> {
        Ok(PyMultivector { inner: self.inner.wedge(&rhs.inner).map_err(value_err)? })
    }

    /// Interior product (self must be a vector).
    fn contract(&self, rhs: &PyMultivector) -> PyResult<Self> {
        Ok(PyMultivector { inner: self.inner.contract(&rhs.inner).map_err(value_err)? })
    }

    fn hodge_star(&self) -> Self {
        PyMultivector { inner: self.inner.hodge_star() }
    }

    /// The 4-form `sigma_T` of a 3-form.
    fn sigma(&self) -> PyResult<Self> {
        Ok(PyMultivector { inner: sigma_t(&self.inner).map_err(value_err)? })
    }

    /// Squared norm of a 3-form.
    fn norm_sq(&self) -> PyResult<PyScalar> {
        Ok(PyScalar { inner: self.inner.three_form_norm_sq().map_err(value_err)? })
    }
}

/// Runs the verification suite; returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (target, float_mode = false, only = None))]
fn verify(target: &str, float_mode: bool, only: Option<&str>) -> PyResult<String> {
    let arithmetic = if float_mode { Arithmetic::Float } else { Arithmetic::Exact };
    let report = report::run_verify(target, arithmetic, only).map_err(value_err)?;
    Ok(report.to_json())
}

/// Seeded identity fuzzing; returns the report as a JSON string.
#[pyfunction]
#[pyo3(signature = (dim = 7, trials = 100, seed = 42))]
fn fuzz(dim: usize, trials: usize, seed: u64) -> PyResult<String> {
    if !(3..=10).contains(&dim) {
        return Err(value_err("dimension must be in 3..=10"));
    }
    Ok(report::run_fuzz(dim, trials, seed, Arithmetic::Exact).to_json())
}

/// Eigenvalue estimates and spinor constants, as a JSON string.
#[pyfunction]
fn estimates(n: usize, sca: &str, tnorm2: &str, gamma: &str) -> PyResult<String> {
    if !(3..=8).contains(&n) {
        return Err(value_err("dimension must be in 3..=8"));
    }
    let input = EstimateInput::new(
        n,
        CoreScalar::parse(sca).map_err(value_err)?,
        CoreScalar::parse(tnorm2).map_err(value_err)?,
        CoreScalar::parse(gamma).map_err(value_err)?,
    );
    let out = report::estimates_output(&input);
    serde_json::to_string_pretty(&out).map_err(value_err)
}

/// Torsion spectrum of a constructed catalog space (`s3` or `b7`):
/// `[(eigenvalue, multiplicity), ...]` with exact eigenvalue strings.
#[pyfunction]
fn torsion_spectrum(target: &str) -> PyResult<Vec<(String, usize)>> {
    let entry = match target {
        "s3" => catalog::build_s3(),
        "b7" => catalog::build_b7(),
        other => return Err(value_err(format!("unknown constructed space `{other}`"))),
    };
    let geo = report::entry_geometry(&entry);
    let spectrum = geo.t_spectrum().map_err(value_err)?;
    if !spectrum.exact {
        return Err(value_err("spectrum not resolved exactly"));
    }
    Ok(spectrum
        .eigenvalues
        .into_iter()
        .map(|(v, m)| (format!("{v}"), m))
        .collect())
}

/// The canonical torsion 3-form of a constructed catalog space.
#[pyfunction]
fn catalog_torsion(target: &str) -> PyResult<PyMultivector> {
    let entry = match target {
        "s3" => catalog::build_s3(),
        "b7" => catalog::build_b7(),
        other => return Err(value_err(format!("unknown constructed space `{other}`"))),
    };
    Ok(PyMultivector { inner: entry.torsion })
}

/// Loads a JSON space definition and returns its fully derived summary.
#[pyfunction]
fn load_space_summary(json: &str) -> PyResult<String> {
    let entry = catalog::load_space(json).map_err(value_err)?;
    let summary = serde_json::json!({
        "name": entry.name,
        "dim_k": entry.space.dim_k,
        "dim_m": entry.space.dim_m,
        "torsion": format!("{}", entry.torsion),
        "tnorm2": format!("{}", entry.expected.tnorm2),
        "sca_g": format!("{}", entry.expected.sca_g),
        "sca_c": format!("{}", entry.expected.sca_c),
    });
    Ok(summary.to_string())
}

/// The built-in verify targets.
#[pyfunction]
fn catalog_targets() -> Vec<String> {
    report::catalog_targets().iter().map(|s| s.to_string()).collect()
}

#[pymodule]
fn spingeo(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScalar>()?;
    m.add_class::<PyMultivector>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(fuzz, m)?)?;
    m.add_function(wrap_pyfunction!(estimates, m)?)?;
    m.add_function(wrap_pyfunction!(torsion_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_torsion, m)?)?;
    m.add_function(wrap_pyfunction!(load_space_summary, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_targets, m)?)?;
    Ok(())
}
