//! Python bindings for `hypspectrum`.

use hypspectrum::cli::{parse_class, ClassQuery};
use hypspectrum::geometry::{HypStructure, Realization};
use hypspectrum::spectrum::{self, MetricEstimate};
use hypspectrum::surface::SurfaceType;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A hyperbolic structure given by Fenchel–Nielsen coordinates on the default
/// pants decomposition.
#[pyclass(name = "Structure", frozen)]
struct PyStructure {
    inner: HypStructure,
}

#[pymethods]
impl PyStructure {
    #[new]
    #[pyo3(signature = (genus, punctures, boundary, curve_lengths, twists, boundary_lengths))]
    fn new(
        genus: usize,
        punctures: usize,
        boundary: usize,
        curve_lengths: Vec<f64>,
        twists: Vec<f64>,
        boundary_lengths: Vec<f64>,
    ) -> PyResult<Self> {
        let st = SurfaceType::new(genus, punctures, boundary);
        let inner = HypStructure::new(st, curve_lengths, twists, boundary_lengths).map_err(value_error)?;
        Ok(PyStructure { inner })
    }

    /// Pair of pants with the given cuff lengths.
    #[staticmethod]
    fn pants(l1: f64, l2: f64, l3: f64) -> PyResult<Self> {
        Ok(PyStructure { inner: HypStructure::pants(l1, l2, l3).map_err(value_error)? })
    }

    /// One-holed torus with pants curve length, twist and boundary length.
    #[staticmethod]
    fn one_holed_torus(ell: f64, tau: f64, boundary: f64) -> PyResult<Self> {
        Ok(PyStructure { inner: HypStructure::one_holed_torus(ell, tau, boundary).map_err(value_error)? })
    }

    /// Lengths of named classes, such as `"boundary 1"`, `"seam 1-2"` or `"slope 1/1"`.
    fn lengths(&self, classes: Vec<String>) -> PyResult<Vec<f64>> {
        let real = Realization::new(&self.inner).map_err(value_error)?;
        classes
            .iter()
            .map(|name| {
                let l = match parse_class(self.inner.surface, name).map_err(value_error)? {
                    ClassQuery::Curve(c) => real.curve_length(&c),
                    ClassQuery::Arc(a) => real.arc_length(&a),
                };
                l.map_err(value_error)
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        let x = &self.inner;
        format!(
            "Structure(surface={:?}, curve_lengths={:?}, twists={:?}, boundary_lengths={:?})",
            x.surface, x.curve_lengths, x.twists, x.boundary_lengths
        )
    }
}

/// Estimate of `name` (d, dbar, dL, deltaL or K) from `x` to `y`.
///
/// Returns `(value, witness, exact, slack)`.
#[pyfunction]
#[pyo3(signature = (x, y, name, bound = 6))]
fn metric(x: &PyStructure, y: &PyStructure, name: &str, bound: usize) -> PyResult<(f64, String, bool, f64)> {
    let (x, y) = (&x.inner, &y.inner);
    let e: MetricEstimate = match name {
        "d" => spectrum::d_weak(x, y, bound),
        "dbar" => spectrum::d_bar(x, y, bound),
        "dL" => spectrum::d_l(x, y, bound),
        "deltaL" => spectrum::delta_l(x, y, bound),
        "K" => spectrum::k_ratio(x, y, bound),
        other => return Err(PyValueError::new_err(format!("unknown metric {other:?}"))),
    }
    .map_err(value_error)?;
    let witness = e.witness.map(|w| w.to_string()).unwrap_or_default();
    Ok((e.value, witness, e.exact, e.slack))
}

#[pymodule]
fn hypspectrum_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStructure>()?;
    m.add_function(wrap_pyfunction!(metric, m)?)?;
    Ok(())
}
