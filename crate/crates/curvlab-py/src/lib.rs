//! Python bindings: the metric catalog, the frame curvature engine and the
//! global verifiers, importable as the `curvlab` extension module.
//!
//! Rich report structures come back as plain dictionaries (mirroring the
//! CLI's JSON reports); the core domain types are proper classes.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use curvlab::metric::End;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// serde_json -> Python, for the report structures.
fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        serde_json::Value::Null => py.None().into_bound(py),
        serde_json::Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else {
                n.as_f64()
                    .unwrap_or(f64::NAN)
                    .into_pyobject(py)?
                    .into_any()
            }
        }
        serde_json::Value::String(s) => s.into_pyobject(py)?.into_any(),
        serde_json::Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        serde_json::Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.into_any()
        }
    })
}

fn report_to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let json = serde_json::to_value(value).map_err(value_error)?;
    json_to_py(py, &json)
}

fn parse_end(end: &str) -> PyResult<End> {
    match end {
        "lower" => Ok(End::Lower),
        "upper" => Ok(End::Upper),
        other => Err(value_error(format!(
            "end must be 'lower' or 'upper', got {other:?}"
        ))),
    }
}

/// Scalar with first and second derivative; the arithmetic propagates
/// derivatives exactly.
#[pyclass(name = "Jet2", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyJet2(curvlab::Jet2);

#[pymethods]
impl PyJet2 {
    #[new]
    fn new(val: f64, d1: f64, d2: f64) -> Self {
        PyJet2(curvlab::Jet2::new(val, d1, d2))
    }

    #[staticmethod]
    fn variable(t0: f64) -> Self {
        PyJet2(curvlab::Jet2::variable(t0))
    }

    #[staticmethod]
    fn constant(c: f64) -> Self {
        PyJet2(curvlab::Jet2::constant(c))
    }

    #[getter]
    fn val(&self) -> f64 {
        self.0.val
    }

    #[getter]
    fn d1(&self) -> f64 {
        self.0.d1
    }

    #[getter]
    fn d2(&self) -> f64 {
        self.0.d2
    }

    fn __repr__(&self) -> String {
        format!("Jet2({}, {}, {})", self.0.val, self.0.d1, self.0.d2)
    }

    fn __add__(&self, rhs: &PyJet2) -> PyJet2 {
        PyJet2(self.0 + rhs.0)
    }

    fn __sub__(&self, rhs: &PyJet2) -> PyJet2 {
        PyJet2(self.0 - rhs.0)
    }

    fn __mul__(&self, rhs: &PyJet2) -> PyJet2 {
        PyJet2(self.0 * rhs.0)
    }

    fn __truediv__(&self, rhs: &PyJet2) -> PyResult<PyJet2> {
        self.0.try_div(rhs.0).map(PyJet2).map_err(value_error)
    }

    fn __neg__(&self) -> PyJet2 {
        PyJet2(-self.0)
    }

    fn sqrt(&self) -> PyResult<PyJet2> {
        self.0.try_sqrt().map(PyJet2).map_err(value_error)
    }

    fn sin(&self) -> PyJet2 {
        PyJet2(self.0.sin())
    }

    fn cos(&self) -> PyJet2 {
        PyJet2(self.0.cos())
    }

    fn pow(&self, exp: &PyJet2) -> PyResult<PyJet2> {
        self.0.try_pow(exp.0).map(PyJet2).map_err(value_error)
    }
}

#[pyclass(name = "PageConstants", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyPageConstants(curvlab::PageConstants);

#[pymethods]
impl PyPageConstants {
    #[getter]
    fn a(&self) -> f64 {
        self.0.a
    }

    #[getter]
    fn c_coef(&self) -> f64 {
        self.0.c_coef
    }

    #[getter]
    fn d_coef(&self) -> f64 {
        self.0.d_coef
    }

    /// Residual of the defining quartic at the stored root.
    fn quartic_residual(&self) -> f64 {
        curvlab::metric::page_quartic(self.0.a)
    }

    fn __repr__(&self) -> String {
        format!("PageConstants(a={})", self.0.a)
    }
}

#[pyclass(name = "CoframeConvention", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyCoframeConvention(curvlab::CoframeConvention);

#[pymethods]
impl PyCoframeConvention {
    #[new]
    fn new(kappa: f64) -> PyResult<Self> {
        curvlab::CoframeConvention::new(kappa)
            .map(PyCoframeConvention)
            .map_err(value_error)
    }

    #[staticmethod]
    fn flat(box_volume: f64) -> Self {
        PyCoframeConvention(curvlab::CoframeConvention::flat(box_volume))
    }

    /// The convention the metric catalog is calibrated to (kappa = 2).
    #[staticmethod]
    fn calibrated() -> Self {
        PyCoframeConvention(curvlab::CoframeConvention::calibrated())
    }

    #[getter]
    fn kappa(&self) -> f64 {
        self.0.kappa
    }

    #[getter]
    fn sigma_volume(&self) -> f64 {
        self.0.sigma_volume
    }

    fn __repr__(&self) -> String {
        format!("CoframeConvention(kappa={})", self.0.kappa)
    }
}

#[pyclass(name = "DiagonalMetric", frozen)]
struct PyDiagonalMetric(curvlab::DiagonalMetric);

#[pymethods]
impl PyDiagonalMetric {
    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    #[getter]
    fn domain(&self) -> (f64, f64) {
        self.0.domain()
    }

    #[getter]
    fn kappa(&self) -> f64 {
        self.0.convention().kappa
    }

    /// Jets of the four coefficients at an interior point.
    fn coefficients(&self, t: f64) -> PyResult<(PyJet2, PyJet2, PyJet2, PyJet2)> {
        let [a, b, c, d] = self.0.coefficients(t).map_err(value_error)?;
        Ok((PyJet2(a), PyJet2(b), PyJet2(c), PyJet2(d)))
    }

    fn endpoint_kind(&self, end: &str) -> PyResult<String> {
        let kind = self.0.endpoint_kind(parse_end(end)?);
        Ok(format!("{kind:?}").to_lowercase())
    }

    fn validate_endpoints(&self) -> PyResult<()> {
        self.0.validate_endpoints().map_err(value_error)
    }

    fn __repr__(&self) -> String {
        let (t0, t1) = self.0.domain();
        format!("DiagonalMetric({:?}, domain=({t0}, {t1}))", self.0.label())
    }
}

#[pyclass(name = "FrameCurvature", frozen)]
struct PyFrameCurvature(curvlab::FrameCurvature);

#[pymethods]
impl PyFrameCurvature {
    #[getter]
    fn t(&self) -> f64 {
        self.0.t
    }

    /// Riemann component R_abcd in the orthonormal frame.
    fn component(&self, a: usize, b: usize, c: usize, d: usize) -> PyResult<f64> {
        if [a, b, c, d].iter().any(|&i| i > 3) {
            return Err(value_error("frame indices run over 0..=3"));
        }
        Ok(self.0.component(a, b, c, d))
    }

    /// Sectional curvature of the (e_a, e_b) frame plane.
    fn sectional_frame(&self, a: usize, b: usize) -> PyResult<f64> {
        if a > 3 || b > 3 {
            return Err(value_error("frame indices run over 0..=3"));
        }
        Ok(self.0.sectional_frame(a, b))
    }

    /// Sectional curvature of the plane spanned by arbitrary vectors.
    fn sectional(&self, u: [f64; 4], v: [f64; 4]) -> PyResult<f64> {
        curvlab::sectional(&self.0, &u, &v).map_err(value_error)
    }

    /// Ricci matrix and the scalar/traceless/Weyl decomposition.
    fn decompose<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        let (ricci, dec) = self.0.decompose();
        let ricci_list = PyList::empty(py);
        for row in ricci {
            ricci_list.append(PyList::new(py, row)?)?;
        }
        Ok((ricci_list.into_any(), report_to_py(py, &dec)?))
    }

    /// Worst antisymmetry / pair-symmetry / Bianchi violations.
    fn symmetry_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        report_to_py(py, &self.0.symmetry_report())
    }
}

#[pyfunction]
fn solve_page_constant() -> PyPageConstants {
    PyPageConstants(curvlab::solve_page_constant())
}

#[pyfunction]
fn page_metric_r(pc: &PyPageConstants, conv: &PyCoframeConvention) -> PyDiagonalMetric {
    PyDiagonalMetric(curvlab::page_metric_r(&pc.0, conv.0))
}

#[pyfunction]
fn page_metric_x(pc: &PyPageConstants, conv: &PyCoframeConvention) -> PyDiagonalMetric {
    PyDiagonalMetric(curvlab::page_metric_x(&pc.0, conv.0))
}

#[pyfunction]
fn round_sphere_metric(conv: &PyCoframeConvention) -> PyResult<PyDiagonalMetric> {
    curvlab::round_sphere_metric(conv.0)
        .map(PyDiagonalMetric)
        .map_err(value_error)
}

#[pyfunction]
fn fubini_study_metric(conv: &PyCoframeConvention) -> PyResult<PyDiagonalMetric> {
    curvlab::fubini_study_metric(conv.0)
        .map(PyDiagonalMetric)
        .map_err(value_error)
}

#[pyfunction]
fn flat_metric() -> PyDiagonalMetric {
    PyDiagonalMetric(curvlab::flat_metric())
}

/// Build a metric from the plain-text config format (same grammar as the
/// CLI's config files).
#[pyfunction]
fn custom_metric(config_text: &str) -> PyResult<PyDiagonalMetric> {
    curvlab::custom_metric(config_text)
        .map(PyDiagonalMetric)
        .map_err(value_error)
}

#[pyfunction]
fn riemann_frame(m: &PyDiagonalMetric, t: f64) -> PyResult<PyFrameCurvature> {
    curvlab::riemann_frame(&m.0, t)
        .map(PyFrameCurvature)
        .map_err(value_error)
}

#[pyfunction]
fn structure_equation_residual(m: &PyDiagonalMetric, t: f64) -> PyResult<f64> {
    curvlab::structure_equation_residual(&m.0, t).map_err(value_error)
}

/// Closed-form K01 of the Page metric in the x chart.
#[pyfunction]
fn page_k01(pc: &PyPageConstants, x: f64) -> f64 {
    curvlab::page_k01(&pc.0, x)
}

/// Evaluate a coefficient expression at `t` with optional named constants
/// (`pi` is predeclared). Returns the jet of the result.
#[pyfunction]
#[pyo3(signature = (text, t, constants = None))]
fn eval_expression(
    text: &str,
    t: f64,
    constants: Option<std::collections::BTreeMap<String, f64>>,
) -> PyResult<PyJet2> {
    let ast = curvlab::parse_expression(text).map_err(value_error)?;
    let mut consts = curvlab::Constants::standard();
    for (name, value) in constants.unwrap_or_default() {
        consts.define(&name, value).map_err(value_error)?;
    }
    ast.eval(curvlab::Jet2::variable(t), &consts)
        .map(PyJet2)
        .map_err(value_error)
}

#[pyfunction]
fn einstein_report<'py>(
    py: Python<'py>,
    m: &PyDiagonalMetric,
    n_samples: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let report = curvlab::einstein_report(&m.0, n_samples).map_err(value_error)?;
    report_to_py(py, &report)
}

/// Scan the Page K01 for a sign change on (-1, 1).
#[pyfunction]
fn k01_sign_change<'py>(
    py: Python<'py>,
    pc: &PyPageConstants,
    n: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let pc = pc.0;
    let scan = curvlab::sign_change_scan(move |x| curvlab::page_k01(&pc, x), (-1.0, 1.0), n)
        .map_err(value_error)?;
    report_to_py(py, &scan)
}

#[pyfunction]
#[pyo3(signature = (m, n_points, n_planes, seed = curvlab::DEFAULT_SEED))]
fn k_range_scan<'py>(
    py: Python<'py>,
    m: &PyDiagonalMetric,
    n_points: usize,
    n_planes: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let report = curvlab::k_range_scan(&m.0, n_points, n_planes, seed).map_err(value_error)?;
    report_to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (m, quad_order = 128))]
fn char_numbers<'py>(
    py: Python<'py>,
    m: &PyDiagonalMetric,
    quad_order: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let report = curvlab::char_numbers(&m.0, quad_order).map_err(value_error)?;
    report_to_py(py, &report)
}

#[pyfunction]
fn bolt_geodesy_check<'py>(
    py: Python<'py>,
    m: &PyDiagonalMetric,
    end: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let report = curvlab::bolt_geodesy_check(&m.0, parse_end(end)?).map_err(value_error)?;
    report_to_py(py, &report)
}

#[pyfunction]
fn inequality_predicates<'py>(py: Python<'py>, chi: f64, tau: f64) -> PyResult<Bound<'py, PyAny>> {
    report_to_py(py, &curvlab::inequality_predicates(chi, tau))
}

#[pyfunction]
fn calibrate_convention<'py>(
    py: Python<'py>,
    candidates: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let report = curvlab::calibrate_convention(&candidates).map_err(value_error)?;
    report_to_py(py, &report)
}

#[pymodule]
#[pyo3(name = "curvlab")]
fn curvlab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyJet2>()?;
    m.add_class::<PyPageConstants>()?;
    m.add_class::<PyCoframeConvention>()?;
    m.add_class::<PyDiagonalMetric>()?;
    m.add_class::<PyFrameCurvature>()?;
    m.add_function(wrap_pyfunction!(solve_page_constant, m)?)?;
    m.add_function(wrap_pyfunction!(page_metric_r, m)?)?;
    m.add_function(wrap_pyfunction!(page_metric_x, m)?)?;
    m.add_function(wrap_pyfunction!(round_sphere_metric, m)?)?;
    m.add_function(wrap_pyfunction!(fubini_study_metric, m)?)?;
    m.add_function(wrap_pyfunction!(flat_metric, m)?)?;
    m.add_function(wrap_pyfunction!(custom_metric, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_frame, m)?)?;
    m.add_function(wrap_pyfunction!(structure_equation_residual, m)?)?;
    m.add_function(wrap_pyfunction!(page_k01, m)?)?;
    m.add_function(wrap_pyfunction!(eval_expression, m)?)?;
    m.add_function(wrap_pyfunction!(einstein_report, m)?)?;
    m.add_function(wrap_pyfunction!(k01_sign_change, m)?)?;
    m.add_function(wrap_pyfunction!(k_range_scan, m)?)?;
    m.add_function(wrap_pyfunction!(char_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(bolt_geodesy_check, m)?)?;
    m.add_function(wrap_pyfunction!(inequality_predicates, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate_convention, m)?)?;
    m.add("DEFAULT_SEED", curvlab::DEFAULT_SEED)?;
    m.add("CALIBRATED_KAPPA", curvlab::CALIBRATED_KAPPA)?;
    Ok(())
}
