//! Python bindings: metrics, representations and the constraint checks,
//! with verdicts returned as plain result objects.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use yangian_core::checker::{self as ck, CheckerError, ConstraintReport, Gh7Form};
use yangian_core::element::Element;
use yangian_core::metric::{make_metric, AlgebraKind, Metric as CoreMetric};
use yangian_core::reps::{self, GeneratorMatrix};
use yangian_core::tensorspace;
use yangian_core::{CentralPoly, NCElement};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_form(relation: &str) -> PyResult<Gh7Form> {
    match relation {
        "stated" => Ok(Gh7Form::AsStated),
        "derived" => Ok(Gh7Form::Derived),
        other => Err(value_err(format!(
            "relation must be `stated` or `derived`, got `{other}`"
        ))),
    }
}

#[pyclass(name = "Metric", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyMetric {
    inner: CoreMetric,
}

#[pymethods]
impl PyMetric {
    /// `kind` is `"so"` or `"sp"`.
    #[new]
    fn new(kind: &str, n: usize) -> PyResult<Self> {
        let kind = AlgebraKind::parse(kind)
            .ok_or_else(|| value_err(format!("unknown algebra `{kind}`")))?;
        Ok(PyMetric {
            inner: make_metric(kind, n).map_err(value_err)?,
        })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.short()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    /// `+1` or `−1`.
    #[getter]
    fn eps(&self) -> i64 {
        if self.inner.is_orthogonal() {
            1
        } else {
            -1
        }
    }

    #[getter]
    fn beta(&self) -> String {
        yangian_core::coefficients::format_rational(&self.inner.beta)
    }

    fn __repr__(&self) -> String {
        format!("Metric('{}', {})", self.kind(), self.inner.n)
    }
}

#[pyclass(name = "CheckResult", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyCheckResult {
    inner: ck::CheckResult,
}

#[pymethods]
impl PyCheckResult {
    #[getter]
    fn id(&self) -> String {
        self.inner.id.clone()
    }

    #[getter]
    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// `(indices, entry)` with 1-based indices, or `None`.
    #[getter]
    fn witness(&self) -> Option<(Vec<usize>, String)> {
        self.inner
            .witness
            .as_ref()
            .map(|w| (w.indices.clone(), w.entry.clone()))
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.inner.notes.clone()
    }

    fn __bool__(&self) -> bool {
        self.inner.is_zero()
    }

    fn __repr__(&self) -> String {
        format!("CheckResult({})", self.inner)
    }
}

fn wrap(r: ck::CheckResult) -> PyCheckResult {
    PyCheckResult { inner: r }
}

#[pyclass(name = "Report", frozen)]
pub struct PyReport {
    #[pyo3(get)]
    title: String,
    results: Vec<ck::CheckResult>,
    #[pyo3(get)]
    centrals: BTreeMap<String, String>,
    #[pyo3(get)]
    notes: Vec<String>,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn results(&self) -> Vec<PyCheckResult> {
        self.results.iter().cloned().map(wrap).collect()
    }

    fn all_zero(&self) -> bool {
        self.results.iter().all(ck::CheckResult::is_zero)
    }

    fn get(&self, id: &str) -> Option<PyCheckResult> {
        self.results.iter().find(|r| r.id == id).cloned().map(wrap)
    }

    fn __repr__(&self) -> String {
        let bad = self.results.iter().filter(|r| !r.is_zero()).count();
        format!(
            "Report('{}', {} results, {bad} nonzero)",
            self.title,
            self.results.len()
        )
    }
}

impl PyReport {
    fn from_core<E: Element>(r: ConstraintReport<E>) -> Self {
        PyReport {
            title: r.title,
            results: r.results,
            centrals: r.data.rendered(),
            notes: r.notes,
        }
    }

    fn single(title: &str, r: ck::CheckResult) -> Self {
        PyReport {
            title: title.to_string(),
            results: vec![r],
            centrals: BTreeMap::new(),
            notes: Vec::new(),
        }
    }
}

/// A representation: generator matrix `G`, optional second-order part `H`,
/// and whether `G` is resolved into a quadratic pair when one is needed.
#[pyclass(name = "Rep", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyRep {
    g: GeneratorMatrix<NCElement>,
    h: Option<GeneratorMatrix<NCElement>>,
    resolve: bool,
}

#[pymethods]
impl PyRep {
    #[staticmethod]
    fn fundamental(metric: &PyMetric) -> Self {
        PyRep {
            g: reps::fundamental_rep(&metric.inner),
            h: None,
            resolve: false,
        }
    }

    #[staticmethod]
    fn spinor(metric: &PyMetric) -> Self {
        PyRep {
            g: reps::spinor_rep(&metric.inner),
            h: None,
            resolve: false,
        }
    }

    #[staticmethod]
    fn js(metric: &PyMetric) -> Self {
        PyRep {
            g: reps::js_rep(&metric.inner),
            h: None,
            resolve: true,
        }
    }

    #[staticmethod]
    fn r_quadratic(metric: &PyMetric) -> Self {
        let (g, h) = reps::r_as_quadratic(&metric.inner);
        PyRep {
            g,
            h: Some(h),
            resolve: false,
        }
    }

    /// Parses the text representation format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let f = reps::load_rep_str(text).map_err(value_err)?;
        Ok(PyRep {
            g: f.g,
            h: f.h,
            resolve: false,
        })
    }

    fn to_text(&self) -> String {
        reps::write_rep(&self.g, self.h.as_ref())
    }

    #[getter]
    fn metric(&self) -> PyMetric {
        PyMetric {
            inner: self.g.metric.clone(),
        }
    }

    #[getter]
    fn n(&self) -> usize {
        self.g.n()
    }

    #[getter]
    fn label(&self) -> String {
        self.g.label.clone()
    }

    #[getter]
    fn has_h(&self) -> bool {
        self.h.is_some()
    }

    /// Rendered `G^a_b`, 1-based.
    fn entry(&self, a: usize, b: usize) -> PyResult<String> {
        let n = self.g.n();
        if a == 0 || b == 0 || a > n || b > n {
            return Err(value_err(format!("index ({a}, {b}) outside 1..={n}")));
        }
        Ok(self.g.get(a - 1, b - 1).render())
    }

    /// Normalized trace of `Ḡ²`, rendered.
    fn casimir(&self) -> String {
        reps::casimir_m2(&self.g).render()
    }

    fn __repr__(&self) -> String {
        format!("Rep('{}', {})", self.g.label, self.g.metric)
    }
}

/// The checks that take a representation, each runnable on symbolic
/// entries or on Fock matrices.
#[derive(Clone, Copy)]
enum RepCheck {
    Linear,
    Quadratic,
    LieResolution,
    SpinConditions,
    Rll,
}

fn verdict_or_error(title: &str, e: CheckerError) -> PyResult<PyReport> {
    match e {
        CheckerError::LieViolation(r) | CheckerError::W12Nonzero(r) => {
            Ok(PyReport::single(title, r))
        }
        CheckerError::NonCentralCasimir(x) => Ok(PyReport::single(
            title,
            ck::CheckResult::nonzero(
                "M2.CENTRAL",
                Vec::new(),
                format!("fails to commute with {x}"),
            ),
        )),
        other => Err(value_err(other)),
    }
}

fn l_operator<E: Element>(
    g: &GeneratorMatrix<E>,
    h: Option<&GeneratorMatrix<E>>,
    resolve: bool,
    form: Gh7Form,
) -> Result<GeneratorMatrix<E>, CheckerError> {
    match h {
        Some(h) => Ok(ck::quadratic_l(g, h)),
        None if resolve => {
            let pair = ck::resolution_pair(g, form)?;
            Ok(ck::quadratic_l(&pair.g, &pair.h))
        }
        None => Ok(ck::linear_l(g)),
    }
}

fn run_check<E: Element>(
    check: RepCheck,
    g: &GeneratorMatrix<E>,
    h: Option<&GeneratorMatrix<E>>,
    resolve: bool,
    form: Gh7Form,
) -> PyResult<PyReport> {
    match check {
        RepCheck::Linear => Ok(PyReport::from_core(ck::check_linear(g))),
        RepCheck::Quadratic => match h {
            Some(h) => Ok(PyReport::from_core(ck::check_quadratic(g, h))),
            None if resolve => match ck::resolution_pair(g, form) {
                Ok(p) => Ok(PyReport::from_core(ck::check_quadratic(&p.g, &p.h))),
                Err(e) => verdict_or_error("quadratic", e),
            },
            None => Err(value_err("representation has no second-order part")),
        },
        RepCheck::LieResolution => match ck::check_lie_resolution_with(g, form) {
            Ok(r) => Ok(PyReport::from_core(r)),
            Err(e) => verdict_or_error("Lie algebra resolution", e),
        },
        RepCheck::SpinConditions => match ck::check_spin_conditions(g) {
            Ok(r) => Ok(PyReport::from_core(r)),
            Err(e) => verdict_or_error("spin conditions", e),
        },
        RepCheck::Rll => match l_operator(g, h, resolve, form) {
            Ok(l) => Ok(PyReport::single("RLL", ck::verify_rll(&l))),
            Err(e) => verdict_or_error("RLL", e),
        },
    }
}

fn dispatch(check: RepCheck, rep: &PyRep, backend: &str, relation: &str) -> PyResult<PyReport> {
    let form = parse_form(relation)?;
    match backend {
        "symbolic" => run_check(check, &rep.g, rep.h.as_ref(), rep.resolve, form),
        "matrix" => {
            let fb = reps::fock_backend(rep.g.proto().spec()).map_err(value_err)?;
            let g = fb.evaluate_matrix(&rep.g);
            let h = match &rep.h {
                Some(h) => Some(
                    reps::fock_backend(h.proto().spec())
                        .map_err(value_err)?
                        .evaluate_matrix(h),
                ),
                None => None,
            };
            run_check(check, &g, h.as_ref(), rep.resolve, form)
        }
        other => Err(value_err(format!(
            "backend must be `symbolic` or `matrix`, got `{other}`"
        ))),
    }
}

#[pyfunction]
fn verify_ybe(metric: &PyMetric) -> PyCheckResult {
    wrap(tensorspace::verify_ybe(&metric.inner))
}

/// `PK = εK = KP`, `K² = nεK`, `P² = I`.
#[pyfunction]
fn verify_structural(metric: &PyMetric) -> Vec<PyCheckResult> {
    tensorspace::verify_structural(&metric.inner)
        .into_iter()
        .map(wrap)
        .collect()
}

#[pyfunction]
#[pyo3(signature = (rep, backend = "symbolic"))]
fn check_linear(rep: &PyRep, backend: &str) -> PyResult<PyReport> {
    dispatch(RepCheck::Linear, rep, backend, "stated")
}

#[pyfunction]
#[pyo3(signature = (rep, backend = "symbolic", relation = "stated"))]
fn check_quadratic(rep: &PyRep, backend: &str, relation: &str) -> PyResult<PyReport> {
    dispatch(RepCheck::Quadratic, rep, backend, relation)
}

#[pyfunction]
#[pyo3(signature = (rep, backend = "symbolic", relation = "stated"))]
fn check_lie_resolution(rep: &PyRep, backend: &str, relation: &str) -> PyResult<PyReport> {
    dispatch(RepCheck::LieResolution, rep, backend, relation)
}

#[pyfunction]
#[pyo3(signature = (rep, backend = "symbolic"))]
fn check_spin_conditions(rep: &PyRep, backend: &str) -> PyResult<PyReport> {
    dispatch(RepCheck::SpinConditions, rep, backend, "stated")
}

#[pyfunction]
#[pyo3(signature = (rep, backend = "symbolic", relation = "stated"))]
fn verify_rll(rep: &PyRep, backend: &str, relation: &str) -> PyResult<PyCheckResult> {
    let r = dispatch(RepCheck::Rll, rep, backend, relation)?;
    Ok(wrap(r.results.into_iter().next().expect("one result")))
}

/// `(c(u), proportional, central)` for the representation's `L(u)`.
#[pyfunction]
#[pyo3(signature = (rep, relation = "stated"))]
fn center_function(
    rep: &PyRep,
    relation: &str,
) -> PyResult<(String, PyCheckResult, PyCheckResult)> {
    let l = l_operator(&rep.g, rep.h.as_ref(), rep.resolve, parse_form(relation)?)
        .map_err(value_err)?;
    let cf = ck::center_function(&l);
    Ok((cf.c.render(), wrap(cf.proportional), wrap(cf.central)))
}

/// Coefficients of the order-2 or order-3 polynomial in `Ḡ`, with the
/// Casimir as the central symbol `m2`.
#[pyfunction]
fn char_poly(order: u32, metric: &PyMetric) -> PyResult<Vec<String>> {
    let coeffs = ck::char_poly(order, &metric.inner, &CentralPoly::var("m2")).map_err(value_err)?;
    Ok(coeffs.iter().map(Element::render).collect())
}

/// Reconstruction of the quadratic RLL relation in the free algebra:
/// `(original, original with −G on the right, derived)`.
#[pyfunction]
fn decompose_free(metric: &PyMetric) -> (PyCheckResult, PyCheckResult, PyCheckResult) {
    let (g, h) = reps::free_pair(&metric.inner);
    let d = ck::decompose_rll(&g, &h);
    (
        wrap(d.reconstruction),
        wrap(d.reconstruction_sign_flipped),
        wrap(d.reconstruction_derived),
    )
}

/// `L(u)L(u+δ)` of two independent copies, checked against RLL.
#[pyfunction]
fn verify_fused(rep: &PyRep) -> PyResult<PyCheckResult> {
    let l =
        l_operator(&rep.g, rep.h.as_ref(), rep.resolve, Gh7Form::AsStated).map_err(value_err)?;
    let fused = ck::fuse(&l, &l, yangian_core::Symbol::delta()).map_err(value_err)?;
    Ok(wrap(ck::verify_rll(&fused)))
}

#[pymodule]
fn yangian(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMetric>()?;
    m.add_class::<PyCheckResult>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyRep>()?;
    m.add_function(wrap_pyfunction!(verify_ybe, m)?)?;
    m.add_function(wrap_pyfunction!(verify_structural, m)?)?;
    m.add_function(wrap_pyfunction!(check_linear, m)?)?;
    m.add_function(wrap_pyfunction!(check_quadratic, m)?)?;
    m.add_function(wrap_pyfunction!(check_lie_resolution, m)?)?;
    m.add_function(wrap_pyfunction!(check_spin_conditions, m)?)?;
    m.add_function(wrap_pyfunction!(verify_rll, m)?)?;
    m.add_function(wrap_pyfunction!(center_function, m)?)?;
    m.add_function(wrap_pyfunction!(char_poly, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_free, m)?)?;
    m.add_function(wrap_pyfunction!(verify_fused, m)?)?;
    Ok(())
}
