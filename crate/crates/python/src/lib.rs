use awdaha::forms::{constant_term_closed, FormKind, Quadrature, QuadratureSettings};
use awdaha::operators::{named_expr, Token};
use awdaha::polys::{nonsym_rodrigues, nonsym_series, Family};
use awdaha::scalar::parse_rational;
use awdaha::transform::Transform;
use awdaha::{LaurentPoly, MpComplex, ParameterSet, Rational};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyComplex, PyDict, PyList};
use serde_json::Value;

fn err(e: awdaha::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Accepts `int`, `str` or `fractions.Fraction`.
fn rational(x: &Bound<'_, PyAny>) -> PyResult<Rational> {
    parse_rational(&x.str()?.to_string()).map_err(err)
}

fn complex<'py>(py: Python<'py>, z: &MpComplex) -> Bound<'py, PyComplex> {
    let (re, im) = z.to_f64_pair();
    PyComplex::from_doubles(py, re, im)
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any().unbind(),
            None => n
                .as_f64()
                .unwrap_or(f64::NAN)
                .into_pyobject(py)?
                .into_any()
                .unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(xs) => {
            let out = PyList::empty(py);
            for x in xs {
                out.append(to_py(py, x)?)?;
            }
            out.into_any().unbind()
        }
        Value::Object(map) => {
            let out = PyDict::new(py);
            for (k, x) in map {
                out.set_item(k, to_py(py, x)?)?;
            }
            out.into_any().unbind()
        }
    })
}

/// A point `(p, k0, k1, u0, u1)` with exact rational entries.
#[pyclass(name = "Params", frozen)]
struct PyParams {
    inner: ParameterSet<Rational>,
}

#[pymethods]
impl PyParams {
    #[new]
    fn new(
        p: &Bound<'_, PyAny>,
        k0: &Bound<'_, PyAny>,
        k1: &Bound<'_, PyAny>,
        u0: &Bound<'_, PyAny>,
        u1: &Bound<'_, PyAny>,
    ) -> PyResult<Self> {
        let inner = ParameterSet::new(
            rational(p)?,
            rational(k0)?,
            rational(k1)?,
            rational(u0)?,
            rational(u1)?,
        )
        .map_err(err)?;
        Ok(PyParams { inner })
    }

    #[staticmethod]
    fn fixture() -> Self {
        PyParams {
            inner: ParameterSet::fixture(),
        }
    }

    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        Ok(PyParams {
            inner: ParameterSet::parse(s).map_err(err)?,
        })
    }

    #[getter]
    fn q(&self) -> String {
        self.inner.q().to_string()
    }

    /// `(a, b, c, d)` as strings.
    #[getter]
    fn abcd(&self) -> (String, String, String, String) {
        let t = &self.inner;
        (
            t.a().to_string(),
            t.b().to_string(),
            t.c().to_string(),
            t.d().to_string(),
        )
    }

    fn gamma(&self, m: i64) -> String {
        self.inner.gamma(m).to_string()
    }

    fn dual(&self) -> Self {
        PyParams {
            inner: self.inner.dual(),
        }
    }

    fn inverse(&self) -> Self {
        PyParams {
            inner: self.inner.inverse(),
        }
    }

    fn shifted(&self) -> Self {
        PyParams {
            inner: self.inner.shifted(),
        }
    }

    fn __str__(&self) -> String {
        self.inner.to_compact()
    }

    fn __repr__(&self) -> String {
        format!("Params({})", self.inner.to_compact())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// An exact Laurent polynomial in `x`.
#[pyclass(name = "Poly", frozen)]
struct PyPoly {
    inner: LaurentPoly<Rational>,
}

#[pymethods]
impl PyPoly {
    #[new]
    #[pyo3(signature = (terms = None))]
    fn new(terms: Option<Vec<(i64, Bound<'_, PyAny>)>>) -> PyResult<Self> {
        let mut inner = LaurentPoly::zero();
        for (e, c) in terms.unwrap_or_default() {
            inner.add_term(e, rational(&c)?);
        }
        Ok(PyPoly { inner })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyPoly {
            inner: LaurentPoly::parse_text(text, &()).map_err(err)?,
        })
    }

    /// `[(exponent, coefficient)]` in increasing exponent order.
    fn terms(&self) -> Vec<(i64, String)> {
        self.inner
            .terms()
            .map(|(e, c)| (e, c.to_string()))
            .collect()
    }

    fn coeff(&self, e: i64) -> Option<String> {
        self.inner.coeff(e).map(|c| c.to_string())
    }

    fn is_symmetric(&self) -> bool {
        self.inner.is_symmetric()
    }

    fn evaluate(&self, x: &Bound<'_, PyAny>) -> PyResult<String> {
        Ok(self.inner.evaluate(&rational(x)?).map_err(err)?.to_string())
    }

    fn __add__(&self, o: &Self) -> Self {
        PyPoly {
            inner: &self.inner + &o.inner,
        }
    }

    fn __sub__(&self, o: &Self) -> Self {
        PyPoly {
            inner: &self.inner - &o.inner,
        }
    }

    fn __mul__(&self, o: &Self) -> Self {
        PyPoly {
            inner: &self.inner * &o.inner,
        }
    }

    fn __eq__(&self, o: &Self) -> bool {
        self.inner == o.inner
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Poly({})", self.inner.to_text())
    }
}

/// Non-symmetric `P_m` by `method` in `triangular`, `rodrigues` or `series`.
#[pyfunction]
#[pyo3(signature = (t, m, method = "triangular"))]
fn nonsym(t: &PyParams, m: i64, method: &str) -> PyResult<PyPoly> {
    let inner = match method {
        "triangular" => Family::new(t.inner.clone()).nonsym(m),
        "rodrigues" => nonsym_rodrigues(&t.inner, m).map(|p| p.poly),
        "series" => nonsym_series(&t.inner, m).map(|p| p.poly),
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
    .map_err(err)?;
    Ok(PyPoly { inner })
}

#[pyfunction]
fn sym(t: &PyParams, m: i64) -> PyResult<PyPoly> {
    Ok(PyPoly {
        inner: Family::new(t.inner.clone()).sym(m).map_err(err)?,
    })
}

#[pyfunction]
fn antisym(t: &PyParams, m: i64) -> PyResult<PyPoly> {
    Ok(PyPoly {
        inner: Family::new(t.inner.clone()).antisym(m).map_err(err)?,
    })
}

/// Renormalized `E_m`, with value 1 at the base point.
#[pyfunction]
fn renorm(t: &PyParams, m: i64) -> PyResult<PyPoly> {
    Ok(PyPoly {
        inner: Family::new(t.inner.clone()).renorm(m).map_err(err)?,
    })
}

/// Applies a generator (`T0`, `T1v`, ...) or a named element (`Y`, `S1`, `Cplus`, ...).
#[pyfunction]
fn apply(op: &str, f: &PyPoly, t: &PyParams) -> PyResult<PyPoly> {
    let inner = match named_expr(op, &t.inner) {
        Ok(e) => e.apply(&f.inner, &t.inner),
        Err(_) => Token::parse(op).and_then(|k| k.apply(&f.inner, &t.inner)),
    }
    .map_err(err)?;
    Ok(PyPoly { inner })
}

/// `(1, 1)` by quadrature and in closed form, with their relative distance.
#[pyfunction]
#[pyo3(signature = (t, precision = 256))]
fn constant_term<'py>(
    py: Python<'py>,
    t: &PyParams,
    precision: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let s = QuadratureSettings::for_precision(precision);
    let closed =
        constant_term_closed(&t.inner.abcd().to_mp(precision), s.product_tol).map_err(err)?;
    let one = LaurentPoly::constant(Rational::from(1));
    let quad = Quadrature::for_params(&t.inner, FormKind::Round, s)
        .and_then(|q| q.pair_exact(&one, &one))
        .map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("closed", complex(py, &closed))?;
    out.set_item("quadrature", complex(py, &quad.value))?;
    out.set_item("rel_err", quad.value.rel_err(&closed))?;
    Ok(out)
}

/// Forward transform of `f`, as `{m: value}` over `|m| <= max_m`.
#[pyfunction]
#[pyo3(signature = (t, f, max_m = 6, precision = 256))]
fn forward<'py>(
    py: Python<'py>,
    t: &PyParams,
    f: &PyPoly,
    max_m: i64,
    precision: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let tr = Transform::new(&t.inner, QuadratureSettings::for_precision(precision)).map_err(err)?;
    let g = tr.forward(&f.inner.to_mp(precision), max_m).map_err(err)?;
    let out = PyDict::new(py);
    for (m, v) in &g.values {
        out.set_item(m, complex(py, v))?;
    }
    Ok(out)
}

/// Runs a verification suite and returns the JSON report as a dict.
#[pyfunction]
#[pyo3(signature = (suite = "all", t = None, max_degree = 6, backend = "exact", precision = 256))]
fn verify(
    py: Python<'_>,
    suite: &str,
    t: Option<&PyParams>,
    max_degree: i64,
    backend: &str,
    precision: u32,
) -> PyResult<Py<PyAny>> {
    let params = t
        .map(|t| t.inner.to_compact())
        .unwrap_or_else(|| ParameterSet::fixture().to_compact());
    let args = [
        "awdaha".to_string(),
        "--json".into(),
        "--params".into(),
        params,
        "--max-degree".into(),
        max_degree.to_string(),
        "--backend".into(),
        backend.into(),
        "--precision".into(),
        precision.to_string(),
        "verify".into(),
        "--suite".into(),
        suite.into(),
    ];
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let code = py.detach(|| awdaha::cli::run(args, &mut out, &mut errs));
    if code == 2 {
        return Err(PyValueError::new_err(
            String::from_utf8_lossy(&errs).trim().to_string(),
        ));
    }
    let v: Value =
        serde_json::from_slice(&out).map_err(|e| PyValueError::new_err(e.to_string()))?;
    to_py(py, &v)
}

#[pymodule]
fn pyawdaha(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyPoly>()?;
    m.add_function(wrap_pyfunction!(nonsym, m)?)?;
    m.add_function(wrap_pyfunction!(sym, m)?)?;
    m.add_function(wrap_pyfunction!(antisym, m)?)?;
    m.add_function(wrap_pyfunction!(renorm, m)?)?;
    m.add_function(wrap_pyfunction!(apply, m)?)?;
    m.add_function(wrap_pyfunction!(constant_term, m)?)?;
    m.add_function(wrap_pyfunction!(forward, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
