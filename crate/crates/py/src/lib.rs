//! Python bindings. Build with `--features extension-module` and import as
//! `lehmer`.

use num_bigint::{BigInt, BigUint};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyType};

use lehmer_core::bernoulli::{self, BernoulliCache, DEFAULT_CAP};
use lehmer_core::rational::ExactRational;
use lehmer_core::verifier::{self, Filter, ScanOptions};
use lehmer_core::{arith, fermat, sums, CongruenceReport, IdentityId, Params, Valuation};

create_exception!(lehmer, LehmerError, PyValueError);

fn err(e: impl std::fmt::Display) -> PyErr {
    LehmerError::new_err(e.to_string())
}

fn identity(code: &str, d: Option<u64>) -> PyResult<IdentityId> {
    IdentityId::from_code(code, d).map_err(err)
}

fn class_filter(class: Option<&str>) -> PyResult<Option<Filter>> {
    class
        .map(|s| verifier::parse_class(s).ok_or_else(|| err(format!("bad residue class '{s}'"))))
        .transpose()
}

fn fraction<'py>(py: Python<'py>, x: &ExactRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((x.numer().clone(), x.denom().clone()))
}

fn to_rational(x: &Bound<'_, PyAny>) -> PyResult<ExactRational> {
    let num: BigInt = x.getattr("numerator")?.extract()?;
    let den: BigInt = x.getattr("denominator")?.extract()?;
    if den == BigInt::from(0) {
        return Err(err("zero denominator"));
    }
    Ok(ExactRational::new(num, den))
}

/// One verification outcome.
#[pyclass(frozen, eq, skip_from_py_object, name = "Report", module = "lehmer")]
#[derive(Clone, PartialEq)]
struct PyReport(CongruenceReport);

#[pymethods]
impl PyReport {
    #[getter]
    fn identity(&self) -> &'static str {
        self.0.identity.code()
    }

    #[getter]
    fn params<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let dict = PyDict::new(py);
        let p = &self.0.params;
        if let Some(n) = p.n {
            dict.set_item("n", n)?;
        }
        if let Some(a) = p.a {
            dict.set_item("a", a)?;
        }
        if let Some(v) = p.p {
            dict.set_item("p", v)?;
        }
        if let Some(d) = p.d {
            dict.set_item("d", d)?;
        }
        if let Some(alpha) = p.alpha {
            dict.set_item("alpha", alpha)?;
        }
        Ok(dict)
    }

    #[getter]
    fn modulus(&self) -> BigUint {
        self.0.modulus.clone()
    }

    #[getter]
    fn lhs(&self) -> Option<BigUint> {
        self.0.lhs.as_ref().map(|r| r.rep().clone())
    }

    #[getter]
    fn rhs(&self) -> Option<BigUint> {
        self.0.rhs.as_ref().map(|r| r.rep().clone())
    }

    /// `None` for skipped reports.
    #[getter]
    fn holds(&self) -> Option<bool> {
        (!self.0.is_skipped()).then_some(self.0.holds)
    }

    /// p-adic valuation of the difference (`lemma1` reports only);
    /// `float("inf")` when the sides agree exactly.
    #[getter]
    fn valuation<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.0
            .padic
            .map(|v| match v.valuation {
                Valuation::Finite(k) => Ok(k.into_pyobject(py)?.into_any()),
                Valuation::Infinite => Ok(f64::INFINITY.into_pyobject(py)?.into_any()),
            })
            .transpose()
    }

    #[getter]
    fn required(&self) -> Option<u32> {
        self.0.padic.map(|v| v.required)
    }

    #[getter]
    fn skipped_reason(&self) -> Option<String> {
        self.0.skipped_reason.clone()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(err)
    }

    #[classmethod]
    fn from_json(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyReport).map_err(err)
    }

    fn __repr__(&self) -> String {
        let verdict = match (&self.0.skipped_reason, self.0.holds) {
            (Some(reason), _) => format!("skipped: {reason}"),
            (None, true) => "holds".into(),
            (None, false) => "fails".into(),
        };
        format!("<Report {} {} mod {}: {}>", self.0.identity, self.0.params, self.0.modulus, verdict)
    }
}

/// Checks one identity. Parameters the identity does not use are ignored;
/// a violated precondition gives a skipped report.
#[pyfunction]
#[pyo3(signature = (identity, n=None, *, a=None, p=None, d=None, alpha=None, exact_oracle=false, bernoulli_cap=DEFAULT_CAP))]
#[allow(clippy::too_many_arguments)]
fn verify(
    py: Python<'_>,
    identity: &str,
    n: Option<u64>,
    a: Option<i64>,
    p: Option<u64>,
    d: Option<u64>,
    alpha: Option<u32>,
    exact_oracle: bool,
    bernoulli_cap: usize,
) -> PyResult<PyReport> {
    let id = self::identity(identity, d)?;
    let params = Params { n, a, p, d, alpha };
    py.detach(|| {
        let cache = BernoulliCache::new(bernoulli_cap);
        verifier::verify_checked(id, &params, &cache, exact_oracle)
    })
    .map(PyReport)
    .map_err(err)
}

/// Checks `identity` for every accepted `n` in `start..=stop`.
#[pyfunction]
#[pyo3(signature = (identity, start, stop, *, a=None, p=None, d=None, alpha=None, residue_class=None, workers=1, exact_oracle=false, bernoulli_cap=DEFAULT_CAP))]
#[allow(clippy::too_many_arguments)]
fn scan(
    py: Python<'_>,
    identity: &str,
    start: u64,
    stop: u64,
    a: Option<i64>,
    p: Option<u64>,
    d: Option<u64>,
    alpha: Option<u32>,
    residue_class: Option<&str>,
    workers: usize,
    exact_oracle: bool,
    bernoulli_cap: usize,
) -> PyResult<Vec<PyReport>> {
    let id = self::identity(identity, d)?;
    let base = Params { n: None, a, p, d, alpha };
    let filter = class_filter(residue_class)?.unwrap_or_else(|| Filter::default_for(id, &base));
    let options = ScanOptions {
        workers: workers.max(1),
        exact_oracle,
    };
    let reports = py
        .detach(|| {
            let cache = BernoulliCache::new(bernoulli_cap);
            verifier::scan(id, start, stop, filter, &base, &cache, options)
        })
        .map_err(err)?;
    Ok(reports.into_iter().map(PyReport).collect())
}

/// Smallest `n <= bound` in the class where a composite-modulus congruence
/// fails. Raises `LehmerError` when there is none.
#[pyfunction]
#[pyo3(signature = (identity, residue_class=None, bound=1000))]
fn counterexample(py: Python<'_>, identity: &str, residue_class: Option<&str>, bound: u64) -> PyResult<PyReport> {
    let id = self::identity(identity, None)?;
    let class = class_filter(residue_class)?.unwrap_or(Filter::All);
    py.detach(|| verifier::counterexample_search(id, class, bound))
        .map(|c| PyReport(c.report))
        .map_err(err)
}

/// `B_m`, or `B_m(x)` when `x` is given, as a `Fraction`.
#[pyfunction]
#[pyo3(signature = (m, x=None, *, bernoulli_cap=DEFAULT_CAP))]
fn bernoulli_number<'py>(
    py: Python<'py>,
    m: usize,
    x: Option<&Bound<'py, PyAny>>,
    bernoulli_cap: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cache = BernoulliCache::new(bernoulli_cap);
    let value = match x {
        Some(x) => bernoulli::bernoulli_poly(m, &to_rational(x)?, &cache),
        None => bernoulli::bernoulli_number(m, &cache),
    }
    .map_err(err)?;
    fraction(py, &value)
}

/// `B_m(1/d)` for `d` in {3, 4, 6} and even `m`, as a `Fraction`.
#[pyfunction]
#[pyo3(signature = (d, m, *, bernoulli_cap=DEFAULT_CAP))]
fn special_value<'py>(py: Python<'py>, d: u64, m: usize, bernoulli_cap: usize) -> PyResult<Bound<'py, PyAny>> {
    let cache = BernoulliCache::new(bernoulli_cap);
    fraction(py, &bernoulli::special_value(d, m, &cache).map_err(err)?)
}

/// The exact Fermat quotient `(a^φ(n) - 1) / n`.
#[pyfunction]
fn fermat_quotient(n: u64, a: i64) -> PyResult<BigInt> {
    fermat::fermat_quotient(n, a).map(|q| q.value).map_err(err)
}

/// The residue mod `n²` of `sum 1/r, r <= (n-1)/2` (no `d`) or
/// `sum 1/(n - d r)` over `gcd(r, n) = 1`; with `p`, the localized sum mod
/// `p^{2α}`.
#[pyfunction]
#[pyo3(signature = (n, d=None, p=None))]
fn harmonic_sum(n: u64, d: Option<u64>, p: Option<u64>) -> PyResult<BigUint> {
    let r = match (d, p) {
        (None, None) => sums::half_harmonic(n),
        (Some(d), None) => sums::lehmer_sum(n, d),
        (Some(d), Some(p)) => sums::lemma2_sum(n, p, d),
        (None, Some(_)) => return Err(err("a localized sum needs d")),
    };
    r.map(|r| r.rep().clone()).map_err(err)
}

/// The Fermat-quotient side of the composite congruence for `d`, mod `n²`.
#[pyfunction]
fn theorem_rhs(n: u64, d: u64) -> PyResult<BigUint> {
    sums::theorem_rhs(n, d).map(|r| r.rep().clone()).map_err(err)
}

/// Prime factorization as `[(p, e), ...]`.
#[pyfunction]
fn factorize(n: u64) -> PyResult<Vec<(BigUint, u32)>> {
    arith::factorize_u64(n)
        .map(|f| f.factors().to_vec())
        .map_err(err)
}

/// The identity codes accepted by `verify` and `scan`.
#[pyfunction]
fn identities() -> Vec<&'static str> {
    let mut codes: Vec<&str> = IdentityId::ALL.iter().map(|id| id.code()).collect();
    codes.dedup();
    codes
}

/// Verification of Lehmer-type harmonic congruences modulo n².
#[pymodule]
fn lehmer(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("LehmerError", m.py().get_type::<LehmerError>())?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(bernoulli_number, m)?)?;
    m.add_function(wrap_pyfunction!(special_value, m)?)?;
    m.add_function(wrap_pyfunction!(fermat_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(harmonic_sum, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    Ok(())
}
