//! Python module `affchar`.

use std::collections::BTreeMap;

use affchar::identities::{self, IdentityReport};
use affchar::{CharacterTable, LieType, ProductSpec, QSeries, RootSystemData};
use num_bigint::BigInt;
use num_rational::Rational64;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: affchar::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn lie_type(s: &str) -> PyResult<LieType> {
    s.parse().map_err(err)
}

fn product(triples: Vec<(i64, i64, i64)>) -> PyResult<ProductSpec> {
    ProductSpec::from_triples(&triples).map_err(err)
}

/// Truncated Laurent series in q with integer coefficients.
#[pyclass(name = "QSeries", module = "affchar", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyQSeries {
    inner: QSeries,
}

impl From<QSeries> for PyQSeries {
    fn from(inner: QSeries) -> Self {
        PyQSeries { inner }
    }
}

#[pymethods]
impl PyQSeries {
    /// `coeffs[i]` is the coefficient of `q^(low + i)`; terms above `order` are dropped.
    #[new]
    #[pyo3(signature = (coeffs, order, low = 0))]
    fn new(coeffs: Vec<BigInt>, order: i64, low: i64) -> Self {
        QSeries::new(low, coeffs, order).into()
    }

    #[staticmethod]
    fn monomial(c: BigInt, e: i64, order: i64) -> Self {
        QSeries::monomial(c, e, order).into()
    }

    #[getter]
    fn order(&self) -> i64 {
        self.inner.order()
    }

    #[getter]
    fn low(&self) -> i64 {
        self.inner.low()
    }

    fn coeff(&self, e: i64) -> PyResult<BigInt> {
        self.inner
            .coeff(e)
            .cloned()
            .ok_or_else(|| PyIndexError::new_err(format!("q^{e} is beyond order {}", self.inner.order())))
    }

    /// Coefficients of `q^start .. q^order`.
    #[pyo3(signature = (start = 0))]
    fn coefficients(&self, start: i64) -> Vec<BigInt> {
        (start..=self.inner.order()).map(|e| self.inner.coeff(e).cloned().unwrap_or_default()).collect()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn truncate(&self, order: i64) -> Self {
        self.inner.truncate(order).into()
    }

    fn shift(&self, d: i64) -> Self {
        self.inner.shift(d).into()
    }

    fn scale_exponents(&self, h: i64) -> PyResult<Self> {
        if h < 1 {
            return Err(PyValueError::new_err("scale must be positive"));
        }
        Ok(self.inner.scale_exponents(h).into())
    }

    fn invert(&self) -> PyResult<Self> {
        self.inner.invert().map(Into::into).map_err(err)
    }

    /// Equality of coefficients through the lower of the two orders.
    fn agrees_with(&self, other: PyRef<'_, Self>) -> bool {
        self.inner.agrees_with(&other.inner)
    }

    fn __add__(&self, other: PyRef<'_, Self>) -> Self {
        (&self.inner + &other.inner).into()
    }

    fn __sub__(&self, other: PyRef<'_, Self>) -> Self {
        (&self.inner - &other.inner).into()
    }

    fn __mul__(&self, other: PyRef<'_, Self>) -> Self {
        (&self.inner * &other.inner).into()
    }

    fn __neg__(&self) -> Self {
        (-&self.inner).into()
    }

    fn __eq__(&self, other: PyRef<'_, Self>) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("QSeries({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("series serializes")
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        serde_json::from_str::<QSeries>(s).map(Into::into).map_err(|e| PyValueError::new_err(e.to_string()))
    }
}

/// Coefficient table `n -> A(n; q)` of a multi-parameter character.
#[pyclass(name = "CharacterTable", module = "affchar")]
struct PyCharacterTable {
    inner: CharacterTable,
}

#[pymethods]
impl PyCharacterTable {
    #[getter]
    fn lie_type(&self) -> String {
        self.inner.lie_type().to_string()
    }

    #[getter]
    fn level(&self) -> i64 {
        self.inner.level()
    }

    #[getter]
    fn order(&self) -> i64 {
        self.inner.order()
    }

    #[getter]
    fn mu(&self) -> String {
        self.inner.mu().to_string()
    }

    #[setter]
    fn set_mu(&mut self, mu: (i64, i64)) -> PyResult<()> {
        if mu.1 == 0 {
            return Err(PyValueError::new_err("zero denominator"));
        }
        self.inner.set_mu(Rational64::new(mu.0, mu.1));
        Ok(())
    }

    fn entry(&self, n: Vec<i64>) -> PyResult<PyQSeries> {
        self.inner.entry(&n).map(Into::into).map_err(err)
    }

    fn set_entry(&mut self, n: Vec<i64>, series: PyRef<'_, PyQSeries>) -> PyResult<()> {
        self.inner.set_entry(&n, series.inner.clone()).map_err(err)
    }

    fn is_stored(&self, n: Vec<i64>) -> bool {
        self.inner.is_stored(&n)
    }

    fn stored_points(&self) -> Vec<Vec<i64>> {
        self.inner.stored_points()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn support_policy(&self) -> String {
        self.inner.support_policy()
    }

    fn homogeneous_character(&self) -> PyResult<PyQSeries> {
        self.inner.homogeneous_character().map(Into::into).map_err(err)
    }

    fn principal_character(&self) -> PyResult<PyQSeries> {
        self.inner.principal_character().map(Into::into).map_err(err)
    }

    /// Returns a report dict; `failure` holds the point, 1-based direction and source.
    #[pyo3(signature = (order = None))]
    fn verify_recurrence<'py>(&self, py: Python<'py>, order: Option<i64>) -> PyResult<Bound<'py, PyDict>> {
        let rep = self.inner.verify_recurrence(order.unwrap_or(self.inner.order())).map_err(err)?;
        let d = report_dict(py, &rep.report)?;
        d.set_item("pairs_checked", rep.pairs_checked)?;
        match &rep.failure {
            Some(f) => {
                let fd = PyDict::new(py);
                fd.set_item("point", f.point.clone())?;
                fd.set_item("direction", f.direction + 1)?;
                fd.set_item("source", f.source.clone())?;
                fd.set_item("exponent_shift", f.exponent_shift)?;
                d.set_item("failure", fd)?;
            }
            None => d.set_item("failure", py.None())?,
        }
        Ok(d)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        CharacterTable::from_json(s).map(|inner| PyCharacterTable { inner }).map_err(err)
    }
}

fn report_dict<'py>(py: Python<'py>, r: &IdentityReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("order_checked", r.order_checked)?;
    d.set_item("equal", r.equal)?;
    d.set_item("first_mismatch_exponent", r.first_mismatch_exponent)?;
    d.set_item("lhs_coefficient", r.lhs_coefficient.clone())?;
    d.set_item("rhs_coefficient", r.rhs_coefficient.clone())?;
    d.set_item("timing_note", &r.timing_note)?;
    d.set_item("description", &r.description)?;
    Ok(d)
}

#[pyfunction]
fn cartan_matrix(lie_type_name: &str) -> PyResult<Vec<Vec<i64>>> {
    Ok(RootSystemData::new(lie_type(lie_type_name)?).cartan().to_vec())
}

#[pyfunction]
fn coxeter_h(lie_type_name: &str) -> PyResult<i64> {
    Ok(RootSystemData::new(lie_type(lie_type_name)?).coxeter_h())
}

#[pyfunction]
fn closed_form_level1(lie_type_name: &str, order: i64) -> PyResult<PyCharacterTable> {
    affchar::closed_form_level1(lie_type(lie_type_name)?, order).map(|inner| PyCharacterTable { inner }).map_err(err)
}

/// `seeds` maps each point of `{0..level-1}^rank` (a tuple) to its series.
#[pyfunction]
fn propagate(
    lie_type_name: &str,
    level: i64,
    seeds: BTreeMap<Vec<i64>, PyRef<'_, PyQSeries>>,
    order: i64,
) -> PyResult<PyCharacterTable> {
    let seeds = seeds.into_iter().map(|(n, s)| (n, s.inner.clone())).collect();
    affchar::propagate_from_initial(lie_type(lie_type_name)?, level, &seeds, order)
        .map(|inner| PyCharacterTable { inner })
        .map_err(err)
}

/// Expands `prod_j (1 - q^(a j + b))^e` over the `(a, b, e)` triples.
#[pyfunction]
fn expand_product(triples: Vec<(i64, i64, i64)>, order: i64) -> PyResult<PyQSeries> {
    product(triples)?.expand(order).map(Into::into).map_err(err)
}

#[pyfunction]
fn multisum_side(lie_type_name: &str, order: i64) -> PyResult<PyQSeries> {
    identities::multisum_side(lie_type(lie_type_name)?, order).map(Into::into).map_err(err)
}

#[pyfunction]
fn bare_theta_sum(lie_type_name: &str, order: i64) -> PyResult<PyQSeries> {
    identities::bare_theta_sum(lie_type(lie_type_name)?, order).map(Into::into).map_err(err)
}

#[pyfunction]
fn theta_sum(matrix: Vec<Vec<i64>>, scale: i64, shift: Vec<i64>, order: i64) -> PyResult<PyQSeries> {
    identities::theta_sum(&matrix, scale, &shift, order).map(Into::into).map_err(err)
}

#[pyfunction]
fn macdonald_product_a(rank: usize) -> PyResult<Vec<(i64, i64, i64)>> {
    identities::macdonald_product_a(rank).map(|p| p.triples()).map_err(err)
}

#[pyfunction]
fn macdonald_product_d(rank: usize) -> PyResult<Vec<(i64, i64, i64)>> {
    identities::macdonald_product_d(rank).map(|p| p.triples()).map_err(err)
}

#[pyfunction]
fn verify_identity<'py>(
    py: Python<'py>,
    triples: Vec<(i64, i64, i64)>,
    lie_type_name: &str,
    order: i64,
) -> PyResult<Bound<'py, PyDict>> {
    let rep = identities::verify_identity(&product(triples)?, lie_type(lie_type_name)?, order).map_err(err)?;
    report_dict(py, &rep)
}

#[pyfunction]
fn verify_user_identity<'py>(
    py: Python<'py>,
    triples: Vec<(i64, i64, i64)>,
    matrix: Vec<Vec<i64>>,
    scale: i64,
    shift: Vec<i64>,
    order: i64,
) -> PyResult<Bound<'py, PyDict>> {
    let rep = identities::verify_user_identity(&product(triples)?, &matrix, scale, &shift, order).map_err(err)?;
    report_dict(py, &rep)
}

#[pymodule]
#[pyo3(name = "affchar")]
fn affchar_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQSeries>()?;
    m.add_class::<PyCharacterTable>()?;
    m.add_function(wrap_pyfunction!(cartan_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(coxeter_h, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_level1, m)?)?;
    m.add_function(wrap_pyfunction!(propagate, m)?)?;
    m.add_function(wrap_pyfunction!(expand_product, m)?)?;
    m.add_function(wrap_pyfunction!(multisum_side, m)?)?;
    m.add_function(wrap_pyfunction!(bare_theta_sum, m)?)?;
    m.add_function(wrap_pyfunction!(theta_sum, m)?)?;
    m.add_function(wrap_pyfunction!(macdonald_product_a, m)?)?;
    m.add_function(wrap_pyfunction!(macdonald_product_d, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_user_identity, m)?)?;
    Ok(())
}
