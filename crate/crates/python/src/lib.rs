//! Python bindings for `nctheta-core`.
//!
//! Labels are integers (one-dimensional) or nested lists of integers, points
//! are sequences of Python complex numbers, and `theta` is either a float
//! (the `(1,2)` entry of a 2x2 skew matrix) or a nested list of floats.

use std::collections::BTreeMap;

use nctheta_core::error::Error;
use nctheta_core::io;
use nctheta_core::lattice::DEFAULT_TOL;
use nctheta_core::linalg::{
    coset_representatives as core_cosets, difference, reduce_mod, CosetIndex, IntSymMatrix, SkewMatrix, C64,
};
use nctheta_core::{mirror, presets, quiver, star, structure, theta as theta_mod};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};
use serde_json::{json, Value};

create_exception!(nctheta, NcThetaError, PyValueError, "Raised for every error reported by the core library.");

type Reps = Vec<Vec<i64>>;

fn raise(err: Error) -> PyErr {
    NcThetaError::new_err((err.code(), err.to_string()))
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for nctheta_core::error::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(raise)
    }
}

fn to_py(py: Python<'_>, value: &Value) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (value.to_string(),))?.unbind())
}

fn label(obj: &Bound<'_, PyAny>) -> PyResult<IntSymMatrix> {
    if let Ok(v) = obj.extract::<i64>() {
        return Ok(IntSymMatrix::diag(&[v]));
    }
    let rows: Vec<Vec<i64>> = obj.extract()?;
    IntSymMatrix::from_rows(&rows).or_raise()
}

fn label_list(obj: &Bound<'_, PyAny>) -> PyResult<Vec<IntSymMatrix>> {
    obj.try_iter()?.map(|item| label(&item?)).collect()
}

fn skew(n: usize, obj: Option<&Bound<'_, PyAny>>) -> PyResult<SkewMatrix> {
    let Some(obj) = obj else { return Ok(SkewMatrix::zero(n)) };
    if let Ok(t) = obj.extract::<f64>() {
        return match n {
            2 => Ok(SkewMatrix::from_theta12(t)),
            _ if t == 0.0 => Ok(SkewMatrix::zero(n)),
            _ => Err(raise(Error::InvalidInput(format!("a scalar theta needs n = 2, found n = {n}")))),
        };
    }
    let rows: Vec<Vec<f64>> = obj.extract()?;
    let s = io::parse_skew(&json!(rows)).or_raise()?;
    if s.dim() != n {
        return Err(raise(Error::DimensionMismatch { expected: n, found: s.dim() }));
    }
    Ok(s)
}

fn coset(modulus: &IntSymMatrix, rep: Vec<i64>) -> PyResult<CosetIndex> {
    reduce_mod(modulus, &rep).or_raise()
}

/// Jacobi theta function with characteristics `c1`, `c2` at the period matrix `omega`.
#[pyfunction]
#[pyo3(signature = (omega, z, c1=None, c2=None, tol=DEFAULT_TOL))]
fn theta(omega: Vec<Vec<C64>>, z: Vec<C64>, c1: Option<Vec<f64>>, c2: Option<Vec<f64>>, tol: f64) -> PyResult<C64> {
    let rows: Vec<Value> = omega.iter().map(|r| io::complex_vector_json(r)).collect();
    let omega = io::parse_complex_sym(&Value::Array(rows)).or_raise()?;
    let point = theta_mod::SiegelPoint::new(omega).or_raise()?;
    let n = point.dim();
    let ch = theta_mod::ThetaCharacteristics::new(&c1.unwrap_or(vec![0.0; n]), &c2.unwrap_or(vec![0.0; n])).or_raise()?;
    Ok(theta_mod::theta_with_char(&ch, &point, &z, tol).or_raise()?.value)
}

/// Commutative basis function of the label pair `(a, b)` at coset `mu`.
#[pyfunction]
#[pyo3(signature = (a, b, mu, z, tol=DEFAULT_TOL))]
fn e_comm(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>, mu: Vec<i64>, z: Vec<C64>, tol: f64) -> PyResult<C64> {
    let (a, b) = (label(a)?, label(b)?);
    let mu = coset(&difference(&a, &b).or_raise()?, mu)?;
    Ok(theta_mod::e_comm(&a, &b, &mu, &z, tol).or_raise()?.value)
}

/// Deformed basis function of the label pair `(a, b)` at coset `mu`.
#[pyfunction]
#[pyo3(signature = (a, b, mu, z, theta=None, tol=DEFAULT_TOL))]
fn e_nc(
    a: &Bound<'_, PyAny>,
    b: &Bound<'_, PyAny>,
    mu: Vec<i64>,
    z: Vec<C64>,
    theta: Option<&Bound<'_, PyAny>>,
    tol: f64,
) -> PyResult<C64> {
    let (a, b) = (label(a)?, label(b)?);
    let theta = skew(a.dim(), theta)?;
    let mu = coset(&difference(&a, &b).or_raise()?, mu)?;
    Ok(theta_mod::e_nc(&a, &b, &mu, &z, &theta, tol).or_raise()?.value)
}

/// Canonical representatives of `Z^n / A Z^n`.
#[pyfunction]
fn coset_representatives(a: &Bound<'_, PyAny>) -> PyResult<Vec<Vec<i64>>> {
    Ok(core_cosets(&label(a)?).or_raise()?.iter().map(|c| c.rep().to_vec()).collect())
}

#[pyfunction]
fn hom_dim(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<usize> {
    quiver::hom_dim(&label(a)?, &label(b)?).or_raise()
}

#[pyfunction]
fn intersection_count(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<usize> {
    mirror::intersection_count(&label(a)?, &label(b)?).or_raise()
}

/// Diagonal 2x2 labels with entries in `[-bound, bound]` and the given determinant.
#[pyfunction]
fn enumerate_diag_symmetric(det: i64, bound: i64) -> Vec<Vec<Vec<i64>>> {
    quiver::enumerate_diag_symmetric(det, bound).iter().map(IntSymMatrix::rows).collect()
}

/// `g^T A g` for unimodular `g`.
#[pyfunction]
fn conjugate(a: &Bound<'_, PyAny>, g: Vec<Vec<i64>>) -> PyResult<Vec<Vec<i64>>> {
    Ok(quiver::conjugate(&label(a)?, &g).or_raise()?.rows())
}

/// Labels of a named preset: `sec5`, `line`, `line4`, `plane4`.
#[pyfunction]
fn preset(name: &str) -> PyResult<Vec<Vec<Vec<i64>>>> {
    presets::labels(name)
        .map(|ls| ls.iter().map(IntSymMatrix::rows).collect())
        .ok_or_else(|| raise(Error::InvalidInput(format!("unknown preset '{name}'"))))
}

/// Associativity of composition over every ordered quadruple of `labels`.
#[pyfunction]
#[pyo3(signature = (labels, theta=None, tol=1e-8))]
fn check_associativity(
    py: Python<'_>,
    labels: &Bound<'_, PyAny>,
    theta: Option<&Bound<'_, PyAny>>,
    tol: f64,
) -> PyResult<Py<PyAny>> {
    let labels = label_list(labels)?;
    let theta = skew(labels.first().map(IntSymMatrix::dim).unwrap_or(0), theta)?;
    let report = py.detach(|| structure::check_associativity_chain(&labels, &theta, tol)).or_raise()?;
    to_py(py, &report.to_json())
}

/// Star products of random Fourier series against the truncated bidifferential series.
#[pyfunction]
#[pyo3(signature = (theta, cases=10, seed=7, tol=1e-9, phase_tol=1e-12))]
fn star_engine_check(
    py: Python<'_>,
    theta: &Bound<'_, PyAny>,
    cases: usize,
    seed: u64,
    tol: f64,
    phase_tol: f64,
) -> PyResult<Py<PyAny>> {
    let dim = theta.extract::<Vec<Vec<f64>>>().map(|rows| rows.len()).unwrap_or(2);
    let theta = skew(dim, Some(theta))?;
    let report = py.detach(|| star::star_engine_check(&theta, cases, 25, 80, seed, tol, phase_tol)).or_raise()?;
    to_py(py, &report.to_json())
}

/// Three labels with a noncommutativity parameter.
#[pyclass(module = "nctheta", frozen)]
struct LabelTriple {
    inner: structure::LabelTriple,
}

#[pymethods]
impl LabelTriple {
    #[new]
    #[pyo3(signature = (a, b, c, theta=None))]
    fn new(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>, c: &Bound<'_, PyAny>, theta: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let a = label(a)?;
        let theta = skew(a.dim(), theta)?;
        let inner = structure::LabelTriple::new(a, label(b)?, label(c)?, theta).or_raise()?;
        Ok(Self { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn labels(&self) -> Vec<Vec<Vec<i64>>> {
        let (a, b, c) = self.inner.labels();
        vec![a.rows(), b.rows(), c.rows()]
    }

    /// Coset representatives indexing `mu`, `nu` and `rho`.
    fn cosets(&self) -> (Reps, Reps, Reps) {
        let reps = |q: &nctheta_core::linalg::Quotient| q.representatives().iter().map(|c| c.rep().to_vec()).collect();
        let (ab, bc, ac) = self.inner.quotients();
        (reps(ab), reps(bc), reps(ac))
    }

    #[pyo3(signature = (mu, nu, rho, tol=DEFAULT_TOL))]
    fn c_comm(&self, mu: Vec<i64>, nu: Vec<i64>, rho: Vec<i64>, tol: f64) -> PyResult<C64> {
        let (mu, nu, rho) = self.indices(mu, nu, rho)?;
        structure::c_comm(&self.inner, &mu, &nu, &rho, tol).or_raise()
    }

    #[pyo3(signature = (mu, nu, rho, tol=DEFAULT_TOL))]
    fn c_nc(&self, mu: Vec<i64>, nu: Vec<i64>, rho: Vec<i64>, tol: f64) -> PyResult<C64> {
        let (mu, nu, rho) = self.indices(mu, nu, rho)?;
        structure::c_nc(&self.inner, &mu, &nu, &rho, tol).or_raise()
    }

    /// Area-weighted count of triangles between the mirror Lagrangians.
    #[pyo3(signature = (mu, nu, rho, tol=DEFAULT_TOL))]
    fn c_mirror(&self, mu: Vec<i64>, nu: Vec<i64>, rho: Vec<i64>, tol: f64) -> PyResult<f64> {
        let (mu, nu, rho) = self.indices(mu, nu, rho)?;
        let (a, b, c) = self.inner.labels();
        Ok(mirror::c_mirror(a, b, c, &mu, &nu, &rho, tol).or_raise()?.value)
    }

    #[pyo3(signature = (commutative=false, tol=DEFAULT_TOL))]
    fn structure_tensor(&self, py: Python<'_>, commutative: bool, tol: f64) -> PyResult<StructureTensor> {
        let triple = if commutative { self.commutative()? } else { self.inner.clone() };
        let inner = py.detach(|| structure::structure_tensor(&triple, tol)).or_raise()?;
        Ok(StructureTensor { inner })
    }

    #[pyo3(signature = (tol=DEFAULT_TOL))]
    fn mirror_tensor(&self, py: Python<'_>, tol: f64) -> PyResult<StructureTensor> {
        let inner = py.detach(|| mirror::mirror_tensor(&self.inner, tol)).or_raise()?;
        Ok(StructureTensor { inner })
    }

    /// Product formula `e_ab * e_bc = sum_rho C e_ac` at random polydisc points.
    #[pyo3(signature = (samples=20, seed=7, tol=1e-8))]
    fn verify_addition(&self, py: Python<'_>, samples: usize, seed: u64, tol: f64) -> PyResult<Py<PyAny>> {
        let report = py.detach(|| structure::verify_addition(&self.inner, samples, seed, tol)).or_raise()?;
        to_py(py, &report.to_json())
    }

    fn __repr__(&self) -> String {
        format!("LabelTriple(labels={:?})", self.labels())
    }
}

impl LabelTriple {
    fn indices(&self, mu: Vec<i64>, nu: Vec<i64>, rho: Vec<i64>) -> PyResult<(CosetIndex, CosetIndex, CosetIndex)> {
        let (ab, bc, ac) = self.inner.quotients();
        let reduce = |q: &nctheta_core::linalg::Quotient, v: Vec<i64>| {
            if v.len() != q.modulus().dim() {
                return Err(raise(Error::DimensionMismatch { expected: q.modulus().dim(), found: v.len() }));
            }
            Ok(q.reduce(&v))
        };
        Ok((reduce(ab, mu)?, reduce(bc, nu)?, reduce(ac, rho)?))
    }

    fn commutative(&self) -> PyResult<structure::LabelTriple> {
        let (a, b, c) = self.inner.labels();
        structure::LabelTriple::new(a.clone(), b.clone(), c.clone(), SkewMatrix::zero(a.dim())).or_raise()
    }
}

/// Structure constants indexed by `(mu, nu, rho)`.
#[pyclass(module = "nctheta", frozen)]
struct StructureTensor {
    inner: structure::StructureTensor,
}

#[pymethods]
impl StructureTensor {
    #[getter]
    fn shape(&self) -> (usize, usize, usize) {
        self.inner.shape()
    }

    /// Entry by position: `tensor[i, j, k]`.
    fn __getitem__(&self, index: (usize, usize, usize)) -> PyResult<C64> {
        let (i, j, k) = index;
        let (p, q, r) = self.inner.shape();
        if i >= p || j >= q || k >= r {
            return Err(pyo3::exceptions::PyIndexError::new_err(format!("index {index:?} outside shape {:?}", (p, q, r))));
        }
        Ok(self.inner.entry(i, j, k))
    }

    /// Entry by coset representatives; any lift of the cosets is accepted.
    fn get(&self, mu: Vec<i64>, nu: Vec<i64>, rho: Vec<i64>) -> PyResult<C64> {
        let triple = self.inner.triple();
        let mu = coset(triple.a_ab(), mu)?;
        let nu = coset(triple.a_bc(), nu)?;
        let rho = coset(triple.a_ac(), rho)?;
        self.inner.get(&mu, &nu, &rho).or_raise()
    }

    /// All entries keyed by `(mu, nu, rho)` representative tuples.
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let out = PyDict::new(py);
        let (p, q, r) = self.inner.shape();
        for i in 0..p {
            for j in 0..q {
                for k in 0..r {
                    let key = (
                        PyTuple::new(py, self.inner.mu_indices()[i].rep())?,
                        PyTuple::new(py, self.inner.nu_indices()[j].rep())?,
                        PyTuple::new(py, self.inner.rho_indices()[k].rep())?,
                    );
                    out.set_item(key, self.inner.entry(i, j, k))?;
                }
            }
        }
        Ok(out)
    }

    /// JSON object with `shape` and `entries` keyed `"mu|nu|rho"`.
    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.values().len()
    }

    fn __repr__(&self) -> String {
        format!("StructureTensor(shape={:?})", self.inner.shape())
    }
}

/// Finite Fourier series `sum_m c_m exp(2 pi i m.z)`.
#[pyclass(module = "nctheta", frozen)]
struct FourierPolynomial {
    inner: star::FourierPolynomial,
}

#[pymethods]
impl FourierPolynomial {
    #[new]
    fn new(terms: BTreeMap<Vec<i64>, C64>) -> PyResult<Self> {
        let n = terms.keys().next().map(Vec::len).ok_or_else(|| raise(Error::InvalidInput("no terms".into())))?;
        Ok(Self { inner: star::FourierPolynomial::from_terms(n, terms).or_raise()? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Coefficients keyed by frequency tuples.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let out = PyDict::new(py);
        for (m, c) in self.inner.terms() {
            out.set_item(PyTuple::new(py, m)?, *c)?;
        }
        Ok(out)
    }

    fn __call__(&self, z: Vec<C64>) -> PyResult<C64> {
        self.inner.eval(&z).or_raise()
    }

    /// Moyal product `self * other` for the given `theta`.
    #[pyo3(signature = (other, theta=None))]
    fn star(&self, other: &FourierPolynomial, theta: Option<&Bound<'_, PyAny>>) -> PyResult<FourierPolynomial> {
        let theta = skew(self.inner.dim(), theta)?;
        Ok(Self { inner: star::star_fourier(&self.inner, &other.inner, &theta).or_raise()? })
    }

    /// Truncated bidifferential series for `(self * other)(z)`.
    #[pyo3(signature = (other, z, theta=None, order=80, tol=1e-13))]
    fn moyal_oracle(
        &self,
        other: &FourierPolynomial,
        z: Vec<C64>,
        theta: Option<&Bound<'_, PyAny>>,
        order: usize,
        tol: f64,
    ) -> PyResult<C64> {
        let cfg = star::StarConfig { theta: skew(self.inner.dim(), theta)?, oracle_order: order, tol };
        star::moyal_oracle(&self.inner, &other.inner, &z, &cfg).or_raise()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("FourierPolynomial(dim={}, terms={})", self.inner.dim(), self.inner.len())
    }
}

/// Labels as nodes, with an arrow of weight `hom_dim(a, b)` whenever it is positive.
#[pyclass(module = "nctheta", frozen)]
struct Quiver {
    inner: quiver::Quiver,
}

#[pymethods]
impl Quiver {
    #[new]
    fn new(labels: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Self { inner: quiver::build_quiver(&label_list(labels)?).or_raise()? })
    }

    /// Quiver of the diagonal labels with entries in `[-bound, bound]` and determinant `det`.
    #[staticmethod]
    fn enumerate(det: i64, bound: i64) -> PyResult<Self> {
        Ok(Self { inner: quiver::build_quiver(&quiver::enumerate_diag_symmetric(det, bound)).or_raise()? })
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names.clone()
    }

    #[getter]
    fn labels(&self) -> Vec<Vec<Vec<i64>>> {
        self.inner.labels.iter().map(IntSymMatrix::rows).collect()
    }

    /// `(source, target, weight)` with zero-based node positions.
    #[getter]
    fn arrows(&self) -> Vec<(usize, usize, usize)> {
        self.inner.arrows.iter().map(|a| (a.source, a.target, a.weight)).collect()
    }

    fn weight(&self, source: usize, target: usize) -> usize {
        self.inner.weight(source, target)
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Quiver(nodes={}, arrows={})", self.inner.names.len(), self.inner.arrows.len())
    }
}

#[pymodule]
fn nctheta(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NcThetaError", m.py().get_type::<NcThetaError>())?;
    m.add_class::<LabelTriple>()?;
    m.add_class::<StructureTensor>()?;
    m.add_class::<FourierPolynomial>()?;
    m.add_class::<Quiver>()?;
    m.add_function(wrap_pyfunction!(theta, m)?)?;
    m.add_function(wrap_pyfunction!(e_comm, m)?)?;
    m.add_function(wrap_pyfunction!(e_nc, m)?)?;
    m.add_function(wrap_pyfunction!(coset_representatives, m)?)?;
    m.add_function(wrap_pyfunction!(hom_dim, m)?)?;
    m.add_function(wrap_pyfunction!(intersection_count, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_diag_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(conjugate, m)?)?;
    m.add_function(wrap_pyfunction!(preset, m)?)?;
    m.add_function(wrap_pyfunction!(check_associativity, m)?)?;
    m.add_function(wrap_pyfunction!(star_engine_check, m)?)?;
    Ok(())
}
