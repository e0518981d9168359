//! Structure constants of the product of theta basis functions and the
//! end-to-end checks of the addition formulas.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{bilinear, certified_sum, TailBound, DEFAULT_RADIUS_CAP};
use crate::linalg::{
    column_hermite, complex_inverse, difference, identity_c, is_positive_definite, ComplexSymMatrix, CosetIndex,
    IntSymMatrix, Quotient, SkewMatrix, C64,
};
use crate::star::{star_fourier, theta_series_of_pair, FourierPolynomial};
use crate::theta::{compute_m, e_comm, NcDeformation};

/// Absolute tolerance used for the lattice sums inside verifications.
const INNER_TOL: f64 = 1e-15;

/// Three labels `a, b, c` with positive-definite consecutive differences.
#[derive(Clone, Debug)]
pub struct LabelTriple {
    a: IntSymMatrix,
    b: IntSymMatrix,
    c: IntSymMatrix,
    theta: SkewMatrix,
    q_ab: Quotient,
    q_bc: Quotient,
    q_ac: Quotient,
    solver: CongruenceSolver,
}

fn positive_difference(x: &IntSymMatrix, y: &IntSymMatrix) -> Result<IntSymMatrix> {
    let d = difference(x, y)?;
    if d.det() == 0 {
        return Err(Error::IndexModulusMismatch);
    }
    if !is_positive_definite(&d) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(d)
}

impl LabelTriple {
    pub fn new(a: IntSymMatrix, b: IntSymMatrix, c: IntSymMatrix, theta: SkewMatrix) -> Result<Self> {
        let n = a.dim();
        for d in [b.dim(), c.dim(), theta.dim()] {
            if d != n {
                return Err(Error::DimensionMismatch { expected: n, found: d });
            }
        }
        let a_ab = positive_difference(&a, &b)?;
        let a_bc = positive_difference(&b, &c)?;
        let a_ac = difference(&a, &c)?;
        if !theta.is_zero() {
            compute_m(&a, &b, &theta)?;
            compute_m(&b, &c, &theta)?;
        }
        let solver = CongruenceSolver::new(&a_ab, &a_bc)?;
        Ok(Self {
            q_ab: Quotient::new(&a_ab)?,
            q_bc: Quotient::new(&a_bc)?,
            q_ac: Quotient::new(&a_ac)?,
            a,
            b,
            c,
            theta,
            solver,
        })
    }

    pub fn labels(&self) -> (&IntSymMatrix, &IntSymMatrix, &IntSymMatrix) {
        (&self.a, &self.b, &self.c)
    }

    pub fn theta(&self) -> &SkewMatrix {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn a_ab(&self) -> &IntSymMatrix {
        self.q_ab.modulus()
    }

    pub fn a_bc(&self) -> &IntSymMatrix {
        self.q_bc.modulus()
    }

    pub fn a_ac(&self) -> &IntSymMatrix {
        self.q_ac.modulus()
    }

    /// Quotients by `A_ab`, `A_bc`, `A_ac`.
    pub fn quotients(&self) -> (&Quotient, &Quotient, &Quotient) {
        (&self.q_ab, &self.q_bc, &self.q_ac)
    }

    fn check_indices(&self, mu: &CosetIndex, nu: &CosetIndex, rho: &CosetIndex) -> Result<()> {
        self.q_ab.check(mu)?;
        self.q_bc.check(nu)?;
        self.q_ac.check(rho)
    }

    fn gaussian_center(&self, rho: &CosetIndex) -> Result<Vec<f64>> {
        center_shift(self.a_bc(), self.a_ac(), rho.rep())
    }
}

/// `A_bc A_ac^{-1} rho`.
pub(crate) fn center_shift(a_bc: &IntSymMatrix, a_ac: &IntSymMatrix, rho: &[i64]) -> Result<Vec<f64>> {
    let inner = a_ac.inverse()?;
    let d = inner.denom() as f64;
    let t = inner.apply_numer(rho);
    let n = a_bc.dim();
    Ok((0..n).map(|i| (0..n).map(|j| a_bc.get(i, j) as f64 * t[j] as f64).sum::<f64>() / d).collect())
}

/// Admissible set `{u : u = nu mod A_bc, rho - mu - u in A_ab Z^n}` as `u0 + B Z^n`.
#[derive(Clone, Debug)]
pub(crate) struct CongruenceSolver {
    n: usize,
    a_bc: IntSymMatrix,
    hermite: Vec<i128>,
    unimodular: Vec<i128>,
    lattice: Vec<i64>,
}

impl CongruenceSolver {
    pub(crate) fn new(a_ab: &IntSymMatrix, a_bc: &IntSymMatrix) -> Result<Self> {
        let n = a_ab.dim();
        let cols = 2 * n;
        let mut wide = vec![0i128; n * cols];
        for i in 0..n {
            for j in 0..n {
                wide[i * cols + j] = a_ab.get(i, j) as i128;
                wide[i * cols + n + j] = a_bc.get(i, j) as i128;
            }
        }
        let (hermite, unimodular) = column_hermite(n, cols, &wide).ok_or(Error::SingularModulus)?;
        let mut lattice = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let v: i128 = (0..n).map(|j| a_bc.get(i, j) as i128 * unimodular[(n + j) * cols + n + k]).sum();
                lattice[i * n + k] = v as i64;
            }
        }
        Ok(Self { n, a_bc: a_bc.clone(), hermite, unimodular, lattice })
    }

    /// A particular solution `u0`, or `None` when the constraints are incompatible.
    pub(crate) fn particular(&self, mu: &[i64], nu: &[i64], rho: &[i64]) -> Option<Vec<i64>> {
        let n = self.n;
        let cols = 2 * n;
        // A_ab t + A_bc s = rho - mu - nu, then u = nu + A_bc s
        let rhs: Vec<i128> = (0..n).map(|i| (rho[i] - mu[i] - nu[i]) as i128).collect();
        let mut y = vec![0i128; n];
        for i in 0..n {
            let r = rhs[i] - (0..i).map(|k| self.hermite[i * n + k] * y[k]).sum::<i128>();
            let h = self.hermite[i * n + i];
            if r % h != 0 {
                return None;
            }
            y[i] = r / h;
        }
        let s: Vec<i64> = (0..n).map(|j| (0..n).map(|k| self.unimodular[(n + j) * cols + k] * y[k]).sum::<i128>() as i64).collect();
        let shift = self.a_bc.mul_vec(&s);
        Some(nu.iter().zip(shift).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn basis(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, k| self.lattice[i * self.n + k] as f64)
    }

    /// `u0 + B k`.
    pub(crate) fn point(&self, u0: &[i64], k: &[i64]) -> Vec<i64> {
        (0..self.n).map(|i| u0[i] + (0..self.n).map(|j| self.lattice[i * self.n + j] * k[j]).sum::<i64>()).collect()
    }
}

/// `sum_u delta(-u + rho = mu mod A_ab) delta(u = nu mod A_bc) exp(-pi v^T Q v)`,
/// `v = u - A_bc A_ac^{-1} rho`, summed over the admissible sublattice.
fn constraint_sum(
    triple: &LabelTriple,
    q: &DMatrix<C64>,
    mu: &CosetIndex,
    nu: &CosetIndex,
    rho: &CosetIndex,
    tol: f64,
) -> Result<C64> {
    triple.check_indices(mu, nu, rho)?;
    let Some(u0) = triple.solver.particular(mu.rep(), nu.rep(), rho.rep()) else {
        return Ok(C64::new(0.0, 0.0));
    };
    let n = triple.dim();
    let basis = triple.solver.basis();
    let shift = triple.gaussian_center(rho)?;
    let b_c = basis.map(|v| C64::new(v, 0.0));
    let q_k = b_c.transpose() * q * &b_c;
    let inv = basis.clone().try_inverse().ok_or(Error::SingularModulus)?;
    let offset = DMatrix::from_fn(n, 1, |i, _| shift[i] - u0[i] as f64);
    let center: Vec<C64> = (&inv * offset).iter().map(|&v| C64::new(v, 0.0)).collect();
    let bound = TailBound::gaussian(&q_k, &center, 0.0)?;
    let value = certified_sum(&bound, tol, DEFAULT_RADIUS_CAP, |k| {
        let u = triple.solver.point(&u0, k);
        let v: Vec<C64> = (0..n).map(|i| C64::new(u[i] as f64 - shift[i], 0.0)).collect();
        (-PI * bilinear(q, &v, &v)).exp()
    })?;
    Ok(value.value)
}

/// `A_ab^{-1} + A_bc^{-1}`.
fn inverse_sum(triple: &LabelTriple) -> Result<DMatrix<f64>> {
    Ok(triple.a_ab().inverse()?.to_real() + triple.a_bc().inverse()?.to_real())
}

/// `(A_ab^{-1} + A_bc^{-1})(1 + i A_b theta)^{-1}`, checked symmetric.
pub fn deformed_structure_form(triple: &LabelTriple) -> Result<ComplexSymMatrix> {
    let n = triple.dim();
    let s = inverse_sum(triple)?.map(|v| C64::new(v, 0.0));
    let f = identity_c(n) + (triple.b.to_real() * triple.theta.matrix()).map(|v| C64::new(0.0, v));
    let f_inv = complex_inverse(&f).ok_or(Error::SingularDeformation)?;
    ComplexSymMatrix::from_computed(s * f_inv)
}

/// Commutative structure constant. The triple's deformation parameter is ignored.
pub fn c_comm(triple: &LabelTriple, mu: &CosetIndex, nu: &CosetIndex, rho: &CosetIndex, tol: f64) -> Result<C64> {
    let q = inverse_sum(triple)?.map(|v| C64::new(v, 0.0));
    constraint_sum(triple, &q, mu, nu, rho, tol)
}

/// Noncommutative structure constant.
pub fn c_nc(triple: &LabelTriple, mu: &CosetIndex, nu: &CosetIndex, rho: &CosetIndex, tol: f64) -> Result<C64> {
    let q = deformed_structure_form(triple)?;
    constraint_sum(triple, q.matrix(), mu, nu, rho, tol)
}

/// All structure constants of a triple, stored densely in lexicographic
/// `(mu, nu, rho)` order of canonical representatives.
#[derive(Clone, Debug)]
pub struct StructureTensor {
    triple: LabelTriple,
    mus: Vec<CosetIndex>,
    nus: Vec<CosetIndex>,
    rhos: Vec<CosetIndex>,
    values: Vec<C64>,
}

impl StructureTensor {
    pub fn triple(&self) -> &LabelTriple {
        &self.triple
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.mus.len(), self.nus.len(), self.rhos.len())
    }

    pub fn mu_indices(&self) -> &[CosetIndex] {
        &self.mus
    }

    pub fn nu_indices(&self) -> &[CosetIndex] {
        &self.nus
    }

    pub fn rho_indices(&self) -> &[CosetIndex] {
        &self.rhos
    }

    /// Entry by position in the canonical orderings.
    pub fn entry(&self, i: usize, j: usize, k: usize) -> C64 {
        let (_, b, c) = self.shape();
        self.values[(i * b + j) * c + k]
    }

    pub fn get(&self, mu: &CosetIndex, nu: &CosetIndex, rho: &CosetIndex) -> Result<C64> {
        let (q_ab, q_bc, q_ac) = self.triple.quotients();
        let find = |q: &Quotient, list: &[CosetIndex], x: &CosetIndex| -> Result<usize> {
            if x.modulus() != q.modulus() {
                return Err(Error::IndexModulusMismatch);
            }
            let canon = q.reduce(x.rep());
            Ok(list.iter().position(|y| *y == canon).expect("canonical representative present"))
        };
        Ok(self.entry(find(q_ab, &self.mus, mu)?, find(q_bc, &self.nus, nu)?, find(q_ac, &self.rhos, rho)?))
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// `{"mu|nu|rho": [re, im]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (i, mu) in self.mus.iter().enumerate() {
            for (j, nu) in self.nus.iter().enumerate() {
                for (k, rho) in self.rhos.iter().enumerate() {
                    let v = self.entry(i, j, k);
                    map.insert(format!("{}|{}|{}", mu.label(), nu.label(), rho.label()), serde_json::json!([v.re, v.im]));
                }
            }
        }
        serde_json::Value::Object(map)
    }
}

/// Tabulate `c_comm` (zero deformation) or `c_nc` over all index triples.
pub fn structure_tensor(triple: &LabelTriple, tol: f64) -> Result<StructureTensor> {
    let q = if triple.theta.is_zero() {
        inverse_sum(triple)?.map(|v| C64::new(v, 0.0))
    } else {
        deformed_structure_form(triple)?.matrix().clone()
    };
    tabulate(triple, |mu, nu, rho| constraint_sum(triple, &q, mu, nu, rho, tol))
}

/// Tensor of `entry(mu, nu, rho)` over all canonical index triples, evaluated in parallel.
pub fn tabulate<F>(triple: &LabelTriple, entry: F) -> Result<StructureTensor>
where
    F: Fn(&CosetIndex, &CosetIndex, &CosetIndex) -> Result<C64> + Sync,
{
    let (q_ab, q_bc, q_ac) = triple.quotients();
    let (mus, nus, rhos) = (q_ab.representatives(), q_bc.representatives(), q_ac.representatives());
    let (p, q_len, r) = (mus.len(), nus.len(), rhos.len());
    let combos: Vec<(usize, usize, usize)> =
        (0..p).flat_map(|i| (0..q_len).flat_map(move |j| (0..r).map(move |k| (i, j, k)))).collect();
    let values = combos.par_iter().map(|&(i, j, k)| entry(&mus[i], &nus[j], &rhos[k])).collect::<Result<Vec<_>>>()?;
    Ok(StructureTensor { triple: triple.clone(), mus, nus, rhos, values })
}

/// The space of holomorphic sections between two labels.
#[derive(Clone, Debug, PartialEq)]
pub struct HomSpace {
    pub source: IntSymMatrix,
    pub target: IntSymMatrix,
    pub dimension: usize,
    /// Coset indices labelling the basis; empty for the identity space and the zero space.
    pub basis: Vec<CosetIndex>,
}

impl HomSpace {
    pub fn new(source: &IntSymMatrix, target: &IntSymMatrix) -> Result<Self> {
        let d = difference(source, target)?;
        let (dimension, basis) = if d.is_zero() {
            (1, Vec::new())
        } else if is_positive_definite(&d) {
            let reps = Quotient::new(&d)?.representatives();
            (reps.len(), reps)
        } else {
            (0, Vec::new())
        };
        Ok(Self { source: source.clone(), target: target.clone(), dimension, basis })
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }
}

/// Composition `H(a,b) x H(b,c) -> H(a,c)` on coefficient vectors.
///
/// A factor in an identity space acts by scalar multiplication.
pub fn compose(
    ab: &HomSpace,
    x: &[C64],
    bc: &HomSpace,
    y: &[C64],
    theta: &SkewMatrix,
    tol: f64,
) -> Result<Vec<C64>> {
    if ab.target != bc.source {
        return Err(Error::InvalidInput("composable spaces must share the middle label".into()));
    }
    if x.len() != ab.dimension {
        return Err(Error::DimensionMismatch { expected: ab.dimension, found: x.len() });
    }
    if y.len() != bc.dimension {
        return Err(Error::DimensionMismatch { expected: bc.dimension, found: y.len() });
    }
    if ab.is_identity() {
        return Ok(y.iter().map(|v| v * x[0]).collect());
    }
    if bc.is_identity() {
        return Ok(x.iter().map(|v| v * y[0]).collect());
    }
    if ab.dimension == 0 || bc.dimension == 0 {
        let ac = HomSpace::new(&ab.source, &bc.target)?;
        return Ok(vec![C64::new(0.0, 0.0); ac.dimension]);
    }
    let triple = LabelTriple::new(ab.source.clone(), ab.target.clone(), bc.target.clone(), theta.clone())?;
    let t = structure_tensor(&triple, tol)?;
    let (p, q, r) = t.shape();
    Ok((0..r)
        .map(|k| {
            let mut s = C64::new(0.0, 0.0);
            for i in 0..p {
                for j in 0..q {
                    s += x[i] * y[j] * t.entry(i, j, k);
                }
            }
            s
        })
        .collect())
}

/// Points of the closed unit polydisc, reproducible from `seed`.
pub fn polydisc_samples(n: usize, count: usize, seed: u64) -> Vec<Vec<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let r: f64 = rng.gen::<f64>().sqrt();
                    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
                    C64::from_polar(r, phi)
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdditionReport {
    pub samples: usize,
    pub comparisons: usize,
    pub max_rel_error: f64,
    pub tol: f64,
    pub pass: bool,
}

impl AdditionReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "samples": self.samples,
            "comparisons": self.comparisons,
            "max_rel_error": self.max_rel_error,
            "tol": self.tol,
            "pass": self.pass,
        })
    }
}

/// Compare both sides of the product formula at seeded sample points.
///
/// The error at a point is `|lhs - rhs| / sum_rho |C_rho e_rho(z)|`; the
/// check passes iff the largest error is below `tol`.
pub fn verify_addition(triple: &LabelTriple, samples: usize, seed: u64, tol: f64) -> Result<AdditionReport> {
    let n = triple.dim();
    let points = polydisc_samples(n, samples, seed);
    let tensor = structure_tensor(triple, INNER_TOL)?;
    let (a, b, c) = triple.labels();
    let commutative = triple.theta.is_zero();
    let deformation = NcDeformation::new(triple.theta.clone());

    // e_ac^rho at every sample point
    let basis_ac: Vec<Vec<C64>> = tensor
        .rhos
        .iter()
        .map(|rho| {
            points
                .iter()
                .map(|z| {
                    if commutative {
                        e_comm(a, c, rho, z, INNER_TOL).map(|v| v.value)
                    } else {
                        deformation.pair(a, c)?.eval(rho, z, INNER_TOL).map(|v| v.value)
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut series: HashMap<(usize, usize), Vec<C64>> = HashMap::new();
    for (i, mu) in tensor.mus.iter().enumerate() {
        for (j, nu) in tensor.nus.iter().enumerate() {
            let lhs: Vec<C64> = if commutative {
                points
                    .iter()
                    .map(|z| Ok(e_comm(a, b, mu, z, INNER_TOL)?.value * e_comm(b, c, nu, z, INNER_TOL)?.value))
                    .collect::<Result<_>>()?
            } else {
                let f = theta_series_of_pair(&*deformation.pair(a, b)?, mu, INNER_TOL)?;
                let g = theta_series_of_pair(&*deformation.pair(b, c)?, nu, INNER_TOL)?;
                let fg: FourierPolynomial = star_fourier(&f, &g, &triple.theta)?;
                points.iter().map(|z| fg.eval(z)).collect::<Result<_>>()?
            };
            series.insert((i, j), lhs);
        }
    }

    let mut max_err: f64 = 0.0;
    let mut comparisons = 0;
    for i in 0..tensor.mus.len() {
        for j in 0..tensor.nus.len() {
            let lhs = &series[&(i, j)];
            for (p, l) in lhs.iter().enumerate() {
                let mut rhs = C64::new(0.0, 0.0);
                let mut scale = 0.0;
                for k in 0..tensor.rhos.len() {
                    let term = tensor.entry(i, j, k) * basis_ac[k][p];
                    rhs += term;
                    scale += term.norm();
                }
                let err = (l - rhs).norm() / scale.max(f64::MIN_POSITIVE);
                max_err = max_err.max(err);
                comparisons += 1;
            }
        }
    }
    Ok(AdditionReport { samples, comparisons, max_rel_error: max_err, tol, pass: max_err < tol })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssociativityStatus {
    Pass,
    Fail,
    /// No admissible quadruple was available to test.
    Vacuous,
}

impl AssociativityStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Vacuous => "vacuous",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssociativityReport {
    pub status: AssociativityStatus,
    pub checked: usize,
    pub max_error: f64,
    pub tol: f64,
}

impl AssociativityReport {
    pub fn vacuous(tol: f64) -> Self {
        Self { status: AssociativityStatus::Vacuous, checked: 0, max_error: 0.0, tol }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "status": self.status.as_str(),
            "checked": self.checked,
            "max_error": self.max_error,
            "tol": self.tol,
        })
    }
}

/// Compare `(x y) w` with `x (y w)` for all basis elements of
/// `H(a,b) x H(b,c) x H(c,d)`, measured relative to the largest entry.
pub fn check_associativity(
    a: &IntSymMatrix,
    b: &IntSymMatrix,
    c: &IntSymMatrix,
    d: &IntSymMatrix,
    theta: &SkewMatrix,
    tol: f64,
) -> Result<AssociativityReport> {
    let abc = structure_tensor(&LabelTriple::new(a.clone(), b.clone(), c.clone(), theta.clone())?, INNER_TOL)?;
    let acd = structure_tensor(&LabelTriple::new(a.clone(), c.clone(), d.clone(), theta.clone())?, INNER_TOL)?;
    let bcd = structure_tensor(&LabelTriple::new(b.clone(), c.clone(), d.clone(), theta.clone())?, INNER_TOL)?;
    let abd = structure_tensor(&LabelTriple::new(a.clone(), b.clone(), d.clone(), theta.clone())?, INNER_TOL)?;
    let (n_mu, n_nu, n_ac) = abc.shape();
    let (_, n_ka, n_ad) = acd.shape();
    let n_bd = bcd.shape().2;
    let mut max_diff: f64 = 0.0;
    let mut max_val: f64 = 0.0;
    let mut checked = 0;
    for i in 0..n_mu {
        for j in 0..n_nu {
            for k in 0..n_ka {
                for r in 0..n_ad {
                    let left: C64 = (0..n_ac).map(|l| abc.entry(i, j, l) * acd.entry(l, k, r)).sum();
                    let right: C64 = (0..n_bd).map(|l| bcd.entry(j, k, l) * abd.entry(i, l, r)).sum();
                    max_diff = max_diff.max((left - right).norm());
                    max_val = max_val.max(left.norm()).max(right.norm());
                    checked += 1;
                }
            }
        }
    }
    let max_error = if max_val > 0.0 { max_diff / max_val } else { max_diff };
    let status = if max_error < tol { AssociativityStatus::Pass } else { AssociativityStatus::Fail };
    Ok(AssociativityReport { status, checked, max_error, tol })
}

/// Associativity over every increasing quadruple of a chain of labels;
/// vacuous when the chain has fewer than four labels.
pub fn check_associativity_chain(labels: &[IntSymMatrix], theta: &SkewMatrix, tol: f64) -> Result<AssociativityReport> {
    let m = labels.len();
    if m < 4 {
        return Ok(AssociativityReport::vacuous(tol));
    }
    let mut total = AssociativityReport { status: AssociativityStatus::Pass, checked: 0, max_error: 0.0, tol };
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    let r = check_associativity(&labels[i], &labels[j], &labels[k], &labels[l], theta, tol)?;
                    total.checked += r.checked;
                    total.max_error = total.max_error.max(r.max_error);
                    if r.status == AssociativityStatus::Fail {
                        total.status = AssociativityStatus::Fail;
                    }
                }
            }
        }
    }
    Ok(total)
}
