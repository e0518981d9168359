//! Heisenberg modules: Schwartz functions on `R^n x (Z^n / A Z^n)` modelled as
//! finite sums of Gaussian atoms, with the torus action, the constant
//! curvature connection, the tensor product and the periodization maps.
//!
//! Derivatives are taken by central finite differences of exact evaluations.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::io;
use crate::lattice::{
    bilinear, certified_sum, for_each_in_box, quadratic_majorant, KahanSum, LatticeValue, TailBound, DEFAULT_RADIUS_CAP,
};
use crate::linalg::{
    complex_inverse, difference, is_positive_definite, min_eigenvalue, ComplexSymMatrix, CosetIndex, IntSymMatrix,
    Quotient, C64,
};
use crate::structure::{center_shift, polydisc_samples, CongruenceSolver};

/// Default step for first-order finite differences.
pub const DEFAULT_STEP: f64 = 1e-5;

/// Default step for nested (commutator) finite differences.
pub const COMMUTATOR_STEP: f64 = 1e-4;

fn real_c(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(m: &DMatrix<C64>, v: &[C64]) -> Vec<C64> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum()).collect()
}

/// `amp * exp(-pi (x - s)^T M (x - s) + 2 pi i k^T x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianAtom {
    m: DMatrix<C64>,
    s: Vec<C64>,
    k: Vec<C64>,
    amp: C64,
}

impl GaussianAtom {
    pub fn new(m: ComplexSymMatrix, s: Vec<C64>, k: Vec<C64>, amp: C64) -> Result<Self> {
        let n = m.dim();
        for d in [s.len(), k.len()] {
            if d != n {
                return Err(Error::DimensionMismatch { expected: n, found: d });
            }
        }
        if min_eigenvalue(&m.re()) <= 0.0 {
            return Err(Error::NotPositiveReal);
        }
        Ok(Self { m: m.matrix().clone(), s, k, amp })
    }

    /// `exp(-pi x^T A x)`.
    pub fn centered(a: &IntSymMatrix) -> Result<Self> {
        let n = a.dim();
        Self::new(ComplexSymMatrix::from_real(&a.to_real())?, vec![C64::default(); n], vec![C64::default(); n], C64::new(1.0, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.s.len()
    }

    pub fn quadratic(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn center(&self) -> &[C64] {
        &self.s
    }

    pub fn frequency(&self) -> &[C64] {
        &self.k
    }

    pub fn amplitude(&self) -> C64 {
        self.amp
    }

    pub fn eval(&self, x: &[C64]) -> C64 {
        let y: Vec<C64> = x.iter().zip(&self.s).map(|(a, b)| a - b).collect();
        self.amp * (-PI * bilinear(&self.m, &y, &y) + C64::new(0.0, 2.0 * PI) * dot(&self.k, x)).exp()
    }

    pub fn eval_real(&self, x: &[f64]) -> C64 {
        self.eval(&real_c(x))
    }

    /// `log sup_{x real} |atom(x)|`, in closed form.
    pub fn log_sup_abs(&self) -> f64 {
        if self.amp == C64::new(0.0, 0.0) {
            return f64::NEG_INFINITY;
        }
        let n = self.dim();
        let p = self.m.map(|z| z.re);
        let sm = self.m.map(|z| z.im);
        let a: Vec<f64> = self.s.iter().map(|z| z.re).collect();
        let b: Vec<f64> = self.s.iter().map(|z| z.im).collect();
        let kim: Vec<f64> = self.k.iter().map(|z| z.im).collect();
        let quad = |m: &DMatrix<f64>, u: &[f64], v: &[f64]| -> f64 {
            (0..n).map(|i| (0..n).map(|j| u[i] * m[(i, j)] * v[j]).sum::<f64>()).sum()
        };
        let g: Vec<f64> = (0..n).map(|i| (0..n).map(|j| sm[(i, j)] * b[j]).sum::<f64>() + kim[i]).collect();
        let p_inv = p.clone().try_inverse().unwrap_or_else(|| DMatrix::zeros(n, n));
        let ka: f64 = kim.iter().zip(&a).map(|(x, y)| x * y).sum();
        self.amp.norm().ln() + PI * quad(&p, &b, &b) - 2.0 * PI * ka + PI * quad(&p_inv, &g, &g)
    }

    pub fn sup_abs(&self) -> f64 {
        self.log_sup_abs().exp()
    }

    /// `x -> atom(x + v)`.
    pub fn translated(&self, v: &[C64]) -> Self {
        let s = self.s.iter().zip(v).map(|(a, b)| a - b).collect();
        let amp = self.amp * (C64::new(0.0, 2.0 * PI) * dot(&self.k, v)).exp();
        Self { m: self.m.clone(), s, k: self.k.clone(), amp }
    }

    /// `x -> atom(x) exp(2 pi i q^T x)`.
    pub fn modulated(&self, q: &[C64]) -> Self {
        let k = self.k.iter().zip(q).map(|(a, b)| a + b).collect();
        Self { m: self.m.clone(), s: self.s.clone(), k, amp: self.amp }
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self { amp: self.amp * c, ..self.clone() }
    }

    /// Pointwise product; quadratic forms and frequencies add.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let m = &self.m + &other.m;
        let m_inv = complex_inverse(&m).ok_or(Error::NotPositiveReal)?;
        let w: Vec<C64> = mat_vec(&self.m, &self.s).iter().zip(mat_vec(&other.m, &other.s)).map(|(a, b)| a + b).collect();
        let s = mat_vec(&m_inv, &w);
        let c0 = bilinear(&self.m, &self.s, &self.s) + bilinear(&other.m, &other.s, &other.s) - bilinear(&m, &s, &s);
        let k = self.k.iter().zip(&other.k).map(|(a, b)| a + b).collect();
        Ok(Self { m, s, k, amp: self.amp * other.amp * (-PI * c0).exp() })
    }

    /// `sum_{w in Z^n} atom(w)` with a certified tail.
    pub fn lattice_sum(&self, tol: f64) -> Result<LatticeValue> {
        if self.amp == C64::new(0.0, 0.0) {
            return Ok(LatticeValue { value: C64::default(), radius: 0 });
        }
        // complete the square: the modulation moves the center to s + i M^{-1} k
        let m_inv = complex_inverse(&self.m).ok_or(Error::NotPositiveReal)?;
        let shift = mat_vec(&m_inv, &self.k);
        let center: Vec<C64> = self.s.iter().zip(&shift).map(|(a, b)| a + C64::new(0.0, 1.0) * b).collect();
        let log0 = self.amp.norm().ln()
            + (C64::new(0.0, 2.0 * PI) * dot(&self.k, &self.s) - PI * dot(&self.k, &shift)).re;
        let bound = TailBound::gaussian(&self.m, &center, log0)?;
        certified_sum(&bound, tol, DEFAULT_RADIUS_CAP, |w| self.eval(&real_c(&w.iter().map(|&v| v as f64).collect::<Vec<_>>())))
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "M": io::complex_matrix_json(&self.m),
            "s": io::complex_vector_json(&self.s),
            "k": io::complex_vector_json(&self.k),
            "amp": io::complex_json(self.amp),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| v.get(name).ok_or_else(|| Error::InvalidInput(format!("atom is missing '{name}'")));
        Self::new(
            ComplexSymMatrix::from_computed(io::parse_complex_matrix(field("M")?)?)?,
            io::parse_complex_vector(field("s")?)?,
            io::parse_complex_vector(field("k")?)?,
            io::parse_complex(field("amp")?)?,
        )
    }
}

/// Element of `S(R^n x (Z^n / A Z^n))`: Gaussian atoms attached to cosets.
#[derive(Clone, Debug)]
pub struct SchwartzElement {
    quotient: Quotient,
    atoms: BTreeMap<CosetIndex, Vec<GaussianAtom>>,
}

impl SchwartzElement {
    pub fn zero(modulus: &IntSymMatrix) -> Result<Self> {
        Ok(Self { quotient: Quotient::new(modulus)?, atoms: BTreeMap::new() })
    }

    pub fn single(modulus: &IntSymMatrix, mu: &CosetIndex, atoms: Vec<GaussianAtom>) -> Result<Self> {
        let mut e = Self::zero(modulus)?;
        for a in atoms {
            e.push(mu, a)?;
        }
        Ok(e)
    }

    pub fn dim(&self) -> usize {
        self.modulus().dim()
    }

    pub fn modulus(&self) -> &IntSymMatrix {
        self.quotient.modulus()
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn push(&mut self, mu: &CosetIndex, atom: GaussianAtom) -> Result<()> {
        self.quotient.check(mu)?;
        if atom.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: atom.dim() });
        }
        self.atoms.entry(mu.clone()).or_default().push(atom);
        Ok(())
    }

    /// Add an atom at the coset of an arbitrary integer vector.
    pub fn push_at(&mut self, v: &[i64], atom: GaussianAtom) -> Result<()> {
        let mu = self.quotient.reduce(v);
        self.push(&mu, atom)
    }

    pub fn component(&self, mu: &CosetIndex) -> &[GaussianAtom] {
        self.atoms.get(mu).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn components(&self) -> impl Iterator<Item = (&CosetIndex, &Vec<GaussianAtom>)> {
        self.atoms.iter()
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.values().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.atom_count() == 0
    }

    fn canonical(&self, mu: &CosetIndex) -> Result<CosetIndex> {
        if mu.modulus() != self.modulus() {
            return Err(Error::IndexModulusMismatch);
        }
        Ok(self.quotient.reduce(mu.rep()))
    }

    /// `xi(x; mu)`.
    pub fn eval(&self, x: &[f64], mu: &CosetIndex) -> Result<C64> {
        let mu = self.canonical(mu)?;
        Ok(self.component(&mu).iter().map(|a| a.eval_real(x)).collect::<KahanSum>().value())
    }

    /// `xi(x; mu)` at a complex point (holomorphic extension of each atom).
    pub fn eval_complex(&self, x: &[C64], mu: &CosetIndex) -> Result<C64> {
        let mu = self.canonical(mu)?;
        Ok(self.component(&mu).iter().map(|a| a.eval(x)).collect::<KahanSum>().value())
    }

    fn map_atoms(&self, f: impl Fn(&CosetIndex, &GaussianAtom) -> (Vec<i64>, GaussianAtom)) -> Self {
        let mut out = Self { quotient: self.quotient.clone(), atoms: BTreeMap::new() };
        for (mu, list) in &self.atoms {
            for a in list {
                let (target, atom) = f(mu, a);
                let key = self.quotient.reduce(&target);
                out.atoms.entry(key).or_default().push(atom);
            }
        }
        out
    }

    pub fn scaled(&self, c: C64) -> Self {
        self.map_atoms(|mu, a| (mu.rep().to_vec(), a.scaled(c)))
    }

    pub fn to_json(&self) -> Value {
        let mut out = Vec::new();
        for (mu, list) in &self.atoms {
            for a in list {
                let mut rec = a.to_json();
                rec["coset"] = serde_json::json!(mu.rep());
                out.push(rec);
            }
        }
        Value::Array(out)
    }

    pub fn from_json(modulus: &IntSymMatrix, v: &Value) -> Result<Self> {
        let list = v.as_array().ok_or_else(|| Error::InvalidInput("element must be a list of atoms".into()))?;
        let mut e = Self::zero(modulus)?;
        for rec in list {
            let coset = io::parse_int_vector(rec.get("coset").ok_or_else(|| Error::InvalidInput("atom is missing 'coset'".into()))?)?;
            e.push_at(&coset, GaussianAtom::from_json(rec)?)?;
        }
        Ok(e)
    }
}

/// `(T^mu xi)(x) = sum_w xi(x + w - A^{-1} mu)` for `xi` given by its atoms.
pub fn t_map(a: &IntSymMatrix, mu: &CosetIndex, atoms: &[GaussianAtom], x: &[C64], tol: f64) -> Result<LatticeValue> {
    Quotient::new(a)?.check(mu)?;
    if x.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: x.len() });
    }
    let shift = a.inverse()?.apply_f64(mu.rep());
    let arg: Vec<C64> = x.iter().zip(&shift).map(|(xi, s)| xi - s).collect();
    let per = tol / atoms.len().max(1) as f64;
    let mut acc = KahanSum::default();
    let mut radius = 0;
    for atom in atoms {
        let v = atom.translated(&arg).lattice_sum(per)?;
        acc.add(v.value);
        radius = radius.max(v.radius);
    }
    Ok(LatticeValue { value: acc.value(), radius })
}

/// Theta vector: `exp(-pi x^T A_ab x)` placed at coset `mu`.
pub fn theta_vector(a_a: &IntSymMatrix, a_b: &IntSymMatrix, mu: &CosetIndex) -> Result<SchwartzElement> {
    let a_ab = difference(a_a, a_b)?;
    if !is_positive_definite(&a_ab) {
        return Err(Error::NotPositiveDefinite);
    }
    SchwartzElement::single(&a_ab, mu, vec![GaussianAtom::centered(&a_ab)?])
}

/// All theta vectors of a pair, in canonical coset order.
pub fn theta_vectors(a_a: &IntSymMatrix, a_b: &IntSymMatrix) -> Result<Vec<SchwartzElement>> {
    let a_ab = difference(a_a, a_b)?;
    if !is_positive_definite(&a_ab) {
        return Err(Error::NotPositiveDefinite);
    }
    Quotient::new(&a_ab)?.representatives().iter().map(|mu| theta_vector(a_a, a_b, mu)).collect()
}

fn check_generator(index: usize, n: usize) -> Result<()> {
    if index == 0 || index > 2 * n {
        return Err(Error::InvalidInput(format!("generator index {index} outside 1..={}", 2 * n)));
    }
    Ok(())
}

/// Right action of the generator `U_index` (1-based, `1..=2n`).
///
/// `U_i` multiplies by `exp(2 pi i (x_i + (A^{-1} mu)_i))`; `U_{n+i}` maps
/// `xi(x; mu)` to `xi(x + A^{-1} e_i; mu - e_i)`.
pub fn act_u(index: usize, xi: &SchwartzElement) -> Result<SchwartzElement> {
    let n = xi.dim();
    check_generator(index, n)?;
    let inv = xi.modulus().inverse()?;
    if index <= n {
        let i = index - 1;
        let mut e = vec![C64::default(); n];
        e[i] = C64::new(1.0, 0.0);
        Ok(xi.map_atoms(|mu, a| {
            let phase = C64::from_polar(1.0, 2.0 * PI * inv.apply_f64(mu.rep())[i]);
            (mu.rep().to_vec(), a.modulated(&e).scaled(phase))
        }))
    } else {
        let j = index - n - 1;
        let mut t = vec![0i64; n];
        t[j] = 1;
        let h = real_c(&inv.apply_f64(&t));
        Ok(xi.map_atoms(|mu, a| {
            let target: Vec<i64> = mu.rep().iter().zip(&t).map(|(m, d)| m + d).collect();
            (target, a.translated(&h))
        }))
    }
}

/// Left action of the endomorphism generator `Z_index`; same formulas as [`act_u`].
pub fn act_z(index: usize, xi: &SchwartzElement) -> Result<SchwartzElement> {
    act_u(index, xi)
}

/// Component `index` (1-based) of the connection for modulus `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionSpec {
    modulus: IntSymMatrix,
    index: usize,
}

impl ConnectionSpec {
    pub fn new(modulus: IntSymMatrix, index: usize) -> Result<Self> {
        check_generator(index, modulus.dim())?;
        Ok(Self { modulus, index })
    }

    pub fn modulus(&self) -> &IntSymMatrix {
        &self.modulus
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Apply to a function of `x`: `d/dx_i` by central differences for
    /// `i <= n`, multiplication by `-2 pi i (A x)_{i-n}` otherwise.
    pub fn apply(&self, f: &dyn Fn(&[f64]) -> C64, x: &[f64], h: f64) -> C64 {
        let n = self.modulus.dim();
        if self.index <= n {
            let i = self.index - 1;
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            (f(&xp) - f(&xm)) / (2.0 * h)
        } else {
            let j = self.index - n - 1;
            let ax: f64 = (0..n).map(|k| self.modulus.get(j, k) as f64 * x[k]).sum();
            C64::new(0.0, -2.0 * PI * ax) * f(x)
        }
    }
}

/// `(nabla_i xi)(x; mu)`.
pub fn connection_apply(spec: &ConnectionSpec, xi: &SchwartzElement, x: &[f64], mu: &CosetIndex, h: f64) -> Result<C64> {
    if spec.modulus() != xi.modulus() {
        return Err(Error::IndexModulusMismatch);
    }
    let mu = xi.canonical(mu)?;
    Ok(spec.apply(&|y| xi.eval(y, &mu).expect("checked coset"), x, h))
}

/// `nabla_i + i nabla_{n+i}`, for `i` in `1..=n`.
pub fn dbar_apply(a: &IntSymMatrix, i: usize, f: &dyn Fn(&[f64]) -> C64, x: &[f64], h: f64) -> Result<C64> {
    let n = a.dim();
    if i == 0 || i > n {
        return Err(Error::InvalidInput(format!("holomorphic direction {i} outside 1..={n}")));
    }
    let d = ConnectionSpec::new(a.clone(), i)?.apply(f, x, h);
    let m = ConnectionSpec::new(a.clone(), n + i)?.apply(f, x, h);
    Ok(d + C64::new(0.0, 1.0) * m)
}

/// Points of `[-1, 1]^n`, reproducible from `seed`.
pub fn cube_samples(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub checks: usize,
    pub max_error: f64,
    pub tol: f64,
    pub pass: bool,
}

impl ResidualReport {
    fn new(checks: usize, max_error: f64, tol: f64) -> Self {
        Self { checks, max_error, tol, pass: max_error <= tol }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({"checks": self.checks, "max_error": self.max_error, "tol": self.tol, "pass": self.pass})
    }
}

/// `max_{x, i} |(dbar_i xi)(x; mu)| / |xi(x; mu)|` over `samples` seeded points.
pub fn dbar_residual(xi: &SchwartzElement, mu: &CosetIndex, samples: usize, h: f64, seed: u64) -> Result<(usize, f64)> {
    let n = xi.dim();
    let mu = xi.canonical(mu)?;
    let f = |y: &[f64]| xi.eval(y, &mu).expect("checked coset");
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for x in cube_samples(n, samples, seed) {
        let value = f(&x).norm();
        for i in 1..=n {
            let r = dbar_apply(xi.modulus(), i, &f, &x, h)?.norm();
            worst = worst.max(if value > 0.0 { r / value } else { r });
            checks += 1;
        }
    }
    Ok((checks, worst))
}

/// The holomorphic structure annihilates the theta vector of `(A_a, A_b, mu)`.
pub fn dbar_kernel_check(
    a_a: &IntSymMatrix,
    a_b: &IntSymMatrix,
    mu: &CosetIndex,
    samples: usize,
    h: f64,
    tol: f64,
    seed: u64,
) -> Result<ResidualReport> {
    let xi = theta_vector(a_a, a_b, mu)?;
    let (checks, worst) = dbar_residual(&xi, mu, samples, h, seed)?;
    Ok(ResidualReport::new(checks, worst, tol))
}

/// `(i / 2 pi) [nabla_i, nabla_j] xi - F_ij xi` over all `i, j`, cosets and
/// sample points, relative to the largest sampled `|xi|`.
pub fn curvature_check(xi: &SchwartzElement, points: &[Vec<f64>], h: f64, tol: f64) -> Result<ResidualReport> {
    let n = xi.dim();
    let a = xi.modulus();
    let curvature = |i: usize, j: usize| -> f64 {
        match (i < n, j < n) {
            (true, false) => a.get(i, j - n) as f64,
            (false, true) => -(a.get(i - n, j) as f64),
            _ => 0.0,
        }
    };
    let specs: Vec<ConnectionSpec> = (1..=2 * n).map(|i| ConnectionSpec::new(a.clone(), i)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut checks = 0;
    for (mu, _) in xi.components() {
        let f = |y: &[f64]| xi.eval(y, mu).expect("own coset");
        for x in points {
            let value = f(x);
            scale = scale.max(value.norm());
            for i in 0..2 * n {
                for j in 0..2 * n {
                    let gi = |y: &[f64]| specs[j].apply(&f, y, h);
                    let gj = |y: &[f64]| specs[i].apply(&f, y, h);
                    let comm = specs[i].apply(&gi, x, h) - specs[j].apply(&gj, x, h);
                    let lhs = C64::new(0.0, 1.0 / (2.0 * PI)) * comm;
                    worst = worst.max((lhs - value * curvature(i, j)).norm());
                    checks += 1;
                }
            }
        }
    }
    let rel = if scale > 0.0 { worst / scale } else { worst };
    Ok(ResidualReport::new(checks, rel, tol))
}

/// The three moduli of a composable pair of Hom spaces.
#[derive(Clone, Debug)]
pub struct TensorLabels {
    a_ab: IntSymMatrix,
    a_bc: IntSymMatrix,
    a_ac: IntSymMatrix,
    solver: CongruenceSolver,
}

impl TensorLabels {
    pub fn new(a_a: &IntSymMatrix, a_b: &IntSymMatrix, a_c: &IntSymMatrix) -> Result<Self> {
        let a_ab = difference(a_a, a_b)?;
        let a_bc = difference(a_b, a_c)?;
        let a_ac = difference(a_a, a_c)?;
        for d in [&a_ab, &a_bc, &a_ac] {
            if d.det() == 0 {
                return Err(Error::SingularModulus);
            }
        }
        Ok(Self { solver: CongruenceSolver::new(&a_ab, &a_bc)?, a_ab, a_bc, a_ac })
    }

    pub fn a_ab(&self) -> &IntSymMatrix {
        &self.a_ab
    }

    pub fn a_bc(&self) -> &IntSymMatrix {
        &self.a_bc
    }

    pub fn a_ac(&self) -> &IntSymMatrix {
        &self.a_ac
    }

    /// Arguments `(x + A_ab^{-1} v, x - A_bc^{-1} v)` with `v = u - A_bc A_ac^{-1} rho`.
    fn arguments(&self, u: &[f64], shift: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let vv: Vec<f64> = u.iter().zip(shift).map(|(a, b)| a - b).collect();
        let p = self.a_ab.inverse()?.to_real() * DMatrix::from_column_slice(vv.len(), 1, &vv);
        let q = self.a_bc.inverse()?.to_real() * DMatrix::from_column_slice(vv.len(), 1, &vv);
        Ok((p.iter().copied().collect(), q.iter().map(|x| -x).collect()))
    }
}

/// Product atom for the lattice parameter `k` (real), with `u = u0 + B k`.
fn tensor_atom(labels: &TensorLabels, u0: &[i64], k: &[f64], shift: &[f64], alpha: &GaussianAtom, beta: &GaussianAtom) -> Result<GaussianAtom> {
    let n = u0.len();
    let basis = labels.solver.basis();
    let u: Vec<f64> = (0..n).map(|i| u0[i] as f64 + (0..n).map(|j| basis[(i, j)] * k[j]).sum::<f64>()).collect();
    let (p, q) = labels.arguments(&u, shift)?;
    alpha.translated(&real_c(&p)).product(&beta.translated(&real_c(&q)))
}

/// Tensor product `m: Hom(E_a, E_b) x Hom(E_b, E_c) -> Hom(E_a, E_c)`,
///
/// `m(xi, eta)(x; rho) = sum_u xi(x + A_ab^{-1} v; rho - u) eta(x - A_bc^{-1} v; u)`,
/// `v = u - A_bc A_ac^{-1} rho`. The dropped atoms have total supremum at most `tol`.
pub fn tensor_m(
    xi_ab: &SchwartzElement,
    xi_bc: &SchwartzElement,
    a_a: &IntSymMatrix,
    a_b: &IntSymMatrix,
    a_c: &IntSymMatrix,
    tol: f64,
) -> Result<SchwartzElement> {
    let labels = TensorLabels::new(a_a, a_b, a_c)?;
    if xi_ab.modulus() != labels.a_ab() || xi_bc.modulus() != labels.a_bc() {
        return Err(Error::IndexModulusMismatch);
    }
    let n = labels.a_ab.dim();
    let mut out = SchwartzElement::zero(labels.a_ac())?;
    let rhos = out.quotient.representatives();
    let pairs = xi_ab.atom_count() * xi_bc.atom_count();
    if pairs == 0 {
        return Ok(out);
    }
    let per = tol / (pairs * rhos.len()) as f64;
    for rho in &rhos {
        let shift = center_shift(labels.a_bc(), labels.a_ac(), rho.rep())?;
        for (mu, list_ab) in xi_ab.components() {
            for (nu, list_bc) in xi_bc.components() {
                let Some(u0) = labels.solver.particular(mu.rep(), nu.rep(), rho.rep()) else {
                    continue;
                };
                for alpha in list_ab {
                    for beta in list_bc {
                        let size = |k: &[f64]| -> Result<f64> { Ok(tensor_atom(&labels, &u0, k, &shift, alpha, beta)?.log_sup_abs()) };
                        let bound = quadratic_majorant(n, &size)?;
                        let radius = bound.radius(per, DEFAULT_RADIUS_CAP)?;
                        let mut failure = None;
                        for_each_in_box(&bound.center, radius, |k| {
                            let kf: Vec<f64> = k.iter().map(|&v| v as f64).collect();
                            match tensor_atom(&labels, &u0, &kf, &shift, alpha, beta) {
                                Ok(atom) => out.atoms.entry(rho.clone()).or_default().push(atom),
                                Err(e) => failure = Some(e),
                            }
                        });
                        if let Some(e) = failure {
                            return Err(e);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Pointwise evaluation of the tensor product of two arbitrary coset
/// functions, summing `u` over a box of half-width `radius` around the
/// Gaussian center.
#[allow(clippy::too_many_arguments)]
pub fn tensor_eval_with(
    labels: &TensorLabels,
    f_ab: &dyn Fn(&[f64], &CosetIndex) -> C64,
    f_bc: &dyn Fn(&[f64], &CosetIndex) -> C64,
    x: &[f64],
    rho: &CosetIndex,
    radius: i64,
) -> Result<C64> {
    let q_ab = Quotient::new(labels.a_ab())?;
    let q_bc = Quotient::new(labels.a_bc())?;
    Quotient::new(labels.a_ac())?.check(rho)?;
    let shift = center_shift(labels.a_bc(), labels.a_ac(), rho.rep())?;
    let mut acc = KahanSum::default();
    let mut failure = None;
    for_each_in_box(&shift, radius, |u| {
        let uf: Vec<f64> = u.iter().map(|&v| v as f64).collect();
        match labels.arguments(&uf, &shift) {
            Ok((p, q)) => {
                let xa: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + b).collect();
                let xb: Vec<f64> = x.iter().zip(&q).map(|(a, b)| a + b).collect();
                let mu_arg: Vec<i64> = rho.rep().iter().zip(u).map(|(r, v)| r - v).collect();
                acc.add(f_ab(&xa, &q_ab.reduce(&mu_arg)) * f_bc(&xb, &q_bc.reduce(u)));
            }
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(acc.value()),
    }
}

/// `nabla_i m(xi, eta) - m(nabla_i xi, eta) - m(xi, nabla_i eta)` at sample
/// points, for every connection index and output coset; relative to the
/// largest sampled `|nabla_i m(xi, eta)|`.
#[allow(clippy::too_many_arguments)]
pub fn leibniz_check(
    xi: &SchwartzElement,
    eta: &SchwartzElement,
    a_a: &IntSymMatrix,
    a_b: &IntSymMatrix,
    a_c: &IntSymMatrix,
    points: &[Vec<f64>],
    h: f64,
    tol: f64,
) -> Result<ResidualReport> {
    let labels = TensorLabels::new(a_a, a_b, a_c)?;
    let product = tensor_m(xi, eta, a_a, a_b, a_c, 1e-14)?;
    let n = labels.a_ab.dim();
    let radius = 10;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut checks = 0;
    let plain_ab = |y: &[f64], mu: &CosetIndex| xi.eval(y, mu).expect("reduced coset");
    let plain_bc = |y: &[f64], nu: &CosetIndex| eta.eval(y, nu).expect("reduced coset");
    for index in 1..=2 * n {
        let on_ac = ConnectionSpec::new(labels.a_ac.clone(), index)?;
        let on_ab = ConnectionSpec::new(labels.a_ab.clone(), index)?;
        let on_bc = ConnectionSpec::new(labels.a_bc.clone(), index)?;
        let d_ab = |y: &[f64], mu: &CosetIndex| on_ab.apply(&|t| xi.eval(t, mu).expect("reduced coset"), y, h);
        let d_bc = |y: &[f64], nu: &CosetIndex| on_bc.apply(&|t| eta.eval(t, nu).expect("reduced coset"), y, h);
        for rho in product.quotient.representatives() {
            for x in points {
                let lhs = on_ac.apply(&|t| product.eval(t, &rho).expect("own coset"), x, h);
                let r1 = tensor_eval_with(&labels, &d_ab, &plain_bc, x, &rho, radius)?;
                let r2 = tensor_eval_with(&labels, &plain_ab, &d_bc, x, &rho, radius)?;
                worst = worst.max((lhs - r1 - r2).norm());
                scale = scale.max(lhs.norm());
                checks += 1;
            }
        }
    }
    let rel = if scale > 0.0 { worst / scale } else { worst };
    Ok(ResidualReport::new(checks, rel, tol))
}

/// `sum_w sum_mu exp(2 pi i y^T (-A (x + w) + mu)) xi(x + w - A^{-1} mu; mu)`.
pub fn twisted_section_eval(xi: &SchwartzElement, x: &[f64], y: &[f64], tol: f64) -> Result<C64> {
    let n = xi.dim();
    for d in [x.len(), y.len()] {
        if d != n {
            return Err(Error::DimensionMismatch { expected: n, found: d });
        }
    }
    let a = xi.modulus();
    // the phase equals exp(-2 pi i (A y)^T t) at the argument t
    let ay: Vec<C64> = (0..n).map(|i| C64::new(-(0..n).map(|j| a.get(i, j) as f64 * y[j]).sum::<f64>(), 0.0)).collect();
    let comps = xi.atoms.len().max(1) as f64;
    let mut acc = KahanSum::default();
    for (mu, list) in xi.components() {
        let modulated: Vec<GaussianAtom> = list.iter().map(|at| at.modulated(&ay)).collect();
        acc.add(t_map(a, mu, &modulated, &real_c(x), tol / comps)?.value);
    }
    Ok(acc.value())
}

/// Numerical rank of the theta functions `T^mu(theta vector)` of a pair,
/// sampled at `count + 5` seeded points of the unit polydisc.
pub fn theta_vector_rank(a_a: &IntSymMatrix, a_b: &IntSymMatrix, seed: u64) -> Result<(usize, usize)> {
    let vectors = theta_vectors(a_a, a_b)?;
    let count = vectors.len();
    let n = a_a.dim();
    let points = polydisc_samples(n, count + 5, seed);
    let mut values = DMatrix::<C64>::zeros(points.len(), count);
    for (c, v) in vectors.iter().enumerate() {
        let (mu, atoms) = v.components().next().expect("theta vector has one component");
        for (r, z) in points.iter().enumerate() {
            values[(r, c)] = t_map(v.modulus(), mu, atoms, z, 1e-14)?.value;
        }
    }
    let sv = values.singular_values();
    let largest = sv.iter().copied().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > 1e-8 * largest).count();
    Ok((count, rank))
}

/// Random atom with `Re M` near the identity, small center and frequency.
pub fn random_atom(n: usize, rng: &mut ChaCha8Rng) -> GaussianAtom {
    let mut m = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(rng.gen_range(0.8..1.5), rng.gen_range(-0.2..0.2));
        for j in 0..i {
            let v = C64::new(rng.gen_range(-0.15..0.15), rng.gen_range(-0.15..0.15));
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    let mut vec_in = |re: f64, im: f64| -> Vec<C64> { (0..n).map(|_| C64::new(rng.gen_range(-re..=re), rng.gen_range(-im..=im))).collect() };
    let s = vec_in(0.3, 0.1);
    let k = vec_in(0.3, 0.05);
    let amp = C64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..2.0 * PI));
    GaussianAtom::new(ComplexSymMatrix::new(m).expect("symmetric by construction"), s, k, amp).expect("diagonally dominant real part")
}

/// Random element with `atoms` atoms on random cosets of `modulus`.
pub fn random_element(modulus: &IntSymMatrix, atoms: usize, rng: &mut ChaCha8Rng) -> Result<SchwartzElement> {
    let mut e = SchwartzElement::zero(modulus)?;
    let reps = e.quotient.representatives();
    for _ in 0..atoms {
        let mu = reps[rng.gen_range(0..reps.len())].clone();
        e.push(&mu, random_atom(modulus.dim(), rng))?;
    }
    Ok(e)
}

/// Periodization of a product against the sum over output cosets:
/// `(T^mu xi)(x) (T^nu eta)(x) = sum_rho T^rho (m(xi, eta)^rho)(x)` for
/// `pairs` random single-atom pairs on random cosets and `points` random real `x`.
/// Errors are relative to `sum_rho |T^rho(...)|` at each point.
pub fn tmap_product_check(
    a_a: &IntSymMatrix,
    a_b: &IntSymMatrix,
    a_c: &IntSymMatrix,
    pairs: usize,
    points: usize,
    seed: u64,
    tol: f64,
) -> Result<ResidualReport> {
    let labels = TensorLabels::new(a_a, a_b, a_c)?;
    let n = labels.a_ab.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = cube_samples(n, points, seed ^ 0x5eed);
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for _ in 0..pairs {
        let xi = random_element(labels.a_ab(), 1, &mut rng)?;
        let eta = random_element(labels.a_bc(), 1, &mut rng)?;
        let (mu, alpha) = xi.components().next().expect("one atom");
        let (nu, beta) = eta.components().next().expect("one atom");
        let product = tensor_m(&xi, &eta, a_a, a_b, a_c, 1e-15)?;
        for x in &xs {
            let z = real_c(x);
            let lhs = t_map(labels.a_ab(), mu, alpha, &z, 1e-15)?.value * t_map(labels.a_bc(), nu, beta, &z, 1e-15)?.value;
            let mut rhs = KahanSum::default();
            let mut scale = 0.0;
            for (rho, atoms) in product.components() {
                let v = t_map(labels.a_ac(), rho, atoms, &z, 1e-15)?.value;
                rhs.add(v);
                scale += v.norm();
            }
            let diff = (lhs - rhs.value()).norm();
            worst = worst.max(if scale > 0.0 { diff / scale } else { diff });
            checks += 1;
        }
    }
    Ok(ResidualReport::new(checks, worst, tol))
}

/// `xi~(x, y) eta~(x, y) = m(xi, eta)~(x, y)` at the given points, relative
/// to the largest sampled `|m(xi, eta)~|`.
#[allow(clippy::too_many_arguments)]
pub fn twisted_product_check(
    xi: &SchwartzElement,
    eta: &SchwartzElement,
    a_a: &IntSymMatrix,
    a_b: &IntSymMatrix,
    a_c: &IntSymMatrix,
    points: &[(Vec<f64>, Vec<f64>)],
    tol: f64,
) -> Result<ResidualReport> {
    let product = tensor_m(xi, eta, a_a, a_b, a_c, 1e-15)?;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (x, y) in points {
        let lhs = twisted_section_eval(xi, x, y, 1e-15)? * twisted_section_eval(eta, x, y, 1e-15)?;
        let rhs = twisted_section_eval(&product, x, y, 1e-15)?;
        worst = worst.max((lhs - rhs).norm());
        scale = scale.max(rhs.norm());
    }
    let rel = if scale > 0.0 { worst / scale } else { worst };
    Ok(ResidualReport::new(points.len(), rel, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::reduce_mod;
    use crate::theta::e_comm;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn unit_atom() -> GaussianAtom {
        GaussianAtom::centered(&IntSymMatrix::diag(&[1])).unwrap()
    }

    #[test]
    fn eval_examples() {
        let a = IntSymMatrix::diag(&[1]);
        let mu = reduce_mod(&a, &[0]).unwrap();
        let xi = SchwartzElement::single(&a, &mu, vec![unit_atom()]).unwrap();
        assert_eq!(xi.eval(&[0.0], &mu).unwrap(), c(1.0, 0.0));
        assert!((xi.eval(&[1.0], &mu).unwrap() - c(0.043_213_918_263_772_25, 0.0)).norm() < 1e-15);
        assert_eq!(SchwartzElement::zero(&a).unwrap().eval(&[0.3], &mu).unwrap(), c(0.0, 0.0));
        let other = reduce_mod(&IntSymMatrix::diag(&[2]), &[0]).unwrap();
        assert_eq!(xi.eval(&[0.0], &other).unwrap_err(), Error::IndexModulusMismatch);
    }

    #[test]
    fn t_map_examples() {
        let a = IntSymMatrix::diag(&[1]);
        let mu = reduce_mod(&a, &[0]).unwrap();
        let direct: f64 = (-10..=10).map(|w: i64| (-PI * (w * w) as f64).exp()).sum();
        let v = t_map(&a, &mu, &[unit_atom()], &[c(0.0, 0.0)], 1e-14).unwrap().value;
        assert!((v.re - direct).abs() < 1e-14 && (v.re - 1.086_434_81).abs() < 1e-8);
        let z = [c(0.3, 0.2)];
        let v1 = t_map(&a, &mu, &[unit_atom()], &z, 1e-14).unwrap().value;
        let v2 = t_map(&a, &mu, &[unit_atom()], &[c(1.3, 0.2)], 1e-14).unwrap().value;
        assert!((v1 - v2).norm() < 1e-13);
    }

    #[test]
    fn theta_vector_reproduces_basis_function() {
        let (a_a, a_b) = (IntSymMatrix::diag(&[1, -4]), IntSymMatrix::diag(&[2, -2]));
        let vs = theta_vectors(&a_a, &a_b).unwrap();
        assert_eq!(vs.len(), 2);
        let z = [c(0.2, -0.1), c(0.4, 0.3)];
        for v in &vs {
            let (mu, atoms) = v.components().next().unwrap();
            let t = t_map(v.modulus(), mu, atoms, &z, 1e-14).unwrap().value;
            let e = e_comm(&a_a, &a_b, mu, &z, 1e-14).unwrap().value;
            assert!((t - e).norm() < 1e-12);
        }
        let two = IntSymMatrix::diag(&[2]);
        let v = theta_vector(&IntSymMatrix::zero(1), &two, &reduce_mod(&two, &[0]).unwrap()).unwrap();
        assert_eq!(v.component(&reduce_mod(&two, &[1]).unwrap()).len(), 0);
        assert_eq!(theta_vector_rank(&a_a, &IntSymMatrix::diag(&[4, -1]), 3).unwrap(), (9, 9));
        assert!(theta_vector(&a_b, &a_a, &reduce_mod(&IntSymMatrix::diag(&[1, 2]), &[0, 0]).unwrap()).is_err());
    }

    #[test]
    fn generator_actions() {
        let two = IntSymMatrix::diag(&[2]);
        let mu0 = reduce_mod(&two, &[0]).unwrap();
        let mu1 = reduce_mod(&two, &[1]).unwrap();
        let v = theta_vector(&IntSymMatrix::zero(1), &two, &mu0).unwrap();
        let moved = act_u(2, &v).unwrap();
        let atoms = moved.component(&mu1);
        assert_eq!(atoms.len(), 1);
        assert!((atoms[0].center()[0] - c(-0.5, 0.0)).norm() < 1e-15);
        let twice = act_u(1, &act_u(1, &v).unwrap()).unwrap();
        assert_eq!(twice.component(&mu0)[0].frequency()[0], c(2.0, 0.0));
        for x in [-0.7, 0.1, 0.55] {
            for mu in [&mu0, &mu1] {
                let uz = act_u(1, &act_z(2, &v).unwrap()).unwrap().eval(&[x], mu).unwrap();
                let zu = act_z(2, &act_u(1, &v).unwrap()).unwrap().eval(&[x], mu).unwrap();
                assert!((uz - zu).norm() < 1e-12);
            }
        }
        assert!(act_u(3, &v).is_err());
    }

    #[test]
    fn connection_examples() {
        let a = IntSymMatrix::diag(&[1]);
        let mu = reduce_mod(&a, &[0]).unwrap();
        let xi = SchwartzElement::single(&a, &mu, vec![unit_atom()]).unwrap();
        let d1 = connection_apply(&ConnectionSpec::new(a.clone(), 1).unwrap(), &xi, &[0.0], &mu, 1e-5).unwrap();
        let d2 = connection_apply(&ConnectionSpec::new(a.clone(), 2).unwrap(), &xi, &[0.0], &mu, 1e-5).unwrap();
        assert!(d1.norm() < 1e-10 && d2.norm() == 0.0);
        let r = dbar_kernel_check(&IntSymMatrix::zero(1), &a, &mu, 20, 1e-5, 1e-6, 1).unwrap();
        assert!(r.pass, "{r:?}");
        let d = IntSymMatrix::diag(&[1, 2]);
        let r = dbar_kernel_check(&IntSymMatrix::zero(2), &d, &reduce_mod(&d, &[0, 1]).unwrap(), 20, 1e-5, 1e-6, 2).unwrap();
        assert!(r.pass, "{r:?}");
        let m = ComplexSymMatrix::from_real(&DMatrix::from_element(1, 1, 1.1)).unwrap();
        let bent = GaussianAtom::new(m, vec![c(0.0, 0.0)], vec![c(0.0, 0.0)], c(1.0, 0.0)).unwrap();
        let perturbed = SchwartzElement::single(&a, &mu, vec![bent]).unwrap();
        assert!(dbar_residual(&perturbed, &mu, 20, 1e-5, 1).unwrap().1 > 1e-3);
    }

    #[test]
    fn atom_closed_forms() {
        let m = ComplexSymMatrix::new(DMatrix::from_row_slice(2, 2, &[c(1.5, 0.2), c(0.3, -0.1), c(0.3, -0.1), c(2.0, 0.4)])).unwrap();
        let atom = GaussianAtom::new(m, vec![c(0.2, 0.1), c(-0.3, 0.05)], vec![c(0.4, 0.2), c(-1.0, -0.1)], c(0.7, 0.2)).unwrap();
        // supremum over a fine grid never exceeds the closed form and gets close
        let mut best: f64 = 0.0;
        for i in -200..=200 {
            for j in -200..=200 {
                best = best.max(atom.eval_real(&[i as f64 / 100.0, j as f64 / 100.0]).norm());
            }
        }
        assert!(best <= atom.sup_abs() * (1.0 + 1e-12) && best > 0.99 * atom.sup_abs());
        let other = atom.translated(&[c(0.5, 0.0), c(-0.2, 0.0)]).modulated(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let prod = atom.product(&other).unwrap();
        let x = [c(0.13, 0.0), c(-0.41, 0.0)];
        assert!((prod.eval(&x) - atom.eval(&x) * other.eval(&x)).norm() < 1e-14);
        let direct: C64 = (-12..=12).flat_map(|i| (-12..=12).map(move |j| (i, j))).map(|(i, j)| atom.eval_real(&[i as f64, j as f64])).sum();
        assert!((atom.lattice_sum(1e-14).unwrap().value - direct).norm() < 1e-13);
    }

    #[test]
    fn tensor_of_theta_vectors() {
        let (a, b, cc) = (IntSymMatrix::zero(1), IntSymMatrix::diag(&[1]), IntSymMatrix::diag(&[3]));
        let xi = theta_vector(&a, &b, &reduce_mod(&b, &[0]).unwrap()).unwrap();
        let two = IntSymMatrix::diag(&[2]);
        let eta = theta_vector(&b, &cc, &reduce_mod(&two, &[0]).unwrap()).unwrap();
        let m = tensor_m(&xi, &eta, &a, &b, &cc, 1e-15).unwrap();
        let rho0 = reduce_mod(&IntSymMatrix::diag(&[3]), &[0]).unwrap();
        let v = m.eval(&[0.0], &rho0).unwrap();
        let even: f64 = (-8..=8).filter(|u: &i64| u % 2 == 0).map(|u| (-1.5 * PI * (u * u) as f64).exp()).sum();
        assert!((v - c(even, 0.0)).norm() < 1e-14);
        let zero = tensor_m(&SchwartzElement::zero(&b).unwrap(), &eta, &a, &b, &cc, 1e-15).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn twisted_section_properties() {
        let b = IntSymMatrix::diag(&[1, 2]);
        let mut xi = SchwartzElement::zero(&b).unwrap();
        xi.push_at(&[0, 1], GaussianAtom::centered(&b).unwrap().translated(&[c(0.1, 0.0), c(-0.2, 0.0)])).unwrap();
        xi.push_at(&[0, 0], GaussianAtom::centered(&b).unwrap().scaled(c(0.5, 0.5))).unwrap();
        let x = [0.3, -0.6];
        let y0 = twisted_section_eval(&xi, &x, &[0.0, 0.0], 1e-14).unwrap();
        let direct: C64 = xi
            .components()
            .map(|(mu, atoms)| t_map(&b, mu, atoms, &real_c(&x), 1e-14).unwrap().value)
            .sum();
        assert!((y0 - direct).norm() < 1e-13);
        let y = [0.25, 0.7];
        let base = twisted_section_eval(&xi, &x, &y, 1e-14).unwrap();
        let shifted_x = twisted_section_eval(&xi, &[x[0] + 1.0, x[1] - 2.0], &y, 1e-14).unwrap();
        assert!((base - shifted_x).norm() < 1e-12);
        let lam = [1i64, -1];
        let shifted_y = twisted_section_eval(&xi, &x, &[y[0] + 1.0, y[1] - 1.0], 1e-14).unwrap();
        let xal: f64 = (0..2).map(|i| x[i] * (0..2).map(|j| b.get(i, j) as f64 * lam[j] as f64).sum::<f64>()).sum();
        assert!((shifted_y - base * C64::from_polar(1.0, -2.0 * PI * xal)).norm() < 1e-12);
    }
    #[test]
    fn tmap_product_random_pairs() {
        let (a, b, cc) = (IntSymMatrix::zero(1), IntSymMatrix::diag(&[1]), IntSymMatrix::diag(&[3]));
        let r = tmap_product_check(&a, &b, &cc, 10, 20, 11, 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
        let (a, b, cc) = (IntSymMatrix::diag(&[1, -4]), IntSymMatrix::diag(&[2, -2]), IntSymMatrix::diag(&[4, -1]));
        let r = tmap_product_check(&a, &b, &cc, 4, 5, 12, 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn curvature_and_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = IntSymMatrix::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let xi = random_element(&a, 2, &mut rng).unwrap();
        let r = curvature_check(&xi, &cube_samples(2, 3, 9), COMMUTATOR_STEP, 1e-5).unwrap();
        assert!(r.pass, "{r:?}");
        let (aa, ab, ac) = (IntSymMatrix::zero(1), IntSymMatrix::diag(&[1]), IntSymMatrix::diag(&[3]));
        let xi = random_element(&IntSymMatrix::diag(&[1]), 2, &mut rng).unwrap();
        let eta = random_element(&IntSymMatrix::diag(&[2]), 2, &mut rng).unwrap();
        let r = leibniz_check(&xi, &eta, &aa, &ab, &ac, &cube_samples(1, 5, 3), DEFAULT_STEP, 1e-5).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn twisted_product_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (aa, ab, ac) = (IntSymMatrix::zero(1), IntSymMatrix::diag(&[1]), IntSymMatrix::diag(&[3]));
        let xi = random_element(&IntSymMatrix::diag(&[1]), 2, &mut rng).unwrap();
        let eta = random_element(&IntSymMatrix::diag(&[2]), 2, &mut rng).unwrap();
        let pts: Vec<_> = cube_samples(2, 20, 4).into_iter().map(|p| (vec![p[0]], vec![p[1]])).collect();
        let r = twisted_product_check(&xi, &eta, &aa, &ab, &ac, &pts, 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
