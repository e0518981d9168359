//! Exact integer-matrix primitives (determinants, rational inverses, coset
//! enumeration of `Z^n / A Z^n`) and the small complex/real matrix newtypes
//! shared by the numerical modules.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative symmetry tolerance for computed complex matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Symmetric `n x n` integer matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntSymMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntSymMatrix {
    pub fn new(n: usize, entries: Vec<i64>) -> Result<Self> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::InvalidInput(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix rows must be square".into()));
        }
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    pub fn diag(d: &[i64]) -> Self {
        let n = d.len();
        let mut entries = vec![0; n * n];
        for (i, &v) in d.iter().enumerate() {
            entries[i * n + i] = v;
        }
        Self { n, entries }
    }

    pub fn scalar(n: usize, v: i64) -> Self {
        Self::diag(&vec![v; n])
    }

    pub fn zero(n: usize) -> Self {
        Self::scalar(n, 0)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// Exact determinant (fraction-free Bareiss elimination).
    pub fn det(&self) -> i64 {
        let d = bareiss_det(self.n, &self.entries.iter().map(|&v| v as i128).collect::<Vec<_>>());
        i64::try_from(d).expect("determinant overflows i64")
    }

    /// Determinant of the top-left `k x k` block.
    pub fn leading_minor(&self, k: usize) -> i64 {
        let block: Vec<i128> = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j) as i128)
            .collect();
        i64::try_from(bareiss_det(k, &block)).expect("minor overflows i64")
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Exact inverse `adj(A) / det(A)`.
    pub fn inverse(&self) -> Result<RationalMatrix> {
        let det = self.det() as i128;
        if det == 0 {
            return Err(Error::SingularModulus);
        }
        let n = self.n;
        let mut adj = vec![0i128; n * n];
        if n == 1 {
            adj[0] = 1;
        } else {
            for i in 0..n {
                for j in 0..n {
                    let minor: Vec<i128> = (0..n)
                        .filter(|&r| r != i)
                        .flat_map(|r| (0..n).filter(move |&c| c != j).map(move |c| (r, c)))
                        .map(|(r, c)| self.get(r, c) as i128)
                        .collect();
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    // adjugate is the transposed cofactor matrix
                    adj[j * n + i] = sign * bareiss_det(n - 1, &minor);
                }
            }
        }
        Ok(RationalMatrix::new(n, adj, det))
    }

    pub fn to_real(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.entries.iter().map(|&v| v as f64).collect::<Vec<_>>())
    }

    pub fn to_complex(&self) -> DMatrix<C64> {
        self.to_real().map(|v| C64::new(v, 0.0))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|v| -v).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(Self {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect(),
        })
    }
}

impl fmt::Display for IntSymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            write!(f, "[{}]", cells.join(","))?;
        }
        write!(f, "]")
    }
}

/// `A_b - A_a`.
pub fn difference(a: &IntSymMatrix, b: &IntSymMatrix) -> Result<IntSymMatrix> {
    b.checked_sub(a)
}

/// True iff every leading principal minor is positive (Sylvester).
pub fn is_positive_definite(s: &IntSymMatrix) -> bool {
    (1..=s.dim()).all(|k| s.leading_minor(k) > 0)
}

fn bareiss_det(n: usize, a: &[i128]) -> i128 {
    if n == 0 {
        return 1;
    }
    let mut m = a.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k * n + k] == 0 {
            match (k + 1..n).find(|&i| m[i * n + k] != 0) {
                Some(i) => {
                    for j in 0..n {
                        m.swap(i * n + j, k * n + j);
                    }
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
            }
        }
        prev = m[k * n + k];
    }
    sign * m[n * n - 1]
}

/// Exact rational matrix `numer / denom` with a shared positive denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    n: usize,
    numer: Vec<i128>,
    denom: i128,
}

impl RationalMatrix {
    fn new(n: usize, mut numer: Vec<i128>, mut denom: i128) -> Self {
        if denom < 0 {
            denom = -denom;
            numer.iter_mut().for_each(|v| *v = -*v);
        }
        let g = numer.iter().fold(denom, |g, &v| gcd(g, v));
        if g > 1 {
            numer.iter_mut().for_each(|v| *v /= g);
            denom /= g;
        }
        Self { n, numer, denom }
    }

    pub fn denom(&self) -> i128 {
        self.denom
    }

    pub fn numer(&self, i: usize, j: usize) -> i128 {
        self.numer[i * self.n + j]
    }

    /// Numerators of `self * v` over the common denominator.
    pub fn apply_numer(&self, v: &[i64]) -> Vec<i128> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.numer(i, j) * v[j] as i128).sum())
            .collect()
    }

    pub fn apply_f64(&self, v: &[i64]) -> Vec<f64> {
        self.apply_numer(v).into_iter().map(|x| x as f64 / self.denom as f64).collect()
    }

    pub fn to_real(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.numer(i, j) as f64 / self.denom as f64)
    }
}

pub(crate) fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, x, y)` with `a x + b y = g >= 0`.
pub(crate) fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Column Hermite normal form of a full-row-rank `rows x cols` integer matrix.
///
/// Returns `(H, V)` with `A V = [H | 0]`, `H` lower triangular with positive
/// diagonal and `0 <= H[i][k] < H[i][i]` for `k < i`, `V` unimodular.
/// Both are row-major.
pub(crate) fn column_hermite(rows: usize, cols: usize, a: &[i128]) -> Option<(Vec<i128>, Vec<i128>)> {
    let mut m = a.to_vec();
    let mut v: Vec<i128> = (0..cols * cols).map(|k| i128::from(k / cols == k % cols)).collect();
    // c_i <- x c_i + y c_j ; c_j <- -q c_i + p c_j
    let combine = |mat: &mut Vec<i128>, nrows: usize, i: usize, j: usize, x: i128, y: i128, p: i128, q: i128| {
        for r in 0..nrows {
            let ci = mat[r * cols + i];
            let cj = mat[r * cols + j];
            mat[r * cols + i] = x * ci + y * cj;
            mat[r * cols + j] = -q * ci + p * cj;
        }
    };
    for i in 0..rows {
        for j in i + 1..cols {
            let (a_ii, a_ij) = (m[i * cols + i], m[i * cols + j]);
            if a_ij == 0 {
                continue;
            }
            let (g, x, y) = ext_gcd(a_ii, a_ij);
            let (p, q) = (a_ii / g, a_ij / g);
            combine(&mut m, rows, i, j, x, y, p, q);
            combine(&mut v, cols, i, j, x, y, p, q);
        }
        let pivot = m[i * cols + i];
        if pivot == 0 {
            return None;
        }
        if pivot < 0 {
            for r in 0..rows {
                m[r * cols + i] = -m[r * cols + i];
            }
            for r in 0..cols {
                v[r * cols + i] = -v[r * cols + i];
            }
        }
        let pivot = m[i * cols + i];
        for k in 0..i {
            let f = m[i * cols + k].div_euclid(pivot);
            if f != 0 {
                for r in 0..rows {
                    m[r * cols + k] -= f * m[r * cols + i];
                }
                for r in 0..cols {
                    v[r * cols + k] -= f * v[r * cols + i];
                }
            }
        }
    }
    let h = (0..rows).flat_map(|r| (0..rows).map(move |c| (r, c))).map(|(r, c)| m[r * cols + c]).collect();
    Some((h, v))
}

/// Element of `Z^n / A Z^n`, held as its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetIndex {
    modulus: IntSymMatrix,
    rep: Vec<i64>,
}

impl CosetIndex {
    pub fn modulus(&self) -> &IntSymMatrix {
        &self.modulus
    }

    pub fn rep(&self) -> &[i64] {
        &self.rep
    }

    /// Canonical label, e.g. `"0,1"`.
    pub fn label(&self) -> String {
        self.rep.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for CosetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The finite group `Z^n / A Z^n` for a nonsingular integer matrix `A`.
///
/// Representatives are the points of the box `prod [0, h_ii)` where `h` is
/// the Hermite basis of the lattice `A Z^n`.
#[derive(Clone, Debug)]
pub struct Quotient {
    modulus: IntSymMatrix,
    hermite: Vec<i128>,
}

impl Quotient {
    pub fn new(modulus: &IntSymMatrix) -> Result<Self> {
        let n = modulus.dim();
        let a: Vec<i128> = modulus.entries().iter().map(|&v| v as i128).collect();
        let (hermite, _) = column_hermite(n, n, &a).ok_or(Error::SingularModulus)?;
        Ok(Self { modulus: modulus.clone(), hermite })
    }

    pub fn modulus(&self) -> &IntSymMatrix {
        &self.modulus
    }

    pub fn order(&self) -> usize {
        let n = self.modulus.dim();
        (0..n).map(|i| self.hermite[i * n + i] as usize).product()
    }

    pub fn reduce(&self, v: &[i64]) -> CosetIndex {
        let n = self.modulus.dim();
        assert_eq!(v.len(), n, "vector length does not match modulus dimension");
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for i in 0..n {
            let q = w[i].div_euclid(self.hermite[i * n + i]);
            if q != 0 {
                for r in i..n {
                    w[r] -= q * self.hermite[r * n + i];
                }
            }
        }
        CosetIndex { modulus: self.modulus.clone(), rep: w.into_iter().map(|x| x as i64).collect() }
    }

    /// All canonical representatives in lexicographic order.
    pub fn representatives(&self) -> Vec<CosetIndex> {
        let n = self.modulus.dim();
        let radix: Vec<i64> = (0..n).map(|i| self.hermite[i * n + i] as i64).collect();
        let mut out = Vec::with_capacity(self.order());
        let mut cur = vec![0i64; n];
        loop {
            out.push(CosetIndex { modulus: self.modulus.clone(), rep: cur.clone() });
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < radix[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    pub fn check(&self, idx: &CosetIndex) -> Result<()> {
        if idx.modulus != self.modulus || self.reduce(&idx.rep).rep != idx.rep {
            return Err(Error::IndexModulusMismatch);
        }
        Ok(())
    }
}

pub fn coset_representatives(a: &IntSymMatrix) -> Result<Vec<CosetIndex>> {
    Ok(Quotient::new(a)?.representatives())
}

pub fn reduce_mod(a: &IntSymMatrix, v: &[i64]) -> Result<CosetIndex> {
    Ok(Quotient::new(a)?.reduce(v))
}

/// Kronecker delta modulo `A Z^n`: 1 iff `rho - mu` lies in `A Z^n`.
///
/// Solved exactly through the adjugate, independently of the Hermite reduction.
pub fn delta_mod(a: &IntSymMatrix, mu: &[i64], rho: &[i64]) -> Result<u8> {
    let inv = a.inverse()?;
    let diff: Vec<i64> = rho.iter().zip(mu).map(|(r, m)| r - m).collect();
    let d = inv.denom();
    Ok(u8::from(inv.apply_numer(&diff).iter().all(|x| x % d == 0)))
}

/// Complex symmetric matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSymMatrix(DMatrix<C64>);

impl ComplexSymMatrix {
    /// Constructed values must be exactly symmetric.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput("matrix must be square".into()));
        }
        if m != m.transpose() {
            return Err(Error::InvalidInput("matrix is not symmetric".into()));
        }
        Ok(Self(m))
    }

    /// Computed values are accepted within [`SYMMETRY_TOL`] (relative) and symmetrized.
    pub fn from_computed(m: DMatrix<C64>) -> Result<Self> {
        let asym = asymmetry(&m);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotCompatible { asymmetry: asym });
        }
        let t = m.transpose();
        Ok(Self((m + t) * C64::new(0.5, 0.0)))
    }

    pub fn from_real(m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|v| C64::new(v, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn re(&self) -> DMatrix<f64> {
        self.0.map(|z| z.re)
    }

    pub fn im(&self) -> DMatrix<f64> {
        self.0.map(|z| z.im)
    }
}

/// `max |M - M^T| / max |M|`, zero for the zero matrix.
pub fn asymmetry(m: &DMatrix<C64>) -> f64 {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let t = m.transpose();
    m.iter().zip(t.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale
}

/// Real skew-symmetric noncommutativity parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix(DMatrix<f64>);

impl SkewMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput("theta must be square".into()));
        }
        let n = m.nrows();
        for i in 0..n {
            for j in 0..=i {
                if m[(i, j)] != -m[(j, i)] {
                    return Err(Error::InvalidInput("theta must be skew-symmetric".into()));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn zero(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    /// `n = 2` parameter with `theta[0][1] = t`.
    pub fn from_theta12(t: f64) -> Self {
        Self(DMatrix::from_row_slice(2, 2, &[0.0, t, -t, 0.0]))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self(&self.0 * t)
    }

    pub fn neg(&self) -> Self {
        self.scaled(-1.0)
    }

    /// `a^T theta b`.
    pub fn pairing(&self, a: &[f64], b: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += a[i] * self.0[(i, j)] * b[j];
            }
        }
        s
    }

    pub fn to_complex(&self) -> DMatrix<C64> {
        self.0.map(|v| C64::new(v, 0.0))
    }
}

/// Smallest eigenvalue of a real symmetric matrix (input is symmetrized).
pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let s = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(s).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Spectral norm of a real symmetric matrix.
pub fn sym_norm(m: &DMatrix<f64>) -> f64 {
    let s = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(s).eigenvalues.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

pub(crate) fn complex_inverse(m: &DMatrix<C64>) -> Option<DMatrix<C64>> {
    m.clone().try_inverse()
}

pub(crate) fn identity_c(n: usize) -> DMatrix<C64> {
    DMatrix::identity(n, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_definite_examples() {
        assert!(is_positive_definite(&IntSymMatrix::diag(&[1, 2])));
        assert!(!is_positive_definite(&IntSymMatrix::diag(&[1, -4])));
        let a1 = IntSymMatrix::diag(&[1, -4]);
        let a3 = IntSymMatrix::diag(&[4, -1]);
        assert!(is_positive_definite(&difference(&a1, &a3).unwrap()));
        assert_eq!(difference(&a1, &a3).unwrap(), IntSymMatrix::diag(&[3, 3]));
    }

    #[test]
    fn coset_examples() {
        let reps = coset_representatives(&IntSymMatrix::diag(&[2])).unwrap();
        assert_eq!(reps.iter().map(|c| c.rep().to_vec()).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
        assert_eq!(coset_representatives(&IntSymMatrix::diag(&[1, 2])).unwrap().len(), 2);
        assert_eq!(coset_representatives(&IntSymMatrix::diag(&[3, 3])).unwrap().len(), 9);
        assert_eq!(
            coset_representatives(&IntSymMatrix::diag(&[0, 1])).unwrap_err(),
            Error::SingularModulus
        );
    }

    #[test]
    fn delta_examples() {
        let two = IntSymMatrix::diag(&[2]);
        assert_eq!(delta_mod(&two, &[1], &[3]).unwrap(), 1);
        assert_eq!(delta_mod(&two, &[0], &[3]).unwrap(), 0);
        assert_eq!(delta_mod(&IntSymMatrix::diag(&[1, 2]), &[0, 0], &[5, 4]).unwrap(), 1);
        assert_eq!(delta_mod(&IntSymMatrix::zero(2), &[0, 0], &[0, 0]).unwrap_err(), Error::SingularModulus);
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_mod(&IntSymMatrix::diag(&[3]), &[7]).unwrap().rep(), &[1]);
        assert_eq!(reduce_mod(&IntSymMatrix::diag(&[1, 2]), &[9, -1]).unwrap().rep(), &[0, 1]);
        assert_eq!(reduce_mod(&IntSymMatrix::diag(&[1]), &[-13]).unwrap().rep(), &[0]);
    }

    #[test]
    fn determinant_and_inverse() {
        let a = IntSymMatrix::from_rows(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]).unwrap();
        assert_eq!(a.det(), 18);
        let inv = a.inverse().unwrap();
        let prod = a.to_real() * inv.to_real();
        assert!((prod - DMatrix::<f64>::identity(3, 3)).abs().max() < 1e-14);
        let b = IntSymMatrix::from_rows(&[vec![0, 2], vec![2, 1]]).unwrap();
        assert_eq!(b.det(), -4);
    }

    #[test]
    fn rejects_asymmetric() {
        assert!(IntSymMatrix::from_rows(&[vec![1, 2], vec![3, 4]]).is_err());
        assert!(SkewMatrix::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])).is_err());
    }

    #[test]
    fn hermite_of_wide_matrix() {
        // [2 | -3] has gcd 1
        let (h, v) = column_hermite(1, 2, &[2, -3]).unwrap();
        assert_eq!(h, vec![1]);
        assert_eq!(2 * v[0] - 3 * v[2], 1);
        assert_eq!(2 * v[1] - 3 * v[3], 0);
    }

    #[test]
    fn computed_symmetry_tolerance() {
        let mut m = DMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        m[(0, 1)] += C64::new(1e-14, 0.0);
        assert!(ComplexSymMatrix::from_computed(m.clone()).is_ok());
        m[(0, 1)] += C64::new(1e-6, 0.0);
        assert!(matches!(ComplexSymMatrix::from_computed(m), Err(Error::NotCompatible { .. })));
    }
}
