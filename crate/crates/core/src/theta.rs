//! Theta functions with characteristics, the commutative basis functions
//! `e_ab^mu`, the deformed quadratic form `M_ab` and the noncommutative basis
//! functions. All values come from truncated lattice sums with a certified
//! tail (see [`crate::lattice`]).
//!
//! The noncommutative basis functions are evaluated in their periodized
//! Gaussian form `C_ab * sum_w exp(-pi y^T M_ab y)`, `y = z + w - A_ab^{-1} mu`.
//! In the equivalent theta-series form the characteristic is `-A_ab^{-1} mu`,
//! the same as in the commutative case; this is the only choice that reduces
//! to the commutative functions at `theta = 0`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, RwLock};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::{bilinear, certified_sum, LatticeValue, TailBound, DEFAULT_RADIUS_CAP};
use crate::linalg::{
    complex_inverse, difference, identity_c, is_positive_definite, min_eigenvalue, ComplexSymMatrix, CosetIndex,
    IntSymMatrix, Quotient, SkewMatrix, C64,
};

/// Number of steps of the straight path `t * theta` used to pick the branch of
/// the fractional determinant powers.
const BRANCH_STEPS: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaCharacteristics {
    c1: Vec<f64>,
    c2: Vec<f64>,
}

impl ThetaCharacteristics {
    /// Components are reduced into `[0, 1)`.
    pub fn new(c1: &[f64], c2: &[f64]) -> Result<Self> {
        if c1.len() != c2.len() {
            return Err(Error::DimensionMismatch { expected: c1.len(), found: c2.len() });
        }
        let red = |v: &[f64]| v.iter().map(|x| x - x.floor()).collect::<Vec<_>>();
        Ok(Self { c1: red(c1), c2: red(c2) })
    }

    pub fn zero(n: usize) -> Self {
        Self { c1: vec![0.0; n], c2: vec![0.0; n] }
    }

    pub fn c1(&self) -> &[f64] {
        &self.c1
    }

    pub fn c2(&self) -> &[f64] {
        &self.c2
    }
}

/// Point of the Siegel upper half space.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelPoint {
    omega: ComplexSymMatrix,
}

impl SiegelPoint {
    pub fn new(omega: ComplexSymMatrix) -> Result<Self> {
        if min_eigenvalue(&omega.im()) <= 0.0 {
            return Err(Error::NotSiegel);
        }
        Ok(Self { omega })
    }

    pub fn omega(&self) -> &ComplexSymMatrix {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `sum_m exp(pi i (m+c1)^T Omega (m+c1) + 2 pi i (m+c1)^T (z+c2))`.
pub fn theta_with_char(ch: &ThetaCharacteristics, omega: &SiegelPoint, z: &[C64], tol: f64) -> Result<LatticeValue> {
    let n = omega.dim();
    check_len(n, ch.c1.len())?;
    check_len(n, z.len())?;
    let om = omega.omega().matrix();
    let im_z = z.iter().map(|v| v.im * v.im).sum::<f64>().sqrt();
    let bound = TailBound::new(
        ch.c1.iter().map(|c| -c).collect(),
        min_eigenvalue(&omega.omega().im()),
        im_z,
        0.0,
    )?;
    let i_pi = C64::new(0.0, PI);
    certified_sum(&bound, tol, DEFAULT_RADIUS_CAP, |m| {
        let y: Vec<C64> = m.iter().zip(&ch.c1).map(|(&mi, c)| C64::new(mi as f64 + c, 0.0)).collect();
        let lin: C64 = y.iter().zip(z.iter().zip(&ch.c2)).map(|(yi, (zi, c))| yi * (zi + c)).sum();
        (i_pi * bilinear(om, &y, &y) + 2.0 * i_pi * lin).exp()
    })
}

/// `sum_w exp(-pi y^T Q y)` with `y = z + w - shift`.
pub(crate) fn periodized_gaussian(q: &DMatrix<C64>, shift: &[f64], z: &[C64], tol: f64) -> Result<LatticeValue> {
    let center: Vec<C64> = shift.iter().zip(z).map(|(s, zi)| C64::new(*s, 0.0) - zi).collect();
    let bound = TailBound::gaussian(q, &center, 0.0)?;
    certified_sum(&bound, tol, DEFAULT_RADIUS_CAP, |w| {
        let y: Vec<C64> = w.iter().zip(&center).map(|(&wi, c)| C64::new(wi as f64, 0.0) - c).collect();
        (-PI * bilinear(q, &y, &y)).exp()
    })
}

/// Positive-definite difference `A_b - A_a` with `mu` checked against it.
fn checked_difference(a_a: &IntSymMatrix, a_b: &IntSymMatrix, mu: &CosetIndex) -> Result<(IntSymMatrix, Vec<f64>)> {
    let a_ab = difference(a_a, a_b)?;
    if !is_positive_definite(&a_ab) {
        return Err(Error::NotPositiveDefinite);
    }
    Quotient::new(&a_ab)?.check(mu)?;
    let shift = a_ab.inverse()?.apply_f64(mu.rep());
    Ok((a_ab, shift))
}

/// Commutative basis function `e_ab^mu(z) = sum_w exp(-pi y^T A_ab y)`,
/// `y = z + w - A_ab^{-1} mu`.
pub fn e_comm(a_a: &IntSymMatrix, a_b: &IntSymMatrix, mu: &CosetIndex, z: &[C64], tol: f64) -> Result<LatticeValue> {
    check_len(a_a.dim(), z.len())?;
    let (a_ab, shift) = checked_difference(a_a, a_b, mu)?;
    periodized_gaussian(&a_ab.to_complex(), &shift, z, tol)
}

/// The same function through its theta-series form
/// `det(A_ab)^{-1/2} theta[0, -A_ab^{-1} mu](i A_ab^{-1}, z)`.
pub fn e_comm_via_theta(
    a_a: &IntSymMatrix,
    a_b: &IntSymMatrix,
    mu: &CosetIndex,
    z: &[C64],
    tol: f64,
) -> Result<LatticeValue> {
    check_len(a_a.dim(), z.len())?;
    let (a_ab, shift) = checked_difference(a_a, a_b, mu)?;
    let n = a_ab.dim();
    let inv = a_ab.inverse()?.to_real();
    let omega = SiegelPoint::new(ComplexSymMatrix::from_computed(inv.map(|v| C64::new(0.0, v)))?)?;
    let c2: Vec<f64> = shift.iter().map(|s| -s).collect();
    let ch = ThetaCharacteristics::new(&vec![0.0; n], &c2)?;
    let norm = (a_ab.det() as f64).sqrt();
    let mut v = theta_with_char(&ch, &omega, z, tol * norm)?;
    v.value /= norm;
    Ok(v)
}

fn one_plus_i_times(scale: f64, a: &DMatrix<f64>, theta: &SkewMatrix) -> DMatrix<C64> {
    let prod = a * theta.matrix();
    identity_c(a.nrows()) + prod.map(|v| C64::new(0.0, scale * v))
}

/// `M_ab = (1 + (i/2)(A_a + A_b) theta)^{-1} A_ab`.
pub fn compute_m(a_a: &IntSymMatrix, a_b: &IntSymMatrix, theta: &SkewMatrix) -> Result<ComplexSymMatrix> {
    check_len(a_a.dim(), a_b.dim())?;
    check_len(a_a.dim(), theta.dim())?;
    let a_ab = difference(a_a, a_b)?;
    let plus = a_a.checked_add(a_b)?.to_real();
    let f = one_plus_i_times(0.5, &plus, theta);
    if f.determinant().norm() < 1e-14 {
        return Err(Error::SingularDeformation);
    }
    let f_inv = complex_inverse(&f).ok_or(Error::SingularDeformation)?;
    let m = ComplexSymMatrix::from_computed(f_inv * a_ab.to_complex())?;
    if is_positive_definite(&a_ab) && min_eigenvalue(&m.re()) <= 0.0 {
        return Err(Error::NotPositiveReal);
    }
    Ok(m)
}

/// Continuous branches of `det(1 + i t A theta)^p` along `t in [0, 1]`.
struct ContinuedDet {
    modulus: f64,
    arg: f64,
}

fn continued_det(a: &DMatrix<f64>, theta: &SkewMatrix, scale: f64) -> Result<ContinuedDet> {
    let mut prev = C64::new(1.0, 0.0);
    let mut arg = 0.0;
    for k in 1..=BRANCH_STEPS {
        let t = k as f64 / BRANCH_STEPS as f64;
        let d = one_plus_i_times(scale * t, a, theta).determinant();
        if d.norm() < 1e-300 {
            return Err(Error::SingularDeformation);
        }
        arg += (d / prev).arg();
        prev = d;
    }
    Ok(ContinuedDet { modulus: prev.norm(), arg })
}

impl ContinuedDet {
    fn pow(&self, p: f64) -> C64 {
        C64::from_polar(self.modulus.powf(p), self.arg * p)
    }
}

/// Deformation data attached to an ordered pair of labels.
#[derive(Clone, Debug)]
pub struct NcPair {
    a_ab: IntSymMatrix,
    quotient: Quotient,
    m: ComplexSymMatrix,
    normalization: C64,
    fourier_normalization: C64,
}

impl NcPair {
    pub fn new(a_a: &IntSymMatrix, a_b: &IntSymMatrix, theta: &SkewMatrix) -> Result<Self> {
        let a_ab = difference(a_a, a_b)?;
        if !is_positive_definite(&a_ab) {
            return Err(Error::NotPositiveDefinite);
        }
        let m = compute_m(a_a, a_b, theta)?;
        let da = continued_det(&a_a.to_real(), theta, 1.0)?;
        let db = continued_det(&a_b.to_real(), theta, 1.0)?;
        let dplus = continued_det(&a_a.checked_add(a_b)?.to_real(), theta, 0.5)?;
        let normalization = da.pow(0.25) * db.pow(0.25) * dplus.pow(-0.5);
        let fourier_normalization = da.pow(0.25) * db.pow(0.25) / (a_ab.det() as f64).sqrt();
        Ok(Self { quotient: Quotient::new(&a_ab)?, a_ab, m, normalization, fourier_normalization })
    }

    pub fn a_ab(&self) -> &IntSymMatrix {
        &self.a_ab
    }

    pub fn m(&self) -> &ComplexSymMatrix {
        &self.m
    }

    /// `C_ab`, the amplitude of the Gaussian theta vector.
    pub fn normalization(&self) -> C64 {
        self.normalization
    }

    /// `C_ab / sqrt(det M_ab)`, the prefactor of the theta-series form.
    pub fn fourier_normalization(&self) -> C64 {
        self.fourier_normalization
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn eval(&self, mu: &CosetIndex, z: &[C64], tol: f64) -> Result<LatticeValue> {
        check_len(self.a_ab.dim(), z.len())?;
        self.quotient.check(mu)?;
        let shift = self.a_ab.inverse()?.apply_f64(mu.rep());
        let scale = self.normalization.norm().max(f64::MIN_POSITIVE);
        let mut v = periodized_gaussian(self.m.matrix(), &shift, z, tol / scale)?;
        v.value *= self.normalization;
        Ok(v)
    }
}

/// Noncommutative basis function `C_ab * T^mu(exp(-pi x^T M_ab x))(z)`.
pub fn e_nc(
    a_a: &IntSymMatrix,
    a_b: &IntSymMatrix,
    mu: &CosetIndex,
    z: &[C64],
    theta: &SkewMatrix,
    tol: f64,
) -> Result<LatticeValue> {
    NcPair::new(a_a, a_b, theta)?.eval(mu, z, tol)
}

/// A fixed noncommutativity parameter with a per-pair cache of [`NcPair`] data.
#[derive(Debug)]
pub struct NcDeformation {
    theta: SkewMatrix,
    cache: RwLock<HashMap<(IntSymMatrix, IntSymMatrix), Arc<NcPair>>>,
}

impl NcDeformation {
    pub fn new(theta: SkewMatrix) -> Self {
        Self { theta, cache: RwLock::new(HashMap::new()) }
    }

    pub fn theta(&self) -> &SkewMatrix {
        &self.theta
    }

    pub fn pair(&self, a_a: &IntSymMatrix, a_b: &IntSymMatrix) -> Result<Arc<NcPair>> {
        let key = (a_a.clone(), a_b.clone());
        if let Some(p) = self.cache.read().expect("cache poisoned").get(&key) {
            return Ok(p.clone());
        }
        let p = Arc::new(NcPair::new(a_a, a_b, &self.theta)?);
        self.cache.write().expect("cache poisoned").entry(key).or_insert_with(|| p.clone());
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::reduce_mod;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Plain partial sum of exp(-pi m^2) for |m| <= 10.
    fn oracle_theta3_at_i() -> f64 {
        (-10i64..=10).map(|m| (-PI * (m * m) as f64).exp()).sum()
    }

    fn omega_i(n: usize) -> SiegelPoint {
        let m = DMatrix::from_fn(n, n, |i, j| if i == j { c(0.0, 1.0) } else { c(0.0, 0.0) });
        SiegelPoint::new(ComplexSymMatrix::new(m).unwrap()).unwrap()
    }

    #[test]
    fn theta_at_i() {
        let oracle = oracle_theta3_at_i();
        assert!((oracle - 1.086_434_811_213_308).abs() < 1e-14);
        let ch = ThetaCharacteristics::zero(1);
        let v0 = theta_with_char(&ch, &omega_i(1), &[c(0.0, 0.0)], 1e-12).unwrap();
        let v1 = theta_with_char(&ch, &omega_i(1), &[c(1.0, 0.0)], 1e-12).unwrap();
        assert!((v0.value - oracle).norm() < 1e-12);
        assert!((v1.value - v0.value).norm() < 1e-12);
        let v2 = theta_with_char(&ThetaCharacteristics::zero(2), &omega_i(2), &[c(0.0, 0.0); 2], 1e-12).unwrap();
        assert!((v2.value - oracle * oracle).norm() < 1e-12);
    }

    #[test]
    fn not_siegel() {
        let m = DMatrix::from_element(1, 1, c(1.0, -1.0));
        assert_eq!(SiegelPoint::new(ComplexSymMatrix::new(m).unwrap()).unwrap_err(), Error::NotSiegel);
    }

    #[test]
    fn e_comm_examples() {
        let (a, b) = (IntSymMatrix::zero(1), IntSymMatrix::diag(&[1]));
        let mu = reduce_mod(&b, &[0]).unwrap();
        let v0 = e_comm(&a, &b, &mu, &[c(0.0, 0.0)], 1e-12).unwrap().value;
        let v1 = e_comm(&a, &b, &mu, &[c(1.0, 0.0)], 1e-12).unwrap().value;
        assert!((v0 - oracle_theta3_at_i()).norm() < 1e-12);
        assert!((v1 - v0).norm() < 1e-12);
    }

    #[test]
    fn e_comm_factorizes_for_diagonal_difference() {
        let a1 = IntSymMatrix::diag(&[1, -4]);
        let a2 = IntSymMatrix::diag(&[2, -2]);
        let mu = reduce_mod(&IntSymMatrix::diag(&[1, 2]), &[0, 0]).unwrap();
        let v = e_comm(&a1, &a2, &mu, &[c(0.0, 0.0); 2], 1e-13).unwrap().value;
        // direct one-dimensional sums with eigenvalues 1 and 2
        let f = |lam: f64| (-20i64..=20).map(|w| (-PI * lam * (w * w) as f64).exp()).sum::<f64>();
        assert!((v - f(1.0) * f(2.0)).norm() < 1e-12);
    }

    #[test]
    fn e_comm_rejects_bad_inputs() {
        let (a, b) = (IntSymMatrix::diag(&[1]), IntSymMatrix::zero(1));
        let mu = reduce_mod(&IntSymMatrix::diag(&[1]), &[0]).unwrap();
        assert_eq!(e_comm(&a, &b, &mu, &[c(0.0, 0.0)], 1e-12).unwrap_err(), Error::NotPositiveDefinite);
        let wrong = reduce_mod(&IntSymMatrix::diag(&[2]), &[1]).unwrap();
        assert_eq!(
            e_comm(&IntSymMatrix::zero(1), &IntSymMatrix::diag(&[1]), &wrong, &[c(0.0, 0.0)], 1e-12).unwrap_err(),
            Error::IndexModulusMismatch
        );
    }

    #[test]
    fn m_at_zero_theta_is_difference() {
        let a1 = IntSymMatrix::diag(&[1, -4]);
        let a2 = IntSymMatrix::diag(&[2, -2]);
        let m = compute_m(&a1, &a2, &SkewMatrix::zero(2)).unwrap();
        assert_eq!(m.matrix(), &IntSymMatrix::diag(&[1, 2]).to_complex());
    }

    #[test]
    fn m_for_diagonal_pair() {
        let a1 = IntSymMatrix::diag(&[1, -4]);
        let a2 = IntSymMatrix::diag(&[2, -2]);
        let m = compute_m(&a1, &a2, &SkewMatrix::from_theta12(0.3)).unwrap();
        // hand arithmetic: (1/1.405) [[1, -0.9i], [-0.9i, 2]]
        let expect = [c(1.0, 0.0), c(0.0, -0.9), c(0.0, -0.9), c(2.0, 0.0)];
        for (k, e) in expect.iter().enumerate() {
            assert!((m.matrix()[(k / 2, k % 2)] - e / 1.405).norm() < 1e-14);
        }
    }

    #[test]
    fn m_rejects_unequal_determinants() {
        let a1 = IntSymMatrix::diag(&[1, -4]);
        let b = IntSymMatrix::diag(&[1, -3]);
        assert!(matches!(
            compute_m(&a1, &b, &SkewMatrix::from_theta12(0.3)),
            Err(Error::NotCompatible { .. })
        ));
    }

    #[test]
    fn e_nc_reduces_at_zero_theta() {
        let a1 = IntSymMatrix::diag(&[1, -4]);
        let a2 = IntSymMatrix::diag(&[2, -2]);
        let mu = reduce_mod(&IntSymMatrix::diag(&[1, 2]), &[0, 1]).unwrap();
        let z = [c(0.2, -0.1), c(0.3, 0.4)];
        let x = e_nc(&a1, &a2, &mu, &z, &SkewMatrix::zero(2), 1e-12).unwrap().value;
        let y = e_comm(&a1, &a2, &mu, &z, 1e-12).unwrap().value;
        assert!((x - y).norm() < 1e-14);
        let one = e_nc(&IntSymMatrix::zero(1), &IntSymMatrix::diag(&[1]), &reduce_mod(&IntSymMatrix::diag(&[1]), &[0]).unwrap(), &[c(0.0, 0.0)], &SkewMatrix::zero(1), 1e-12).unwrap().value;
        assert!((one - oracle_theta3_at_i()).norm() < 1e-12);
    }

    #[test]
    fn e_nc_matches_direct_double_sum() {
        let a1 = IntSymMatrix::diag(&[1, -4]);
        let a2 = IntSymMatrix::diag(&[2, -2]);
        let theta = SkewMatrix::from_theta12(0.3);
        let mu = reduce_mod(&IntSymMatrix::diag(&[1, 2]), &[0, 0]).unwrap();
        let pair = NcPair::new(&a1, &a2, &theta).unwrap();
        let got = pair.eval(&mu, &[c(0.0, 0.0); 2], 1e-13).unwrap().value;
        // independent double sum at radius 12 with the hand-computed M
        let m = [[c(1.0, 0.0) / 1.405, c(0.0, -0.9) / 1.405], [c(0.0, -0.9) / 1.405, c(2.0, 0.0) / 1.405]];
        let mut s = c(0.0, 0.0);
        for w1 in -12i64..=12 {
            for w2 in -12i64..=12 {
                let (x, y) = (w1 as f64, w2 as f64);
                let q = m[0][0] * x * x + m[0][1] * 2.0 * x * y + m[1][1] * y * y;
                s += (-PI * q).exp();
            }
        }
        // C_ab for diagonal labels: det(1 + i A theta) = 1 + det(A) * theta12^2 ... real positive here
        let c_ab = (1.36f64).powf(0.25) * (1.36f64).powf(0.25) / (1.405f64).sqrt();
        assert!((pair.normalization() - c(c_ab, 0.0)).norm() < 1e-14);
        assert!((got - s * c_ab).norm() < 1e-12);
        assert!(got.re > 0.0);
    }

    #[test]
    fn deformation_cache_returns_same_pair() {
        let d = NcDeformation::new(SkewMatrix::from_theta12(0.3));
        let a1 = IntSymMatrix::diag(&[1, -4]);
        let a2 = IntSymMatrix::diag(&[2, -2]);
        let p = d.pair(&a1, &a2).unwrap();
        let q = d.pair(&a1, &a2).unwrap();
        assert!(Arc::ptr_eq(&p, &q));
    }
}
