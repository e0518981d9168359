//! Moyal star product on lattice Fourier series.
//!
//! On plane waves the exponential bidifferential operator acts by a pure phase,
//! `e_a * e_b = exp(i pi a^T theta b) e_{a+b}`, so the product of two finite
//! Fourier series is computed exactly term by term. [`moyal_oracle`] evaluates
//! the truncated operator series directly and exists only to cross-check.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{for_each_in_box, KahanSum, TailBound, DEFAULT_RADIUS_CAP};
use crate::linalg::{complex_inverse, min_eigenvalue, CosetIndex, IntSymMatrix, SkewMatrix, C64};
use crate::theta::NcPair;

/// Product terms whose supremum on the unit polydisc `|Im z_i| <= 1` is below
/// this fraction of the largest coefficient are dropped.
pub const PRUNE_REL: f64 = 1e-16;

/// Finite sum `sum_m c_m exp(2 pi i (m + offset)^T z)` over integer `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierPolynomial {
    n: usize,
    offset: Vec<f64>,
    terms: BTreeMap<Vec<i64>, C64>,
}

impl FourierPolynomial {
    pub fn new(n: usize) -> Self {
        Self::with_offset(vec![0.0; n])
    }

    pub fn with_offset(offset: Vec<f64>) -> Self {
        Self { n: offset.len(), offset, terms: BTreeMap::new() }
    }

    pub fn plane_wave(freq: &[i64], coef: C64) -> Self {
        let mut p = Self::new(freq.len());
        p.add_term(freq.to_vec(), coef);
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<i64>, C64)>) -> Result<Self> {
        let mut p = Self::new(n);
        for (m, c) in terms {
            if m.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: m.len() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &C64)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[i64]) -> C64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Vec<i64>, c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        let sum = self.coefficient(&m) + c;
        if sum == C64::new(0.0, 0.0) {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    /// Real frequency `m + offset`.
    pub fn frequency(&self, m: &[i64]) -> Vec<f64> {
        m.iter().zip(&self.offset).map(|(&k, o)| k as f64 + o).collect()
    }

    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: z.len() });
        }
        let two_pi_i = C64::new(0.0, 2.0 * PI);
        let acc: KahanSum = self
            .terms
            .iter()
            .map(|(m, c)| {
                let phase: C64 = self.frequency(m).iter().zip(z).map(|(f, zi)| zi * *f).sum();
                c * (two_pi_i * phase).exp()
            })
            .collect();
        Ok(acc.value())
    }

    /// `d/dz_i`, computed termwise.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::with_offset(self.offset.clone());
        for (m, c) in &self.terms {
            let f = self.frequency(m)[i];
            out.add_term(m.clone(), c * C64::new(0.0, 2.0 * PI * f));
        }
        out
    }

    /// Ordinary (commutative) product.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.convolve(other, |_, _| C64::new(1.0, 0.0))
    }

    fn convolve(&self, other: &Self, phase: impl Fn(&[f64], &[f64]) -> C64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let offset: Vec<f64> = self.offset.iter().zip(&other.offset).map(|(a, b)| a + b).collect();
        let mut acc: BTreeMap<Vec<i64>, KahanSum> = BTreeMap::new();
        for (a, alpha) in &self.terms {
            let fa = self.frequency(a);
            for (b, beta) in &other.terms {
                let fb = other.frequency(b);
                let key: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                acc.entry(key).or_default().add(alpha * beta * phase(&fa, &fb));
            }
        }
        let out = Self { n: self.n, offset, terms: acc.into_iter().map(|(k, v)| (k, v.value())).collect() };
        Ok(out.pruned(PRUNE_REL))
    }

    /// Supremum of `|c exp(2 pi i (m + offset)^T z)|` over `|Im z_i| <= 1`.
    fn polydisc_size(&self, m: &[i64], c: &C64) -> f64 {
        let l1: f64 = self.frequency(m).iter().map(|f| f.abs()).sum();
        c.norm() * (2.0 * PI * l1).exp()
    }

    /// Drop terms whose size anywhere on the unit polydisc stays below `rel`
    /// times the largest coefficient.
    pub fn pruned(mut self, rel: f64) -> Self {
        let largest = self.terms.values().map(|c| c.norm()).fold(0.0, f64::max);
        let keep: BTreeMap<Vec<i64>, C64> = self
            .terms
            .iter()
            .filter(|(m, c)| **c != C64::new(0.0, 0.0) && self.polydisc_size(m, c) > rel * largest)
            .map(|(m, c)| (m.clone(), *c))
            .collect();
        self.terms = keep;
        self
    }
}

/// `exp(i pi a^T theta b)`.
pub fn plane_wave_phase(a: &[f64], b: &[f64], theta: &SkewMatrix) -> C64 {
    C64::from_polar(1.0, PI * theta.pairing(a, b))
}

/// Moyal product of two Fourier series.
pub fn star_fourier(f: &FourierPolynomial, g: &FourierPolynomial, theta: &SkewMatrix) -> Result<FourierPolynomial> {
    if theta.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: theta.dim() });
    }
    f.convolve(g, |a, b| plane_wave_phase(a, b, theta))
}

#[derive(Clone, Debug)]
pub struct StarConfig {
    pub theta: SkewMatrix,
    pub oracle_order: usize,
    pub tol: f64,
}

/// Truncated series `sum_{k <= order} (1/k!) (-i/4pi)^k (f (d theta d)^k g)(z)`.
///
/// `f(z1) g(z2)` is held as a two-variable Fourier series; each power of the
/// bidifferential operator differentiates it termwise in `z1_i` and `z2_j`.
pub fn moyal_oracle(f: &FourierPolynomial, g: &FourierPolynomial, z: &[C64], cfg: &StarConfig) -> Result<C64> {
    let n = f.dim();
    if g.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: g.dim() });
    }
    if z.len() != n || cfg.theta.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: z.len().min(cfg.theta.dim()) });
    }
    let theta = cfg.theta.matrix();
    let two_pi_i = C64::new(0.0, 2.0 * PI);
    // (frequency in z1, frequency in z2, coefficient)
    let mut bi: Vec<(Vec<f64>, Vec<f64>, C64)> = Vec::with_capacity(f.len() * g.len());
    for (a, alpha) in f.terms() {
        for (b, beta) in g.terms() {
            bi.push((f.frequency(a), g.frequency(b), alpha * beta));
        }
    }
    let restrict = |bi: &[(Vec<f64>, Vec<f64>, C64)]| -> C64 {
        let acc: KahanSum = bi
            .iter()
            .map(|(a, b, c)| {
                let phase: C64 = a.iter().zip(b).zip(z).map(|((x, y), zi)| zi * (x + y)).sum();
                c * (two_pi_i * phase).exp()
            })
            .collect();
        acc.value()
    };
    let step = C64::new(0.0, -1.0 / (4.0 * PI));
    let mut weight = C64::new(1.0, 0.0);
    let mut total = KahanSum::default();
    for k in 0..=cfg.oracle_order {
        if k > 0 {
            weight *= step / k as f64;
            for (a, b, c) in bi.iter_mut() {
                let mut d = C64::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        if theta[(i, j)] != 0.0 {
                            d += (two_pi_i * a[i]) * theta[(i, j)] * (two_pi_i * b[j]);
                        }
                    }
                }
                *c *= d;
            }
        }
        total.add(weight * restrict(&bi));
    }
    Ok(total.value())
}

/// Fourier expansion of the (noncommutative) basis function `e_ab^mu`:
/// coefficients `K_ab exp(-pi m^T M_ab^{-1} m - 2 pi i m^T A_ab^{-1} mu)`.
///
/// The dropped tail is at most `tol` uniformly for `|Im z_i| <= 1`.
pub fn truncate_theta_series(
    a_a: &IntSymMatrix,
    a_b: &IntSymMatrix,
    mu: &CosetIndex,
    theta: &SkewMatrix,
    tol: f64,
) -> Result<FourierPolynomial> {
    let pair = NcPair::new(a_a, a_b, theta)?;
    theta_series_of_pair(&pair, mu, tol)
}

pub(crate) fn theta_series_of_pair(pair: &NcPair, mu: &CosetIndex, tol: f64) -> Result<FourierPolynomial> {
    pair.quotient().check(mu)?;
    let n = pair.a_ab().dim();
    let m_inv: DMatrix<C64> = complex_inverse(pair.m().matrix()).ok_or(Error::SingularDeformation)?;
    let shift = pair.a_ab().inverse()?.apply_f64(mu.rep());
    let k = pair.fourier_normalization();
    let bound = TailBound::new(vec![0.0; n], min_eigenvalue(&m_inv.map(|v| v.re)), (n as f64).sqrt(), k.norm().ln())?;
    let radius = bound.radius(tol, DEFAULT_RADIUS_CAP)?;
    let mut out = FourierPolynomial::new(n);
    for_each_in_box(&bound.center, radius, |m| {
        let mf: Vec<C64> = m.iter().map(|&x| C64::new(x as f64, 0.0)).collect();
        let quad = crate::lattice::bilinear(&m_inv, &mf, &mf);
        let lin: f64 = m.iter().zip(&shift).map(|(&x, s)| x as f64 * s).sum();
        let c = k * (-PI * quad - C64::new(0.0, 2.0 * PI * lin)).exp();
        out.add_term(m.to_vec(), c);
    });
    Ok(out)
}

/// Star product of the two basis series, as a Fourier series.
#[allow(clippy::too_many_arguments)]
pub fn star_theta_series(
    a_a: &IntSymMatrix,
    a_b: &IntSymMatrix,
    a_c: &IntSymMatrix,
    mu: &CosetIndex,
    nu: &CosetIndex,
    theta: &SkewMatrix,
    tol: f64,
) -> Result<FourierPolynomial> {
    let f = truncate_theta_series(a_a, a_b, mu, theta, tol / 4.0)?;
    let g = truncate_theta_series(a_b, a_c, nu, theta, tol / 4.0)?;
    star_fourier(&f, &g, theta)
}

/// `(e_ab^mu * e_bc^nu)(z)`.
#[allow(clippy::too_many_arguments)]
pub fn star_theta_eval(
    a_a: &IntSymMatrix,
    a_b: &IntSymMatrix,
    a_c: &IntSymMatrix,
    mu: &CosetIndex,
    nu: &CosetIndex,
    z: &[C64],
    theta: &SkewMatrix,
    tol: f64,
) -> Result<C64> {
    star_theta_series(a_a, a_b, a_c, mu, nu, theta, tol)?.eval(z)
}

/// Random series with `terms` distinct frequencies in `[-reach, reach]^n`
/// and coefficients in the unit square.
pub fn random_fourier_polynomial(n: usize, terms: usize, reach: i64, rng: &mut ChaCha8Rng) -> FourierPolynomial {
    let mut out = FourierPolynomial::new(n);
    let capacity = (2 * reach + 1).pow(n as u32) as usize;
    while out.len() < terms.min(capacity) {
        let m: Vec<i64> = (0..n).map(|_| rng.gen_range(-reach..=reach)).collect();
        if out.coefficient(&m) == C64::new(0.0, 0.0) {
            out.add_term(m, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarEngineReport {
    pub cases: usize,
    /// Largest `|star - oracle| / sum |star terms at z|`.
    pub max_oracle_error: f64,
    /// Largest deviation of `(e_a * e_b) / (e_b * e_a)` from `exp(2 pi i a^T theta b)`.
    pub max_phase_error: f64,
    pub tol: f64,
    pub phase_tol: f64,
    pub pass: bool,
}

impl StarEngineReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cases": self.cases,
            "max_oracle_error": self.max_oracle_error,
            "max_phase_error": self.max_phase_error,
            "tol": self.tol,
            "phase_tol": self.phase_tol,
            "pass": self.pass,
        })
    }
}

/// Compare [`star_fourier`] against [`moyal_oracle`] on `cases` random pairs
/// of `terms`-term series evaluated at a random point of the unit polydisc,
/// and check the plane-wave commutation phase on random frequency pairs.
pub fn star_engine_check(
    theta: &SkewMatrix,
    cases: usize,
    terms: usize,
    oracle_order: usize,
    seed: u64,
    tol: f64,
    phase_tol: f64,
) -> Result<StarEngineReport> {
    let n = theta.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = StarConfig { theta: theta.clone(), oracle_order, tol };
    let mut max_oracle_error: f64 = 0.0;
    let mut max_phase_error: f64 = 0.0;
    for z in crate::structure::polydisc_samples(n, cases, seed ^ 0xa11ce) {
        let f = random_fourier_polynomial(n, terms, 2, &mut rng);
        let g = random_fourier_polynomial(n, terms, 2, &mut rng);
        let product = star_fourier(&f, &g, theta)?;
        let scale: f64 = product
            .terms()
            .map(|(m, c)| {
                let arg: C64 = product.frequency(m).iter().zip(&z).map(|(k, zi)| zi * k).sum();
                (c * (C64::new(0.0, 2.0 * PI) * arg).exp()).norm()
            })
            .sum();
        let diff = (product.eval(&z)? - moyal_oracle(&f, &g, &z, &cfg)?).norm();
        max_oracle_error = max_oracle_error.max(if scale > 0.0 { diff / scale } else { diff });

        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
        let b: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
        let ab = star_fourier(&FourierPolynomial::plane_wave(&a, C64::new(1.0, 0.0)), &FourierPolynomial::plane_wave(&b, C64::new(1.0, 0.0)), theta)?;
        let ba = star_fourier(&FourierPolynomial::plane_wave(&b, C64::new(1.0, 0.0)), &FourierPolynomial::plane_wave(&a, C64::new(1.0, 0.0)), theta)?;
        let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let (af, bf): (Vec<f64>, Vec<f64>) = (a.iter().map(|&v| v as f64).collect(), b.iter().map(|&v| v as f64).collect());
        let expected = C64::from_polar(1.0, 2.0 * PI * theta.pairing(&af, &bf));
        max_phase_error = max_phase_error.max((ab.coefficient(&sum) / ba.coefficient(&sum) - expected).norm());
    }
    let pass = max_oracle_error <= tol && max_phase_error <= phase_tol;
    Ok(StarEngineReport { cases, max_oracle_error, max_phase_error, tol, phase_tol, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::reduce_mod;
    use crate::theta::{e_comm, e_nc};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn phase_examples() {
        let th = SkewMatrix::from_theta12(0.3);
        assert_eq!(plane_wave_phase(&[1.0, 2.0], &[3.0, -1.0], &SkewMatrix::zero(2)), c(1.0, 0.0));
        let p = plane_wave_phase(&[1.0, 0.0], &[0.0, 1.0], &th);
        assert!((p - c(0.587_785_252_292_473, 0.809_016_994_374_947)).norm() < 1e-12);
        assert!((plane_wave_phase(&[2.0, -1.0], &[2.0, -1.0], &th) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn oracle_matches_phase_for_plane_waves() {
        let th = SkewMatrix::from_theta12(0.3);
        let f = FourierPolynomial::plane_wave(&[1, 0], c(1.0, 0.0));
        let g = FourierPolynomial::plane_wave(&[0, 1], c(1.0, 0.0));
        let cfg = StarConfig { theta: th.clone(), oracle_order: 12, tol: 1e-12 };
        let v = moyal_oracle(&f, &g, &[c(0.0, 0.0); 2], &cfg).unwrap();
        assert!((v - C64::from_polar(1.0, 0.3 * PI)).norm() < 1e-10);
        let fg = star_fourier(&f, &g, &th).unwrap();
        assert_eq!(fg.len(), 1);
        assert!((fg.coefficient(&[1, 1]) - C64::from_polar(1.0, 0.3 * PI)).norm() < 1e-15);
        let gf = star_fourier(&g, &f, &th).unwrap();
        let ratio = fg.coefficient(&[1, 1]) / gf.coefficient(&[1, 1]);
        assert!((ratio - C64::from_polar(1.0, 0.6 * PI)).norm() < 1e-14);
    }

    #[test]
    fn oracle_order_zero_is_pointwise() {
        let th = SkewMatrix::from_theta12(0.2);
        let f = FourierPolynomial::from_terms(2, [(vec![1, 0], c(0.5, 1.0)), (vec![-1, 2], c(2.0, 0.0))]).unwrap();
        let g = FourierPolynomial::from_terms(2, [(vec![0, 1], c(1.0, -1.0)), (vec![3, 0], c(0.0, 0.3))]).unwrap();
        let z = [c(0.1, 0.2), c(-0.3, 0.05)];
        let pointwise = f.eval(&z).unwrap() * g.eval(&z).unwrap();
        let cfg = StarConfig { theta: th, oracle_order: 0, tol: 1e-12 };
        assert!((moyal_oracle(&f, &g, &z, &cfg).unwrap() - pointwise).norm() < 1e-13);
        let cfg0 = StarConfig { theta: SkewMatrix::zero(2), oracle_order: 7, tol: 1e-12 };
        assert!((moyal_oracle(&f, &g, &z, &cfg0).unwrap() - pointwise).norm() < 1e-13);
        let prod = star_fourier(&f, &g, &SkewMatrix::zero(2)).unwrap();
        assert_eq!(prod, f.product(&g).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let f = FourierPolynomial::plane_wave(&[1], c(1.0, 0.0));
        let g = FourierPolynomial::plane_wave(&[1, 0], c(1.0, 0.0));
        assert!(matches!(star_fourier(&f, &g, &SkewMatrix::zero(1)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn series_of_commutative_theta() {
        let (a, b) = (IntSymMatrix::zero(1), IntSymMatrix::diag(&[1]));
        let mu = reduce_mod(&b, &[0]).unwrap();
        let s = truncate_theta_series(&a, &b, &mu, &SkewMatrix::zero(1), 1e-12).unwrap();
        let r = s.terms().map(|(m, _)| m[0]).max().unwrap();
        assert_eq!(s.len() as i64, 2 * r + 1);
        for (m, coef) in s.terms() {
            assert!((coef - c((-PI * (m[0] * m[0]) as f64).exp(), 0.0)).norm() < 1e-15);
        }
        let z0 = s.eval(&[c(0.0, 0.0)]).unwrap();
        let direct = e_nc(&a, &b, &mu, &[c(0.0, 0.0)], &SkewMatrix::zero(1), 1e-12).unwrap().value;
        assert!((z0 - direct).norm() < 2e-12);
    }

    #[test]
    fn series_phase_for_nonzero_coset() {
        let a = IntSymMatrix::zero(1);
        let b = IntSymMatrix::diag(&[2]);
        let s0 = truncate_theta_series(&a, &b, &reduce_mod(&b, &[0]).unwrap(), &SkewMatrix::zero(1), 1e-12).unwrap();
        let s1 = truncate_theta_series(&a, &b, &reduce_mod(&b, &[1]).unwrap(), &SkewMatrix::zero(1), 1e-12).unwrap();
        for (m, c0) in s0.terms() {
            let c1 = s1.coefficient(m);
            assert!((c1.norm() - c0.norm()).abs() < 1e-15);
            // phase exp(-2 pi i m / 2)
            assert!((c1 - c0 * C64::from_polar(1.0, -PI * m[0] as f64)).norm() < 1e-14);
        }
    }

    #[test]
    fn series_agrees_with_gaussian_form_when_deformed() {
        let a1 = IntSymMatrix::diag(&[1, -4]);
        let a2 = IntSymMatrix::diag(&[2, -2]);
        let th = SkewMatrix::from_theta12(0.3);
        let mu = reduce_mod(&IntSymMatrix::diag(&[1, 2]), &[0, 1]).unwrap();
        let s = truncate_theta_series(&a1, &a2, &mu, &th, 1e-13).unwrap();
        let z = [c(0.3, -0.4), c(-0.2, 0.7)];
        let direct = e_nc(&a1, &a2, &mu, &z, &th, 1e-13).unwrap().value;
        assert!((s.eval(&z).unwrap() - direct).norm() < 1e-11);
    }

    #[test]
    fn star_at_zero_theta_is_pointwise() {
        let (a, b, cc) = (IntSymMatrix::zero(1), IntSymMatrix::diag(&[1]), IntSymMatrix::diag(&[3]));
        let mu = reduce_mod(&IntSymMatrix::diag(&[1]), &[0]).unwrap();
        let nu = reduce_mod(&IntSymMatrix::diag(&[2]), &[1]).unwrap();
        let z = [c(0.25, 0.3)];
        let lhs = star_theta_eval(&a, &b, &cc, &mu, &nu, &z, &SkewMatrix::zero(1), 1e-13).unwrap();
        let rhs = e_comm(&a, &b, &mu, &z, 1e-13).unwrap().value * e_comm(&b, &cc, &nu, &z, 1e-13).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-11);
    }

    #[test]
    fn star_of_basis_series_is_noncommutative() {
        let a1 = IntSymMatrix::diag(&[1, -4]);
        let a2 = IntSymMatrix::diag(&[2, -2]);
        let a3 = IntSymMatrix::diag(&[4, -1]);
        let th = SkewMatrix::from_theta12(0.3);
        let mu = reduce_mod(&IntSymMatrix::diag(&[1, 2]), &[0, 0]).unwrap();
        let nu = reduce_mod(&IntSymMatrix::diag(&[2, 1]), &[0, 0]).unwrap();
        let f = truncate_theta_series(&a1, &a2, &mu, &th, 1e-12).unwrap();
        let g = truncate_theta_series(&a2, &a3, &nu, &th, 1e-12).unwrap();
        let z = [c(0.1, 0.2), c(-0.3, 0.1)];
        let fg = star_fourier(&f, &g, &th).unwrap().eval(&z).unwrap();
        let gf = star_fourier(&g, &f, &th).unwrap().eval(&z).unwrap();
        assert!((fg - gf).norm() > 1e-3);
    }

    #[test]
    fn random_series_against_oracle() {
        let r = star_engine_check(&SkewMatrix::from_theta12(0.3), 10, 25, 80, 3, 1e-9, 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
        let r = star_engine_check(&SkewMatrix::from_theta12(-0.07), 5, 25, 60, 4, 1e-9, 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_fourier_polynomial(1, 50, 2, &mut rng).len(), 5);
    }
}
