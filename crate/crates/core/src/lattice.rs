//! Truncated Gaussian lattice sums with a certified tail.
//!
//! Every sum in the crate is of the form `sum_{w in Z^n} t(w)` where
//! `|t(w)| <= exp(L - pi*lambda*|a|^2 + 2*pi*l*|a|)` with `a = w - c` for a real
//! center `c`. The box `|w - c|_inf <= R` is summed and `R` is chosen so that
//! the shell bound on the omitted points is below the requested tolerance.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{min_eigenvalue, sym_norm, C64};

/// Default absolute tolerance for library evaluations.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Largest box half-width a sum may use.
pub const DEFAULT_RADIUS_CAP: i64 = 400;

/// Fraction of the computed smallest eigenvalue used in the bounds.
const EIGEN_MARGIN: f64 = 0.9;

/// Parameters of a Gaussian majorant `exp(log_scale - pi*lambda*(|a| - delta)^2)`.
#[derive(Clone, Debug)]
pub struct TailBound {
    pub center: Vec<f64>,
    pub lambda: f64,
    pub delta: f64,
    pub log_scale: f64,
}

impl TailBound {
    /// `lambda_raw` is the exact smallest eigenvalue of the real quadratic
    /// part; `linear` and `log0` are as in the module docs.
    pub fn new(center: Vec<f64>, lambda_raw: f64, linear: f64, log0: f64) -> Result<Self> {
        if !lambda_raw.is_finite() || lambda_raw <= 0.0 {
            return Err(Error::NotPositiveReal);
        }
        let lambda = EIGEN_MARGIN * lambda_raw;
        let linear = linear.max(0.0);
        Ok(Self {
            center,
            lambda,
            delta: linear / lambda,
            log_scale: log0 + PI * linear * linear / lambda,
        })
    }

    /// Majorant for `exp(-pi (w - c)^T Q (w - c) + log_prefactor)` with complex
    /// symmetric `Q` (positive definite real part) and complex center `c`.
    pub fn gaussian(q: &DMatrix<C64>, center: &[C64], log_prefactor: f64) -> Result<Self> {
        let p = q.map(|z| z.re);
        let s = q.map(|z| z.im);
        let lambda = min_eigenvalue(&p);
        let b: Vec<f64> = center.iter().map(|z| z.im).collect();
        let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut bpb = 0.0;
        for i in 0..b.len() {
            for j in 0..b.len() {
                bpb += b[i] * p[(i, j)] * b[j];
            }
        }
        Self::new(
            center.iter().map(|z| z.re).collect(),
            lambda,
            sym_norm(&s) * b_norm,
            log_prefactor + PI * bpb,
        )
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Upper bound for the sum over all lattice points outside the box of half-width `r`.
    pub fn tail(&self, r: i64) -> f64 {
        let n = self.dim() as i32;
        let mut total = 0.0;
        let mut k = r + 1;
        loop {
            let dist = ((k - 1) as f64 - self.delta).max(0.0);
            let log_term = self.log_scale + (n as f64) * ((2 * k + 1) as f64).ln() - PI * self.lambda * dist * dist;
            let term = log_term.exp();
            total += term;
            // terms decay super-geometrically once past the peak
            if (k - 1) as f64 > self.delta + 1.0 && (term < 1e-30 * total || term == 0.0) {
                break;
            }
            if k > r + 100_000 {
                return f64::INFINITY;
            }
            k += 1;
        }
        total
    }

    /// Smallest half-width whose tail is at most `tol`.
    pub fn radius(&self, tol: f64, cap: i64) -> Result<i64> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidInput("tolerance must be positive".into()));
        }
        let mut r = self.delta.ceil().max(0.0) as i64;
        loop {
            if r > cap {
                return Err(Error::TruncationOverflow { required: format!("> {cap}"), cap });
            }
            if self.tail(r) <= tol {
                return Ok(r);
            }
            r += 1;
        }
    }
}

/// Compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: C64,
    comp: C64,
}

impl KahanSum {
    pub fn add(&mut self, x: C64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> C64 {
        self.sum
    }
}

impl std::iter::FromIterator<C64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = C64>>(iter: I) -> Self {
        let mut k = KahanSum::default();
        for x in iter {
            k.add(x);
        }
        k
    }
}

/// Visit every integer point of `|w - center|_inf <= radius` in lexicographic order.
pub fn for_each_in_box(center: &[f64], radius: i64, mut f: impl FnMut(&[i64])) {
    let n = center.len();
    let lo: Vec<i64> = center.iter().map(|c| (c - radius as f64).ceil() as i64).collect();
    let hi: Vec<i64> = center.iter().map(|c| (c + radius as f64).floor() as i64).collect();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return;
    }
    let mut cur = lo.clone();
    loop {
        f(&cur);
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] <= hi[k] {
                break;
            }
            cur[k] = lo[k];
        }
    }
}

/// Value of a truncated lattice sum together with the box half-width used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeValue {
    pub value: C64,
    pub radius: i64,
}

/// Sum `term(w)` over the certified box of `bound`.
pub fn certified_sum(bound: &TailBound, tol: f64, cap: i64, mut term: impl FnMut(&[i64]) -> C64) -> Result<LatticeValue> {
    let radius = bound.radius(tol, cap)?;
    let mut acc = KahanSum::default();
    for_each_in_box(&bound.center, radius, |w| acc.add(term(w)));
    Ok(LatticeValue { value: acc.value(), radius })
}

/// `x^T Q y` for complex matrices and vectors.
pub(crate) fn bilinear(q: &DMatrix<C64>, x: &[C64], y: &[C64]) -> C64 {
    let n = x.len();
    let mut s = C64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = C64::new(0.0, 0.0);
        for j in 0..n {
            row += q[(i, j)] * y[j];
        }
        s += x[i] * row;
    }
    s
}

/// Gaussian majorant of `exp(f(k))` for `f` an exactly quadratic, concave
/// function, recovered from its values at `0, +-e_i, e_i + e_j`.
pub fn quadratic_majorant(n: usize, f: &dyn Fn(&[f64]) -> Result<f64>) -> Result<TailBound> {
    let unit = |i: usize, s: f64| -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = s;
        v
    };
    let f0 = f(&vec![0.0; n])?;
    let mut grad = vec![0.0; n];
    let mut hess = DMatrix::<f64>::zeros(n, n);
    let plus: Vec<f64> = (0..n).map(|i| f(&unit(i, 1.0))).collect::<Result<_>>()?;
    for i in 0..n {
        let minus = f(&unit(i, -1.0))?;
        grad[i] = (plus[i] - minus) / 2.0;
        hess[(i, i)] = plus[i] + minus - 2.0 * f0;
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut e = unit(i, 1.0);
            e[j] = 1.0;
            let v = f(&e)? - plus[i] - plus[j] + f0;
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    // f(k) = f0 + g.k + k^T H k / 2 = fmax - pi (k - c)^T G (k - c)
    let g_form = hess.map(|v| -v / (2.0 * PI));
    let h_inv = hess.clone().try_inverse().ok_or(Error::NotPositiveReal)?;
    let gvec = DMatrix::from_column_slice(n, 1, &grad);
    let center = -(&h_inv * &gvec);
    let fmax = f0 - 0.5 * (gvec.transpose() * &h_inv * &gvec)[(0, 0)];
    TailBound::new(center.iter().copied().collect(), min_eigenvalue(&g_form), 0.0, fmax)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_is_lexicographic() {
        let mut pts = Vec::new();
        for_each_in_box(&[0.0, 0.5], 1, |w| pts.push(w.to_vec()));
        assert_eq!(pts.first().unwrap(), &vec![-1, 0]);
        assert_eq!(pts.last().unwrap(), &vec![1, 1]);
        assert_eq!(pts.len(), 3 * 2);
    }

    #[test]
    fn tail_bound_dominates_actual_tail() {
        // one-dimensional exp(-pi w^2)
        let q = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        let b = TailBound::gaussian(&q, &[C64::new(0.0, 0.0)], 0.0).unwrap();
        for r in 0..5 {
            let actual: f64 = (r + 1..60).map(|w| 2.0 * (-PI * (w * w) as f64).exp()).sum();
            assert!(b.tail(r) >= actual, "r={r}");
        }
        let r = b.radius(1e-12, 100).unwrap();
        assert!(r <= 6, "radius {r} unexpectedly large");
    }

    #[test]
    fn overflow_is_reported() {
        let b = TailBound::new(vec![0.0], 1e-6, 0.0, 0.0).unwrap();
        assert!(matches!(b.radius(1e-12, 10), Err(Error::TruncationOverflow { .. })));
    }

    #[test]
    fn non_positive_real_part_rejected() {
        let q = DMatrix::from_element(1, 1, C64::new(-1.0, 0.0));
        assert_eq!(TailBound::gaussian(&q, &[C64::new(0.0, 0.0)], 0.0).unwrap_err(), Error::NotPositiveReal);
    }
}
