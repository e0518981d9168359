//! The symplectic side: affine lagrangians `y = A x + c` in `R^{2n}`, their
//! intersection points and the triangle sums that reproduce the commutative
//! structure constants.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::{for_each_in_box, quadratic_majorant, KahanSum, DEFAULT_RADIUS_CAP};
use crate::linalg::{difference, is_positive_definite, CosetIndex, IntSymMatrix, Quotient, C64};
use crate::structure::{tabulate, LabelTriple, StructureTensor};

/// The affine subspace `y = A x + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineLagrangian {
    pub slope: IntSymMatrix,
    pub offset: Vec<f64>,
}

impl AffineLagrangian {
    pub fn new(slope: IntSymMatrix, offset: Vec<f64>) -> Result<Self> {
        if offset.len() != slope.dim() {
            return Err(Error::DimensionMismatch { expected: slope.dim(), found: offset.len() });
        }
        Ok(Self { slope, offset })
    }

    pub fn through_origin(slope: IntSymMatrix) -> Self {
        let n = slope.dim();
        Self { slope, offset: vec![0.0; n] }
    }

    pub fn dim(&self) -> usize {
        self.slope.dim()
    }
}

/// The standard form `[[0, -1], [1, 0]]` in `n x n` blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    n: usize,
}

impl SymplecticForm {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if i < n && j == i + n {
                -1.0
            } else if i >= n && j + n == i {
                1.0
            } else {
                0.0
            }
        })
    }

    /// `u^T omega v`.
    pub fn pairing(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.n;
        (0..n).map(|i| u[i + n] * v[i] - u[i] * v[i + n]).sum()
    }
}

/// The unique point `(x, y)` of `L_a ∩ L_b`.
pub fn intersection_point(la: &AffineLagrangian, lb: &AffineLagrangian) -> Result<Vec<f64>> {
    if la.dim() != lb.dim() {
        return Err(Error::DimensionMismatch { expected: la.dim(), found: lb.dim() });
    }
    let n = la.dim();
    let a_ab = difference(&la.slope, &lb.slope)?;
    if a_ab.det() == 0 {
        return Err(Error::ParallelLagrangians);
    }
    let inv = a_ab.inverse()?.to_real();
    let dc: Vec<f64> = (0..n).map(|i| la.offset[i] - lb.offset[i]).collect();
    let x: Vec<f64> = (0..n).map(|i| (0..n).map(|j| inv[(i, j)] * dc[j]).sum()).collect();
    let y: Vec<f64> = (0..n).map(|i| (0..n).map(|j| la.slope.get(i, j) as f64 * x[j]).sum::<f64>() + la.offset[i]).collect();
    Ok([x, y].concat())
}

/// `(v_ab - v_ac)^T omega (v_bc - v_ac)`.
pub fn triangle_area(v_ab: &[f64], v_bc: &[f64], v_ac: &[f64], omega: &SymplecticForm) -> f64 {
    let p: Vec<f64> = v_ab.iter().zip(v_ac).map(|(a, b)| a - b).collect();
    let q: Vec<f64> = v_bc.iter().zip(v_ac).map(|(a, b)| a - b).collect();
    omega.pairing(&p, &q)
}

/// Area of the triangle cut out by `L_a` (offset 0), `L_b` (offset `c_b`)
/// and `L_c` (offset `c_c`).
pub fn offset_triangle_area(a_a: &IntSymMatrix, a_b: &IntSymMatrix, a_c: &IntSymMatrix, c_b: &[f64], c_c: &[f64]) -> Result<f64> {
    let la = AffineLagrangian::through_origin(a_a.clone());
    let lb = AffineLagrangian::new(a_b.clone(), c_b.to_vec())?;
    let lc = AffineLagrangian::new(a_c.clone(), c_c.to_vec())?;
    let v_ab = intersection_point(&la, &lb)?;
    let v_bc = intersection_point(&lb, &lc)?;
    let v_ac = intersection_point(&la, &lc)?;
    Ok(triangle_area(&v_ab, &v_bc, &v_ac, &SymplecticForm::new(a_a.dim())))
}

/// A triangle sum together with the data of its truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorSum {
    pub value: f64,
    /// Number of admissible triangles inside the truncation box.
    pub terms: usize,
    /// Smallest area among the admissible triangles (`+inf` if none).
    pub min_area: f64,
    pub radius: i64,
}

/// `sum_{u'} exp(-pi area(u', rho))` over the `u'` with `-u' = mu mod A_ab`
/// and `u' + rho = nu mod A_bc`; `L_a, L_b, L_c` carry offsets `0, u', -rho`.
#[allow(clippy::too_many_arguments)]
pub fn c_mirror(
    a_a: &IntSymMatrix,
    a_b: &IntSymMatrix,
    a_c: &IntSymMatrix,
    mu: &CosetIndex,
    nu: &CosetIndex,
    rho: &CosetIndex,
    tol: f64,
) -> Result<MirrorSum> {
    let a_ab = difference(a_a, a_b)?;
    let a_bc = difference(a_b, a_c)?;
    let a_ac = difference(a_a, a_c)?;
    if !is_positive_definite(&a_ab) || !is_positive_definite(&a_bc) {
        return Err(Error::NotPositiveDefinite);
    }
    let (q_ab, q_bc, q_ac) = (Quotient::new(&a_ab)?, Quotient::new(&a_bc)?, Quotient::new(&a_ac)?);
    q_ab.check(mu)?;
    q_bc.check(nu)?;
    q_ac.check(rho)?;
    let n = a_ab.dim();
    let c_c: Vec<f64> = rho.rep().iter().map(|&r| -(r as f64)).collect();
    let area = |u: &[f64]| offset_triangle_area(a_a, a_b, a_c, u, &c_c);
    let bound = quadratic_majorant(n, &|u| Ok(-PI * area(u)?))?;
    let radius = bound.radius(tol, DEFAULT_RADIUS_CAP)?;
    let mut acc = KahanSum::default();
    let mut terms = 0;
    let mut min_area = f64::INFINITY;
    let mut failure = None;
    for_each_in_box(&bound.center, radius, |u| {
        let neg: Vec<i64> = u.iter().map(|v| -v).collect();
        let shifted: Vec<i64> = u.iter().zip(rho.rep()).map(|(v, r)| v + r).collect();
        if q_ab.reduce(&neg) != *mu || q_bc.reduce(&shifted) != *nu {
            return;
        }
        let uf: Vec<f64> = u.iter().map(|&v| v as f64).collect();
        match area(&uf) {
            Ok(s) => {
                acc.add(C64::new((-PI * s).exp(), 0.0));
                terms += 1;
                min_area = min_area.min(s);
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(MirrorSum { value: acc.value().re, terms, min_area, radius })
}

/// All mirror structure constants of a triple; `theta` of the triple is ignored.
pub fn mirror_tensor(triple: &LabelTriple, tol: f64) -> Result<StructureTensor> {
    let (a, b, c) = triple.labels();
    tabulate(triple, |mu, nu, rho| Ok(C64::new(c_mirror(a, b, c, mu, nu, rho, tol)?.value, 0.0)))
}

/// Number of points of `pi(L_a) ∩ pi(L_b)` in `R^{2n} / Z^{2n}`, counted by
/// enumerating integer offsets of `L_b` over one period.
pub fn intersection_count(a_a: &IntSymMatrix, a_b: &IntSymMatrix) -> Result<usize> {
    let a_ab = difference(a_a, a_b)?;
    if a_ab.det() == 0 {
        return Err(Error::ParallelLagrangians);
    }
    let inv = a_ab.inverse()?;
    let (sign, period) = (inv.denom().signum(), inv.denom().abs());
    let n = a_ab.dim();
    // the y coordinate is A_a x + c_a, so distinct points are distinct x mod Z^n
    let mut points = BTreeSet::new();
    for_each_in_box(&vec![(period as f64 - 1.0) / 2.0; n], period as i64, |t| {
        if t.iter().all(|&v| v >= 0 && (v as i128) < period) {
            let x: Vec<i128> = inv.apply_numer(t).into_iter().map(|v| (-sign * v).rem_euclid(period)).collect();
            points.insert(x);
        }
    });
    Ok(points.len())
}
