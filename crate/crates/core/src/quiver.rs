//! Quivers of line-bundle labels weighted by the dimensions of their Hom spaces.

use std::fmt::Write as _;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::io;
use crate::linalg::{difference, is_positive_definite, IntSymMatrix};

/// Diagonal `2 x 2` labels with entries in `[-bound, bound]` and the given
/// determinant, in lexicographic order of their entries.
pub fn enumerate_diag_symmetric(det_target: i64, bound: i64) -> Vec<IntSymMatrix> {
    let mut out = Vec::new();
    for p in -bound..=bound {
        for q in -bound..=bound {
            if p * q == det_target {
                out.push(IntSymMatrix::diag(&[p, q]));
            }
        }
    }
    out.sort_by(|a, b| a.entries().cmp(b.entries()));
    out
}

/// `g^T A g` for a unimodular integer `g` given by rows.
pub fn conjugate(a: &IntSymMatrix, g: &[Vec<i64>]) -> Result<IntSymMatrix> {
    let n = a.dim();
    if g.len() != n || g.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: g.len() });
    }
    let flat: Vec<i128> = g.iter().flatten().map(|&v| v as i128).collect();
    if int_det(&flat, n).abs() != 1 {
        return Err(Error::NotUnimodular);
    }
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).flat_map(|k| (0..n).map(move |l| (k, l))).map(|(k, l)| g[k][i] * a.get(k, l) * g[l][j]).sum())
                .collect()
        })
        .collect();
    IntSymMatrix::from_rows(&rows)
}

/// Determinant by cofactor expansion; only used for small `n`.
fn int_det(m: &[i128], n: usize) -> i128 {
    if n == 1 {
        return m[0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<i128> = (1..n).flat_map(|i| (0..n).filter(move |&k| k != j).map(move |k| m[i * n + k])).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[j] * int_det(&minor, n - 1)
        })
        .sum()
}

/// `det(A_b - A_a)` when positive definite, 1 on the diagonal, 0 otherwise.
pub fn hom_dim(a_a: &IntSymMatrix, a_b: &IntSymMatrix) -> Result<usize> {
    if a_a == a_b {
        return Ok(1);
    }
    let d = difference(a_a, a_b)?;
    if d.det() == 0 {
        return Err(Error::DegenerateDifference);
    }
    Ok(if is_positive_definite(&d) { d.det() as usize } else { 0 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Quiver {
    pub names: Vec<String>,
    pub labels: Vec<IntSymMatrix>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn weight(&self, source: usize, target: usize) -> usize {
        self.arrows.iter().find(|a| a.source == source && a.target == target).map_or(0, |a| a.weight)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quiver {\n  rankdir=LR;\n");
        for (name, label) in self.names.iter().zip(&self.labels) {
            let _ = writeln!(out, "  \"{name}\" [label=\"{name}: {}\"];", io::int_matrix_json(label));
        }
        for a in &self.arrows {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", self.names[a.source], self.names[a.target], a.weight);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .names
            .iter()
            .zip(&self.labels)
            .map(|(name, label)| serde_json::json!({"name": name, "matrix": io::int_matrix_json(label)}))
            .collect();
        let arrows: Vec<Value> = self
            .arrows
            .iter()
            .map(|a| serde_json::json!({"from": self.names[a.source], "to": self.names[a.target], "weight": a.weight}))
            .collect();
        serde_json::json!({"nodes": nodes, "arrows": arrows})
    }
}

/// Quiver on labels named `1, 2, ...` in the given order.
pub fn build_quiver(labels: &[IntSymMatrix]) -> Result<Quiver> {
    let names: Vec<String> = (1..=labels.len()).map(|i| i.to_string()).collect();
    build_named_quiver(&names, labels)
}

pub fn build_named_quiver(names: &[String], labels: &[IntSymMatrix]) -> Result<Quiver> {
    if names.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: labels.len(), found: names.len() });
    }
    let mut arrows = Vec::new();
    for (i, a) in labels.iter().enumerate() {
        for (j, b) in labels.iter().enumerate() {
            if i == j {
                continue;
            }
            let weight = hom_dim(a, b)?;
            if weight > 0 {
                arrows.push(Arrow { source: i, target: j, weight });
            }
        }
    }
    Ok(Quiver { names: names.to_vec(), labels: labels.to_vec(), arrows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn enumeration() {
        let got = enumerate_diag_symmetric(-4, 4);
        let mut want: Vec<IntSymMatrix> = presets::diagonal_labels().to_vec();
        want.extend(presets::diagonal_labels().iter().map(|a| a.neg()));
        want.sort_by(|a, b| a.entries().cmp(b.entries()));
        assert_eq!(got, want);
        assert!(enumerate_diag_symmetric(-4, 1).is_empty());
        assert_eq!(enumerate_diag_symmetric(1, 1), vec![IntSymMatrix::diag(&[-1, -1]), IntSymMatrix::diag(&[1, 1])]);
    }

    #[test]
    fn conjugation() {
        let a = IntSymMatrix::diag(&[1, -4]);
        assert_eq!(conjugate(&a, &[vec![1, 0], vec![0, 1]]).unwrap(), a);
        let c = conjugate(&a, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(c, IntSymMatrix::from_rows(&[vec![1, 1], vec![1, -3]]).unwrap());
        assert_eq!(c.det(), -4);
        assert_eq!(conjugate(&a, &[vec![2, 0], vec![0, 1]]).unwrap_err(), Error::NotUnimodular);
    }

    #[test]
    fn diagonal_family_dimensions() {
        let [a1, a2, a3] = presets::diagonal_labels();
        assert_eq!(hom_dim(&a1, &a2).unwrap(), 2);
        assert_eq!(hom_dim(&a2, &a3).unwrap(), 2);
        assert_eq!(hom_dim(&a1, &a3).unwrap(), 9);
        assert_eq!(hom_dim(&a1, &a2.neg()).unwrap(), 0);
        assert_eq!(hom_dim(&a1, &a1).unwrap(), 1);
        assert_eq!(hom_dim(&a1, &IntSymMatrix::diag(&[1, 3])).unwrap_err(), Error::DegenerateDifference);
    }

    #[test]
    fn quivers() {
        let q = build_quiver(&presets::diagonal_labels()).unwrap();
        assert_eq!(q.arrows.len(), 3);
        assert_eq!((q.weight(0, 1), q.weight(1, 2), q.weight(0, 2)), (2, 2, 9));
        assert!(build_quiver(&[IntSymMatrix::diag(&[1, -4])]).unwrap().arrows.is_empty());
        let a1 = IntSymMatrix::diag(&[1, -4]);
        assert!(build_quiver(&[a1.clone(), a1.neg()]).unwrap().arrows.is_empty());
        assert!(q.to_dot().contains("\"1\" -> \"3\" [label=\"9\"];"));
        assert_eq!(q.to_json()["arrows"][1]["weight"], 9);
    }
}
