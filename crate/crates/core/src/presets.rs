//! Named label sets used by the tests, the acceptance suite and the CLI.

use crate::linalg::{IntSymMatrix, SkewMatrix};

/// The three diagonal labels of determinant `-4`: `diag(1,-4), diag(2,-2), diag(4,-1)`.
pub fn diagonal_labels() -> [IntSymMatrix; 3] {
    [IntSymMatrix::diag(&[1, -4]), IntSymMatrix::diag(&[2, -2]), IntSymMatrix::diag(&[4, -1])]
}

/// One-dimensional triple `(0, 1, 3)`.
pub fn line_labels() -> [IntSymMatrix; 3] {
    [IntSymMatrix::diag(&[0]), IntSymMatrix::diag(&[1]), IntSymMatrix::diag(&[3])]
}

/// One-dimensional quadruple `(0, 1, 2, 4)`.
pub fn line_quadruple() -> [IntSymMatrix; 4] {
    [IntSymMatrix::diag(&[0]), IntSymMatrix::diag(&[1]), IntSymMatrix::diag(&[2]), IntSymMatrix::diag(&[4])]
}

/// Two-dimensional quadruple of equal determinant `-4` with positive definite
/// consecutive differences, hence compatible with every `theta`.
pub fn plane_quadruple() -> [IntSymMatrix; 4] {
    let m = |r: [[i64; 2]; 2]| IntSymMatrix::from_rows(&[r[0].to_vec(), r[1].to_vec()]).expect("symmetric");
    [m([[-5, -2], [-2, 0]]), m([[-3, -1], [-1, 1]]), m([[0, -2], [-2, 2]]), m([[3, -4], [-4, 4]])]
}

/// `theta_12 = 0.3`, the deformation used for the two-dimensional checks.
pub fn default_theta() -> SkewMatrix {
    SkewMatrix::from_theta12(0.3)
}

/// Preset label lists by name: `sec5`, `line` (alias `n1`), `line4`, `plane4`.
pub fn labels(name: &str) -> Option<Vec<IntSymMatrix>> {
    match name {
        "sec5" => Some(diagonal_labels().to_vec()),
        "line" | "n1" => Some(line_labels().to_vec()),
        "line4" => Some(line_quadruple().to_vec()),
        "plane4" => Some(plane_quadruple().to_vec()),
        _ => None,
    }
}

pub const PRESET_NAMES: [&str; 4] = ["sec5", "line", "line4", "plane4"];
