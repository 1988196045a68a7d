use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::C64;

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Eigenvalues (ascending) and matching eigenvectors of a Hermitian matrix.
/// The input is symmetrised first so rounding noise in the lower triangle
/// cannot leak into the result.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    assert!(m.is_square());
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    hermitian_eigen(m).0
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `max |m − I|` together with the offending entry.
pub fn identity_deviation(m: &CMat) -> (f64, (usize, usize)) {
    let mut worst = (0.0, (0, 0));
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            let d = (m[(r, c)] - C64::new(target, 0.0)).norm();
            if d > worst.0 {
                worst = (d, (r, c));
            }
        }
    }
    worst
}
