//! Test-only oracles, kept independent of the library's own code paths.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use villain::numerics::CMatrix;

/// Largest eigenpair of the Gram matrix `M M^H` via nalgebra's Hermitian
/// eigensolver: returns `(sqrt(lambda_max), eigenvector)`.
pub fn gram_top_pair(m: &CMatrix) -> (f64, Vec<Complex64>) {
    let a = DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)]);
    let gram = &a * a.adjoint();
    let eig = SymmetricEigen::new(gram);
    let (k, lambda) = eig
        .eigenvalues
        .iter()
        .cloned()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap();
    let v = eig.eigenvectors.column(k).iter().cloned().collect();
    (lambda.max(0.0).sqrt(), v)
}

/// `|<a, b>|` for unit vectors; 1 means the same line.
pub fn alignment(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm()
}

/// `|g(phi_a)^T g(phi_b)^*|^2` for a half-wavelength ULA in closed form
/// (Dirichlet kernel), without forming either steering vector.
pub fn ula_cross_gain(b: usize, phi_a_deg: f64, phi_b_deg: f64) -> f64 {
    let x = std::f64::consts::PI * (phi_a_deg.to_radians().cos() - phi_b_deg.to_radians().cos());
    if (x / 2.0).sin().abs() < 1e-15 {
        return 1.0;
    }
    let ratio = (b as f64 * x / 2.0).sin() / (x / 2.0).sin();
    ratio * ratio / (b * b) as f64
}
