//! Complex linear-algebra primitives used by the estimators.
//!
//! Only what the pilot-phase processing needs: the pseudoinverse of a row
//! vector, rank-one orthogonal projectors, and the dominant left singular
//! vector of a (tall or wide) complex matrix. The singular vector is
//! computed with a one-sided Jacobi sweep directly on the input, picking the
//! orientation that keeps the cost at `max(B, T) * min(B, T)^2` per sweep.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type C64 = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("vector norm {norm:e} is below the zero threshold")]
    ZeroVector { norm: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix has {0} entries but a shape of {1}x{2}")]
    BadShape(usize, usize, usize),
    #[error("non-finite entry")]
    NonFinite,
}

/// Threshold policy for classifying norms and singular values as zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceConfig {
    pub rel_rank_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { rel_rank_tol: 1e-12 }
    }
}

impl ToleranceConfig {
    pub fn new(rel_rank_tol: f64) -> Self {
        assert!(rel_rank_tol >= 0.0, "tolerance must be nonnegative");
        Self { rel_rank_tol }
    }

    /// `value` counts as zero relative to `scale`.
    pub fn is_negligible(&self, value: f64, scale: f64) -> bool {
        !(value > self.rel_rank_tol * scale)
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, NumericsError> {
        if data.len() != rows * cols {
            return Err(NumericsError::BadShape(data.len(), rows, cols));
        }
        if !data.iter().all(|z| z.is_finite()) {
            return Err(NumericsError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// `a * b^T` for column vectors `a` and `b`.
    pub fn outer_transpose(a: &[C64], b: &[C64]) -> Self {
        Self::from_fn(a.len(), b.len(), |r, c| a[r] * b[c])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * k).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows).map(|r| dot_t(self.row(r), x)).collect()
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "matrix-matrix dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Bilinear product `a^T b` (no conjugation).
pub fn dot_t(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sesquilinear product `a^H b`.
pub fn dot_h(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm2(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn conj(a: &[C64]) -> Vec<C64> {
    a.iter().map(|z| z.conj()).collect()
}

pub fn scale(a: &[C64], k: C64) -> Vec<C64> {
    a.iter().map(|z| z * k).collect()
}

/// Pseudoinverse of the row `s^T`, returned as a column: `s^* / ||s||^2`.
///
/// Pilots are Es-normalized, so the zero threshold is `rel_rank_tol` on an
/// absolute unit scale.
pub fn pinv_row(s: &[C64], tol: &ToleranceConfig) -> Result<Vec<C64>, NumericsError> {
    let norm_sq: f64 = s.iter().map(|z| z.norm_sqr()).sum();
    let norm = norm_sq.sqrt();
    if tol.is_negligible(norm, 1.0) || !norm.is_finite() {
        return Err(NumericsError::ZeroVector { norm });
    }
    Ok(s.iter().map(|z| z.conj() / norm_sq).collect())
}

/// `I - a a^H / ||a||^2`, the orthogonal projector onto `span(a)^perp`.
pub fn orth_projector(a: &[C64], tol: &ToleranceConfig) -> Result<CMatrix, NumericsError> {
    let norm = norm2(a);
    if tol.is_negligible(norm, 1.0) || !norm.is_finite() {
        return Err(NumericsError::ZeroVector { norm });
    }
    let unit: Vec<C64> = a.iter().map(|z| z / norm).collect();
    Ok(unit_projector_complement(&unit))
}

/// `I - u u^H` for a vector already normalized to unit norm.
pub fn unit_projector_complement(u: &[C64]) -> CMatrix {
    let n = u.len();
    let mut p = CMatrix::from_fn(n, n, |r, c| -(u[r] * u[c].conj()));
    for i in 0..n {
        // Diagonal is real by construction.
        p[(i, i)] = C64::new(1.0 - u[i].norm_sqr(), 0.0);
    }
    p
}

/// Applies `I - u u^H` to `x` without forming the matrix.
pub fn apply_unit_complement(u: &[C64], x: &[C64]) -> Vec<C64> {
    let coeff = dot_h(u, x);
    x.iter().zip(u).map(|(xi, ui)| xi - ui * coeff).collect()
}

/// Dominant left singular vector and the corresponding singular value.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularPair {
    pub u: Vec<C64>,
    pub sigma_max: f64,
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Components below this fraction of the largest magnitude are skipped when
/// fixing the phase, so the convention is stable under rounding.
const PHASE_REF_FRACTION: f64 = 1e-8;

/// Dominant left singular vector of `m`.
///
/// The phase of `u` is fixed so the first component whose magnitude is at
/// least `1e-8` of the largest is real and positive. A zero matrix returns
/// `sigma_max = 0` with `u = e_1`.
pub fn top_left_singular_vector(m: &CMatrix) -> SingularPair {
    let (rows, cols) = (m.rows(), m.cols());
    assert!(rows >= 1 && cols >= 1, "empty matrix");

    let (mut u, sigma_max) = if rows >= cols {
        // Orthogonalize the T columns of M itself; the surviving columns are
        // sigma_k * u_k.
        let mut columns: Vec<Vec<C64>> = (0..cols).map(|c| m.col(c)).collect();
        jacobi_orthogonalize(&mut columns, None);
        let (best, sigma) = largest_column(&columns);
        if sigma == 0.0 {
            (unit_axis(rows), 0.0)
        } else {
            (columns[best].iter().map(|z| z / sigma).collect(), sigma)
        }
    } else {
        // Wide case: orthogonalize the B columns of M^H and accumulate the
        // rotations; V then holds the left singular vectors of M.
        let adj = m.adjoint();
        let mut columns: Vec<Vec<C64>> = (0..rows).map(|c| adj.col(c)).collect();
        let mut v: Vec<Vec<C64>> = (0..rows)
            .map(|i| {
                let mut e = vec![C64::new(0.0, 0.0); rows];
                e[i] = C64::new(1.0, 0.0);
                e
            })
            .collect();
        jacobi_orthogonalize(&mut columns, Some(&mut v));
        let (best, sigma) = largest_column(&columns);
        if sigma == 0.0 {
            (unit_axis(rows), 0.0)
        } else {
            let vb = std::mem::take(&mut v[best]);
            let n = norm2(&vb);
            (vb.into_iter().map(|z| z / n).collect(), sigma)
        }
    };
    fix_phase(&mut u);
    SingularPair { u, sigma_max }
}

fn unit_axis(n: usize) -> Vec<C64> {
    let mut e = vec![C64::new(0.0, 0.0); n];
    e[0] = C64::new(1.0, 0.0);
    e
}

fn largest_column(columns: &[Vec<C64>]) -> (usize, f64) {
    columns
        .iter()
        .map(|c| norm2(c))
        .enumerate()
        .fold((0, 0.0), |best, (i, n)| if n > best.1 { (i, n) } else { best })
}

/// Makes the first significant component real-positive.
pub fn fix_phase(u: &mut [C64]) {
    let peak = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return;
    }
    if let Some(anchor) = u.iter().find(|z| z.norm() >= PHASE_REF_FRACTION * peak) {
        let rot = anchor.conj() / anchor.norm();
        for z in u.iter_mut() {
            *z *= rot;
        }
    }
}

/// One-sided (Hestenes) Jacobi: rotates column pairs until all columns are
/// mutually orthogonal. The same rotations are applied to `v` when given.
fn jacobi_orthogonalize(columns: &mut [Vec<C64>], mut v: Option<&mut Vec<Vec<C64>>>) {
    let n = columns.len();
    if n < 2 {
        return;
    }
    let eps = f64::EPSILON;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha: f64 = columns[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = columns[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = dot_h(&columns[p], &columns[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Remove the phase of gamma from column q, then apply a real
                // rotation to the pair.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let shift = phase.conj();
                rotate_pair(columns, p, q, c, s, shift);
                if let Some(v) = v.as_deref_mut() {
                    rotate_pair(v, p, q, c, s, shift);
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, shift: C64) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
        let bq = *b * shift;
        let ap = *a;
        *a = ap * c - bq * s;
        *b = ap * s + bq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn pinv_row_of_axis_and_ones() {
        let tol = ToleranceConfig::default();
        assert_eq!(pinv_row(&[c(1.0, 0.0), c(0.0, 0.0)], &tol).unwrap(), vec![c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(pinv_row(&[c(1.0, 0.0), c(1.0, 0.0)], &tol).unwrap(), vec![c(0.5, 0.0), c(0.5, 0.0)]);
    }

    #[test]
    fn pinv_row_norm_three() {
        let tol = ToleranceConfig::default();
        // ||s||^2 = 4 + 1 + 4 = 9
        let s = [c(2.0, 0.0), c(0.0, -1.0), c(-1.2, 1.6)];
        assert!((norm2(&s) - 3.0).abs() < 1e-15);
        let p = pinv_row(&s, &tol).unwrap();
        assert!((dot_t(&s, &p) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pinv_row_rejects_zero() {
        let tol = ToleranceConfig::default();
        let err = pinv_row(&[c(0.0, 0.0); 3], &tol).unwrap_err();
        assert!(matches!(err, NumericsError::ZeroVector { .. }));
    }

    #[test]
    fn projector_of_axis() {
        let tol = ToleranceConfig::default();
        let p = orth_projector(&[c(1.0, 0.0), c(0.0, 0.0)], &tol).unwrap();
        assert_eq!(p, CMatrix::from_row_major(2, 2, vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap());
        assert!(orth_projector(&[c(0.0, 0.0); 4], &tol).is_err());
    }

    #[test]
    fn rank_one_outer_product() {
        let x = [c(1.0, 2.0), c(-0.5, 0.25), c(0.0, 3.0)];
        let y = [c(2.0, -1.0), c(0.5, 0.5)];
        // M = x y^H
        let m = CMatrix::from_fn(3, 2, |r, k| x[r] * y[k].conj());
        let pair = top_left_singular_vector(&m);
        assert!((pair.sigma_max - norm2(&x) * norm2(&y)).abs() < 1e-12);
        let mut expected: Vec<C64> = x.iter().map(|z| z / norm2(&x)).collect();
        fix_phase(&mut expected);
        for (a, b) in pair.u.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-12);
        }
        // Wide orientation gives the same answer.
        let wide = CMatrix::from_fn(3, 5, |r, k| x[r] * c(k as f64 + 1.0, -(k as f64)));
        let pair = top_left_singular_vector(&wide);
        for (a, b) in pair.u.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_matrix_flags_sigma() {
        let pair = top_left_singular_vector(&CMatrix::zeros(4, 3));
        assert_eq!(pair.sigma_max, 0.0);
        assert_eq!(pair.u[0], c(1.0, 0.0));
        let pair = top_left_singular_vector(&CMatrix::zeros(2, 6));
        assert_eq!(pair.sigma_max, 0.0);
        assert!((norm2(&pair.u) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phase_convention_skips_tiny_leading_entries() {
        let mut u = vec![c(1e-20, 1e-20), c(0.0, -0.6), c(0.8, 0.0)];
        fix_phase(&mut u);
        assert!(u[1].im.abs() < 1e-15 && u[1].re > 0.0);
    }
}
