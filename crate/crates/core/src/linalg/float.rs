//! Tolerance-based linear algebra over double-precision complex numbers,
//! backed by nalgebra's SVD, LU and column-pivoted QR.
//!
//! Rank and kernel equilibrate rows first (each row divided by its largest
//! entry). Row scaling leaves both the rank and the right null space
//! unchanged, and it keeps evaluation matrices of points with very different
//! coordinate sizes comparable.

const NOISE: f64 = 1e-12;

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::Matrix;
use crate::field::Complex64;

fn to_nalgebra(m: &Matrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// Rows at roundoff level relative to the whole matrix are zeroed instead
/// of being scaled up.
fn equilibrated(m: &Matrix<Complex64>) -> DMatrix<Complex64> {
    let mut a = to_nalgebra(m);
    let global = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for mut row in a.row_iter_mut() {
        let max = row.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if max <= NOISE * global {
            row.fill(Complex64::new(0.0, 0.0));
        } else {
            row /= Complex64::new(max, 0.0);
        }
    }
    a
}

/// Singular values of `m`, in descending order.
pub fn singular_values(m: &Matrix<Complex64>) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn rank(m: &Matrix<Complex64>, tol: f64) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let s = equilibrated(m).singular_values();
    let max = s.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol * max).count()
}

pub fn kernel(m: &Matrix<Complex64>, tol: f64) -> Vec<Vec<Complex64>> {
    let cols = m.cols();
    if cols == 0 {
        return Vec::new();
    }
    // Pad with zero rows so the SVD returns a full set of right vectors.
    let rows = m.rows().max(cols);
    let mut a = DMatrix::<Complex64>::zeros(rows, cols);
    if m.rows() > 0 {
        a.view_mut((0, 0), (m.rows(), cols)).copy_from(&equilibrated(m));
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut basis = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if max == 0.0 || s <= tol * max {
            basis.push(v_t.row(k).iter().map(|z| z.conj()).collect());
        }
    }
    basis
}

pub fn determinant(m: &Matrix<Complex64>) -> Complex64 {
    to_nalgebra(m).lu().determinant()
}

/// Result of a least-squares solve.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub solution: Vec<Complex64>,
    /// 2-norm of `M x - b`.
    pub residual: f64,
}

/// Minimizes `|M x - b|` with a column-pivoted QR factorization.
///
/// Columns whose pivot falls below `1e-13` of the leading pivot are treated
/// as dependent and receive a zero coefficient.
pub fn solve_least_squares(m: &Matrix<Complex64>, b: &[Complex64]) -> LeastSquares {
    assert_eq!(m.rows(), b.len(), "right-hand side has the wrong length");
    let a = to_nalgebra(m);
    let n = m.cols();
    // Columns are equilibrated; the rank cutoff is relative to the scaled R.
    let scale: Vec<f64> = (0..n)
        .map(|j| {
            let norm = a.column(j).norm();
            if norm > 0.0 { 1.0 / norm } else { 1.0 }
        })
        .collect();
    let mut scaled = a.clone();
    for (j, s) in scale.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*s);
    }
    let qr = scaled.col_piv_qr();
    let mut y = DVector::from_column_slice(b);
    qr.q_tr_mul(&mut y);
    let r = qr.r();
    let k = r.nrows().min(n);
    let lead = if k > 0 { r[(0, 0)].norm() } else { 0.0 };
    let rank = (0..k)
        .take_while(|&i| lead > 0.0 && r[(i, i)].norm() > 1e-13 * lead)
        .count();
    let mut z = DVector::<Complex64>::zeros(n);
    for i in (0..rank).rev() {
        let mut acc = y[i];
        for j in i + 1..rank {
            acc -= r[(i, j)] * z[j];
        }
        z[i] = acc / r[(i, i)];
    }
    qr.p().inv_permute_rows(&mut z);
    for (j, s) in scale.iter().enumerate() {
        z[j] *= *s;
    }
    let x = z;
    let defect = &a * &x - DVector::from_column_slice(b);
    LeastSquares {
        solution: x.iter().copied().collect(),
        residual: defect.norm(),
    }
}
