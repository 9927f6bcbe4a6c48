//! Catalecticant matrices and graded slices of the apolar ideal.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::poly::{monomials, TernaryForm};

/// Matrix of `D ↦ D(∂)F` from degree-`k` operators to degree-`(d - k)` forms.
///
/// Rows are indexed by degree-`(d - k)` exponents `β`, columns by degree-`k`
/// exponents `α`, and the entry is the constant `∂^(α+β) F`. Row `β` of
/// `matrix · v` is therefore `β!` times the coefficient of `x^β` in
/// `v(∂)F`, so the right kernel is exactly `F^⊥_k`. At `2k = d` the matrix
/// is symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalecticantMatrix<T> {
    pub order: u32,
    pub degree: u32,
    pub matrix: Matrix<T>,
}

pub fn catalecticant<T: Field>(form: &TernaryForm<T>, k: u32) -> Result<CatalecticantMatrix<T>> {
    let d = form.degree();
    if k > d {
        return Err(Error::OrderOutOfRange { order: k, degree: d });
    }
    let rows = monomials(d - k);
    let cols = monomials(k);
    let matrix = Matrix::from_fn(rows.len(), cols.len(), |i, j| {
        let e = rows[i].plus(&cols[j]);
        let c = form.coefficient(&e);
        if c.is_zero() {
            c
        } else {
            c * T::from_i64(e.factorial() as i64)
        }
    });
    Ok(CatalecticantMatrix {
        order: k,
        degree: d,
        matrix,
    })
}

impl<T: Field> CatalecticantMatrix<T> {
    pub fn rank(&self, tol: f64) -> usize {
        self.matrix.rank(tol)
    }

    /// The kernel as dual forms of degree `k`.
    pub fn kernel_forms(&self, tol: f64) -> Vec<TernaryForm<T>> {
        self.matrix
            .kernel_basis(tol)
            .into_iter()
            .map(|v| TernaryForm::from_dense(self.order, &v).expect("kernel vector has one entry per monomial"))
            .collect()
    }
}

/// Basis of `F^⊥_k`.
pub fn apolar_component<T: Field>(form: &TernaryForm<T>, k: u32, tol: f64) -> Result<Vec<TernaryForm<T>>> {
    Ok(catalecticant(form, k)?.kernel_forms(tol))
}

/// Projective dimension of the `k`-polar space; `-1` for the zero form.
pub fn polar_dim<T: Field>(form: &TernaryForm<T>, k: u32, tol: f64) -> Result<i64> {
    Ok(catalecticant(form, k)?.rank(tol) as i64 - 1)
}
