//! The 36×36 Young flattening `P_f` of a sextic, its 27×27 restriction `A_f`
//! and the degree-27 invariant `H27 = det A_f`.
//!
//! `P_f` has 6×6 blocks indexed by pairs of degree-2 monomials; block `(i, j)`
//! is the order-2 catalecticant of the quartic `B_ij(∂) F`. Row `6i + a` and
//! column `6j + b` carry the entry `∂^(α_a + α_b) B_ij(∂) F`.
//!
//! `A_f` is the congruence restriction `Qᵀ P_f Q` to the orthogonal complement
//! of the nine derivation vectors `D_E`, `E ∈ gl(3)`, acting on quadrics. In
//! the 36-vector layout entry `6i + a` of `D_E` is the coefficient of the
//! `a`-th monomial in `D_E(m_i)`. `P_f` annihilates these vectors, so `A_f`
//! carries all of its rank. `Q` is the exact rational kernel basis of the
//! derivation vectors, computed once.

use alloc::boxed::Box;
use alloc::vec::Vec;

use once_cell::race::OnceBox;

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::linalg::{float, Matrix};
use crate::poly::{apply_operator, monomials, Exponent, TernaryForm};

/// Nonzero entries of the symmetric operator matrix `B`, rows and columns in
/// the order `z0², z0z1, z0z2, z1², z1z2, z2²`, as `(row, column, exponent, coefficient)`.
const B_ENTRIES: [(usize, usize, [u32; 3], i64); 21] = [
    (0, 3, [0, 0, 2], 1),
    (0, 4, [0, 1, 1], -2),
    (0, 5, [0, 2, 0], 1),
    (1, 1, [0, 0, 2], -2),
    (1, 2, [0, 1, 1], 2),
    (1, 4, [1, 0, 1], 2),
    (1, 5, [1, 1, 0], -2),
    (2, 1, [0, 1, 1], 2),
    (2, 2, [0, 2, 0], -2),
    (2, 3, [1, 0, 1], -2),
    (2, 4, [1, 1, 0], 2),
    (3, 0, [0, 0, 2], 1),
    (3, 2, [1, 0, 1], -2),
    (3, 5, [2, 0, 0], 1),
    (4, 0, [0, 1, 1], -2),
    (4, 1, [1, 0, 1], 2),
    (4, 2, [1, 1, 0], 2),
    (4, 4, [2, 0, 0], -2),
    (5, 0, [0, 2, 0], 1),
    (5, 1, [1, 1, 0], -2),
    (5, 3, [2, 0, 0], 1),
];

/// The 6×6 matrix of quadratic operators; unlisted entries are zero.
pub fn b_matrix<T: Field>() -> Vec<Vec<TernaryForm<T>>> {
    let mut b = alloc::vec![alloc::vec![TernaryForm::zero(2); 6]; 6];
    for &(i, j, e, c) in &B_ENTRIES {
        b[i][j] = TernaryForm::monomial(Exponent(e), T::from_i64(c));
    }
    b
}

fn require_sextic<T: Field>(form: &TernaryForm<T>) -> Result<()> {
    if form.degree() != 6 {
        return Err(Error::WrongDegree {
            expected: 6,
            found: form.degree(),
        });
    }
    Ok(())
}

pub fn build_pf<T: Field>(form: &TernaryForm<T>) -> Result<Matrix<T>> {
    require_sextic(form)?;
    let quad = monomials(2);
    let b = b_matrix::<T>();
    let mut p = Matrix::zeros(36, 36);
    for i in 0..6 {
        for j in 0..6 {
            if b[i][j].is_zero() {
                continue;
            }
            let quartic = apply_operator(&b[i][j], form)?;
            for (a, ea) in quad.iter().enumerate() {
                for (bb, eb) in quad.iter().enumerate() {
                    let e = ea.plus(eb);
                    let c = quartic.coefficient(&e);
                    if !c.is_zero() {
                        p[(6 * i + a, 6 * j + bb)] = c * T::from_i64(e.factorial() as i64);
                    }
                }
            }
        }
    }
    Ok(p)
}

/// 36×9 matrix whose column `3a + b` is the derivation vector of the
/// elementary matrix `E_ab` (sending `x_b` to `x_a`).
pub fn derivation_matrix<T: Field>() -> Matrix<T> {
    let quad = monomials(2);
    let mut d = Matrix::zeros(36, 9);
    for a in 0..3 {
        for b in 0..3 {
            for (i, e) in quad.iter().enumerate() {
                if e.0[b] == 0 {
                    continue;
                }
                let mut image = *e;
                image.0[b] -= 1;
                image.0[a] += 1;
                let slot: &mut T = &mut d[(6 * i + image.index(), 3 * a + b)];
                *slot = slot.clone() + T::from_i64(i64::from(e.0[b]));
            }
        }
    }
    d
}

static COMPLEMENT: OnceBox<Matrix<Rational>> = OnceBox::new();
static REFERENCE: OnceBox<f64> = OnceBox::new();

/// 36×27 rational basis of the orthogonal complement of the derivation vectors.
pub fn complement_basis() -> &'static Matrix<Rational> {
    COMPLEMENT.get_or_init(|| {
        let d = derivation_matrix::<Rational>().transpose();
        let kernel = d.kernel_basis(0.0);
        Box::new(Matrix::from_columns(36, &kernel))
    })
}

fn complement_in<T: Field>() -> Matrix<T> {
    complement_basis().map(T::from_rational)
}

/// `P_f` together with its restriction `A_f = Qᵀ P_f Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatteningMatrix<T> {
    pub p: Matrix<T>,
    pub a: Matrix<T>,
}

impl<T: Field> FlatteningMatrix<T> {
    pub fn new(form: &TernaryForm<T>) -> Result<Self> {
        let p = build_pf(form)?;
        let q = complement_in::<T>();
        let a = q.transpose().mul(&p).mul(&q);
        Ok(FlatteningMatrix { p, a })
    }
}

pub fn build_af<T: Field>(form: &TernaryForm<T>) -> Result<Matrix<T>> {
    Ok(FlatteningMatrix::new(form)?.a)
}

/// `det A_f`, defined up to the fixed constant of the chosen complement basis.
pub fn h27<T: Field>(form: &TernaryForm<T>) -> Result<T> {
    build_af(form)?.determinant()
}

/// `|H27(F)| / ‖F‖^27` relative to the same quantity for `(x0 x1 x2)²`;
/// zero for the zero form.
pub fn h27_normalized<T: Field>(form: &TernaryForm<T>) -> Result<f64> {
    require_sextic(form)?;
    Ok(raw_normalized(form)? / *REFERENCE.get_or_init(|| {
        let w = TernaryForm::<Rational>::monomial(Exponent::new(2, 2, 2), Rational::from_integer(1.into()));
        Box::new(raw_normalized(&w).expect("reference form is a sextic"))
    }))
}

fn raw_normalized<T: Field>(form: &TernaryForm<T>) -> Result<f64> {
    let max = form.terms().map(|(_, c)| c.magnitude()).fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(0.0);
    }
    // Divide by the largest coefficient first so that the determinant stays
    // within double range.
    let largest = form
        .terms()
        .map(|(_, c)| c.clone())
        .max_by(|a, b| a.magnitude().total_cmp(&b.magnitude()))
        .expect("nonzero form has a term");
    let scaled = form.scale(&(T::one() / largest));
    let det = h27(&scaled)?.magnitude();
    Ok(det * libm::pow(max / form.norm(), 27.0))
}

/// `σ_min / σ_max` of `A_f`, computed in floating point.
pub fn h27_gap<T: Field>(form: &TernaryForm<T>) -> Result<f64> {
    let sv = float::singular_values(&build_af(&form.to_complex())?);
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(0.0);
    }
    Ok(sv.iter().copied().fold(f64::INFINITY, f64::min) / max)
}

/// Exact zero test for rational input; `h27_gap < tol` otherwise.
///
/// The determinant itself spans dozens of orders of magnitude over generic
/// forms, so the float test uses the singular value gap instead.
pub fn h27_vanishes<T: Field>(form: &TernaryForm<T>, tol: f64) -> Result<bool> {
    if T::EXACT {
        Ok(h27(form)?.is_zero())
    } else {
        Ok(h27_gap(form)? < tol)
    }
}
