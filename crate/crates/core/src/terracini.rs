//! Determinants attached to nine or ten points of the plane: the cubic
//! determinant `C`, the Terracini matrix `T`, the 28×28 determinant `R` and
//! the nonic `N = R / C²`.
//!
//! `C`, `T` and `R` accept raw coordinates in any field. `N` and the `λ`
//! check work with unit-norm complex representatives, since the
//! multihomogeneous degrees make raw magnitudes meaningless.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Complex64, Field};
use crate::flattening::h27;
use crate::linalg::{Matrix, DEFAULT_TOL};
use crate::pointsets::unit_representative;
use crate::poly::{monomials, TernaryForm};

const AUX_CANDIDATES: usize = 12;
const QUOTIENT_TOL: f64 = 1e-8;

fn require<T>(points: &[T], expected: usize) -> Result<()> {
    if points.len() != expected {
        return Err(Error::WrongCardinality {
            expected,
            found: points.len(),
        });
    }
    Ok(())
}

fn monomial_row<T: Field>(p: &[T; 3], d: u32) -> Vec<T> {
    monomials(d).iter().map(|e| e.value_at(p)).collect()
}

/// Rows of the Jacobian of the degree-`d` monomials at `p`.
fn jacobian_rows<T: Field>(p: &[T; 3], d: u32) -> [Vec<T>; 3] {
    let basis = monomials(d);
    core::array::from_fn(|k| {
        basis
            .iter()
            .map(|e| {
                if e.0[k] == 0 {
                    return T::zero();
                }
                let mut lower = *e;
                lower.0[k] -= 1;
                T::from_i64(i64::from(e.0[k])) * lower.value_at(p)
            })
            .collect()
    })
}

/// `det` of the 10×10 matrix of cubic monomials at the points; zero exactly
/// when the ten points lie on a cubic.
pub fn cubic_det<T: Field>(points: &[[T; 3]]) -> Result<T> {
    require(points, 10)?;
    let rows: Vec<Vec<T>> = points.iter().map(|p| monomial_row(p, 3)).collect();
    Matrix::from_rows(&rows, 10).determinant()
}

/// The 27×28 matrix stacking the Jacobians of the sextic monomials at nine points.
/// Its kernel is the space of sextics singular at all of them.
pub fn terracini_matrix<T: Field>(points: &[[T; 3]]) -> Result<Matrix<T>> {
    require(points, 9)?;
    let rows: Vec<Vec<T>> = points.iter().flat_map(|p| jacobian_rows(p, 6)).collect();
    Ok(Matrix::from_rows(&rows, 28))
}

/// `det` of the Terracini matrix with the sextic monomials at `p10` appended.
pub fn r_det<T: Field>(points: &[[T; 3]], p10: &[T; 3]) -> Result<T> {
    let t = terracini_matrix(points)?;
    let last = Matrix::from_rows(&[monomial_row(p10, 6)], 28);
    t.vstack(&last).determinant()
}

fn units(points: &[[Complex64; 3]]) -> Vec<[Complex64; 3]> {
    points.iter().map(unit_representative).collect()
}

fn with_tenth(points: &[[Complex64; 3]], q: &[Complex64; 3]) -> Vec<[Complex64; 3]> {
    let mut all = points.to_vec();
    all.push(*q);
    all
}

/// Value of `N` with the two auxiliary points used to compute it.
#[derive(Clone, Debug, PartialEq)]
pub struct NEvaluation {
    pub value: Complex64,
    pub aux: [[Complex64; 3]; 2],
    /// Relative disagreement of the two quotients.
    pub gap: f64,
}

fn require_unique_cubic(points: &[[Complex64; 3]]) -> Result<()> {
    let rows: Vec<Vec<Complex64>> = points.iter().map(|p| monomial_row(p, 3)).collect();
    let rank = Matrix::from_rows(&rows, 10).rank(DEFAULT_TOL);
    if rank < 9 {
        return Err(Error::DegenerateCubicSystem { dimension: 10 - rank });
    }
    Ok(())
}

fn quotient(points: &[[Complex64; 3]], q: &[Complex64; 3]) -> Result<Complex64> {
    let c = cubic_det(&with_tenth(points, q))?;
    Ok(r_det(points, q)? / (c * c))
}

/// `R(p; q) / C(p, q)²` at two auxiliary points, which must agree.
pub fn n_value_at(points: &[[Complex64; 3]], aux: [[Complex64; 3]; 2]) -> Result<NEvaluation> {
    require(points, 9)?;
    let p = units(points);
    require_unique_cubic(&p)?;
    let aux = aux.map(|q| unit_representative(&q));
    let a = quotient(&p, &aux[0])?;
    let b = quotient(&p, &aux[1])?;
    let gap = (a - b).norm() / a.norm().max(b.norm());
    if !(gap <= QUOTIENT_TOL) {
        return Err(Error::InconsistentQuotient { gap });
    }
    Ok(NEvaluation {
        value: (a + b) * 0.5,
        aux,
        gap,
    })
}

/// `N` at the unit representatives of the nine points. The auxiliary points
/// are the two seeded random candidates farthest from the cubic through the
/// nine points.
pub fn n_value(points: &[[Complex64; 3]], seed: u64) -> Result<NEvaluation> {
    require(points, 9)?;
    let p = units(points);
    require_unique_cubic(&p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<([Complex64; 3], f64)> = (0..AUX_CANDIDATES)
        .map(|_| {
            let q = unit_representative(&random_real_point(&mut rng));
            let c = cubic_det(&with_tenth(&p, &q)).map(|c| c.norm()).unwrap_or(0.0);
            (q, c)
        })
        .collect();
    candidates.sort_by(|a, b| b.1.total_cmp(&a.1));
    n_value_at(&p, [candidates[0].0, candidates[1].0])
}

/// Uniform point of the cube `[-1, 1]^3`, as complex coordinates.
pub fn random_real_point(rng: &mut ChaCha8Rng) -> [Complex64; 3] {
    core::array::from_fn(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
}

/// `H27(Σ p_i^6)` against `N(p)²` at unit representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaCheck {
    pub lambda: Complex64,
    pub h27: Complex64,
    pub n: Complex64,
    /// Always zero for one configuration; spread is measured across calls.
    pub relative_residual: f64,
}

pub fn check_lambda_n_squared(points: &[[Complex64; 3]], seed: u64) -> Result<LambdaCheck> {
    let n = n_value(points, seed)?.value;
    let h = h27(&power_sum(&units(points))?)?;
    Ok(LambdaCheck {
        lambda: h / (n * n),
        h27: h,
        n,
        relative_residual: 0.0,
    })
}

/// `Σ p_i^6`.
pub fn power_sum(points: &[[Complex64; 3]]) -> Result<TernaryForm<Complex64>> {
    points.iter().try_fold(TernaryForm::zero(6), |acc, p| {
        Ok(&acc + &TernaryForm::power_of_linear(p, 6)?)
    })
}

/// Finds a real ninth point on `N(p1..p8, ·) = 0` along a random real
/// projective line, by scanning for a sign change of `Re N` and bisecting.
/// Every line has one: `N` is odd of degree 9 in the moving point.
pub fn sample_on_nonic(points: &[[Complex64; 3]], seed: u64) -> Result<[Complex64; 3]> {
    require(points, 8)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..3 {
        let (q0, q1) = orthonormal_pair(&mut rng);
        let at = |theta: f64| -> [Complex64; 3] { core::array::from_fn(|i| q0[i] * libm::cos(theta) + q1[i] * libm::sin(theta)) };
        let mut base = points.to_vec();
        base.push(at(0.0));
        let aux = n_value(&base, seed)?.aux;
        // Near a root the two quotients lose relative agreement, so the
        // scan uses the first auxiliary point alone.
        let eval = |theta: f64| -> Option<f64> {
            let all = units(&with_tenth(points, &at(theta)));
            quotient(&all, &aux[0]).ok().map(|n| n.re).filter(|v| v.is_finite())
        };
        let steps = 64;
        let pi = core::f64::consts::PI;
        let mut previous = (0.0, eval(0.0));
        for k in 1..=steps {
            let theta = pi * k as f64 / steps as f64;
            let value = eval(theta);
            if let (Some(a), Some(b)) = (previous.1, value) {
                if a == 0.0 {
                    return Ok(at(previous.0));
                }
                if a.signum() != b.signum() {
                    if let Some(root) = bisect(&eval, previous.0, theta, a) {
                        return Ok(at(root));
                    }
                }
            }
            previous = (theta, value);
        }
    }
    Err(Error::NoSolution { dimension: 0 })
}

fn bisect(eval: &impl Fn(f64) -> Option<f64>, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Option<f64> {
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let f_mid = eval(mid)?;
        if f_mid == 0.0 {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Some(0.5 * (lo + hi))
}

fn orthonormal_pair(rng: &mut ChaCha8Rng) -> ([Complex64; 3], [Complex64; 3]) {
    loop {
        let a: [f64; 3] = core::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let b: [f64; 3] = core::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let na = libm::sqrt(a.iter().map(|x| x * x).sum());
        if na < 0.1 {
            continue;
        }
        let a = a.map(|x| x / na);
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let b: [f64; 3] = core::array::from_fn(|i| b[i] - dot * a[i]);
        let nb = libm::sqrt(b.iter().map(|x| x * x).sum());
        if nb < 0.1 {
            continue;
        }
        return (a.map(|x| Complex64::new(x, 0.0)), b.map(|x| Complex64::new(x / nb, 0.0)));
    }
}
