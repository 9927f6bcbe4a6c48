//! Intersection points of two plane curves without common components.
//!
//! After a random integer change of coordinates, the curves are intersected
//! in the affine chart `y2 = 1`: the Sylvester resultant in `y0` is computed
//! in the input field (exactly for rational input), its roots give the `y1`
//! coordinates, and each candidate is completed and polished by Newton's
//! method on the 2×2 system before the coordinate change is undone.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Complex64, Field};
use crate::linalg::{Matrix, DEFAULT_TOL};
use crate::pointsets::{chordal_distance, unit_representative, ProjectivePoint};
use crate::poly::{monomial_count, monomials, TernaryForm};
use crate::roots::{aberth, eval_with_derivative, trim};

/// Intersection points closer than this are one point with multiplicity.
pub const CLUSTER_TOL: f64 = 1e-6;
const ATTEMPTS: usize = 6;
const NEWTON_ITERATIONS: usize = 50;
const ACCEPT_RESIDUAL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionPoint {
    pub point: ProjectivePoint<Complex64>,
    pub multiplicity: usize,
}

/// Columns are `x^γ F` for the exponents `γ` of degree `k`.
fn multiplication_matrix<T: Field>(f: &TernaryForm<T>, k: u32) -> Matrix<T> {
    let columns: Vec<Vec<T>> = monomials(k)
        .into_iter()
        .map(|g| (&TernaryForm::monomial(g, T::one()) * f).dense())
        .collect();
    Matrix::from_columns(monomial_count(f.degree() + k), &columns)
}

/// Greatest common factor of positive degree, scaled so its first nonzero
/// coefficient is 1, or `None` when the forms are coprime.
///
/// The forms share a factor of degree `e` exactly when `a F + b G = 0` has a
/// nonzero solution with `deg a = deg G - e` and `deg b = deg F - e`.
pub fn common_factor<T: Field>(f: &TernaryForm<T>, g: &TernaryForm<T>, tol: f64) -> Result<Option<TernaryForm<T>>> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::DegenerateConfiguration {
            reason: "zero curve",
        });
    }
    let (m, n) = (f.degree(), g.degree());
    for e in (1..=m.min(n)).rev() {
        let syzygies = multiplication_matrix(f, n - e)
            .hstack(&multiplication_matrix(g, m - e))
            .kernel_basis(tol);
        let Some(v) = syzygies.first() else {
            continue;
        };
        let split = monomial_count(n - e);
        let b = TernaryForm::from_dense(m - e, &v[split..]).expect("block has one entry per monomial");
        // F = h · (F / h) and b is proportional to F / h.
        let system = multiplication_matrix(&b, e).hstack(&Matrix::from_columns(monomial_count(m), &[f.dense()]));
        let kernel = system.kernel_basis(tol);
        let Some(w) = kernel.first() else {
            continue;
        };
        let h = &w[..monomial_count(e)];
        let lead = h
            .iter()
            .find(|c| !c.is_negligible(crate::linalg::vector_norm(h), tol))
            .cloned()
            .unwrap_or_else(T::one);
        let scaled: Vec<T> = h.iter().map(|c| c.clone() / lead.clone()).collect();
        return Ok(Some(TernaryForm::from_dense(e, &scaled).expect("block has one entry per monomial")));
    }
    Ok(None)
}

type Univariate<T> = Vec<T>;

fn poly_mul<T: Field>(a: &Univariate<T>, b: &Univariate<T>) -> Univariate<T> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = alloc::vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn poly_add<T: Field>(a: &Univariate<T>, b: &Univariate<T>) -> Univariate<T> {
    let mut out = alloc::vec![T::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, x) in b.iter().enumerate() {
        out[i] = out[i].clone() + x.clone();
    }
    out
}

/// Coefficients of `F(y0, y1, 1)` as a polynomial in `y0` whose coefficients
/// are polynomials in `y1`; entry `i` multiplies `y0^i`.
fn chart_coefficients<T: Field>(f: &TernaryForm<T>) -> Vec<Univariate<T>> {
    let m = f.degree() as usize;
    let mut out = alloc::vec![alloc::vec![T::zero(); m + 1]; m + 1];
    for (e, c) in f.terms() {
        out[e.0[0] as usize][e.0[1] as usize] = c.clone();
    }
    out
}

/// Determinant of a matrix of univariate polynomials, expanded over column
/// subsets row by row.
fn polynomial_determinant<T: Field>(m: &[Vec<Univariate<T>>]) -> Univariate<T> {
    let n = m.len();
    let mut table: Vec<Option<Univariate<T>>> = alloc::vec![None; 1 << n];
    table[0] = Some(alloc::vec![T::one()]);
    for mask in 0usize..(1 << n) {
        let Some(value) = table[mask].take() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        if row == n {
            return value;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 || m[row][col].iter().all(T::is_zero) {
                continue;
            }
            let mut term = poly_mul(&value, &m[row][col]);
            // Columns already used to the right of `col` form inversions.
            if (mask >> (col + 1)).count_ones() % 2 == 1 {
                term = term.into_iter().map(|c| -c).collect();
            }
            let slot = &mut table[mask | (1 << col)];
            *slot = Some(match slot.take() {
                Some(acc) => poly_add(&acc, &term),
                None => term,
            });
        }
        table[mask] = Some(value);
    }
    table[(1 << n) - 1].take().unwrap_or_default()
}

/// Resultant of `F(·, y1, 1)` and `G(·, y1, 1)` with respect to `y0`.
fn resultant_y0<T: Field>(f: &TernaryForm<T>, g: &TernaryForm<T>) -> Univariate<T> {
    let (a, b) = (chart_coefficients(f), chart_coefficients(g));
    let (m, n) = (f.degree() as usize, g.degree() as usize);
    let size = m + n;
    let mut sylvester = alloc::vec![alloc::vec![Vec::new(); size]; size];
    for r in 0..n {
        for i in 0..=m {
            sylvester[r][r + i] = a[m - i].clone();
        }
    }
    for r in 0..m {
        for i in 0..=n {
            sylvester[n + r][r + i] = b[n - i].clone();
        }
    }
    polynomial_determinant(&sylvester)
}

/// Random integer coordinate change with `|det|` at least a tenth of the
/// product of the row norms. Entries are large enough that the projection
/// centre avoids small-height points of the curves.
fn random_change(rng: &mut ChaCha8Rng) -> [[i64; 3]; 3] {
    loop {
        let g: [[i64; 3]; 3] = core::array::from_fn(|_| core::array::from_fn(|_| rng.gen_range(-99..=99)));
        let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
        let norms: f64 = g
            .iter()
            .map(|row| libm::sqrt(row.iter().map(|&x| (x * x) as f64).sum()))
            .product();
        if det != 0 && (det.abs() as f64) >= 0.1 * norms {
            return g;
        }
    }
}

fn apply(g: &[[i64; 3]; 3], y: &[Complex64; 3]) -> [Complex64; 3] {
    core::array::from_fn(|i| (0..3).map(|j| y[j] * g[i][j] as f64).sum())
}

/// Unit-norm curves and their gradients, for residuals measured at
/// unit-norm points.
struct Curve {
    form: TernaryForm<Complex64>,
    gradient: [TernaryForm<Complex64>; 3],
}

impl Curve {
    fn new<T: Field>(f: &TernaryForm<T>) -> Self {
        let form = f.to_complex().unit_normalized();
        let gradient = form.gradient();
        Curve { form, gradient }
    }

    fn gradient_at(&self, p: &[Complex64; 3]) -> [Complex64; 3] {
        core::array::from_fn(|i| self.gradient[i].evaluate(p))
    }
}

fn residual(curves: &[Curve; 2], x: &[Complex64; 3]) -> f64 {
    let u = unit_representative(x);
    curves.iter().map(|c| c.form.evaluate(&u).norm()).fold(0.0, f64::max)
}

/// `|∇F × ∇G| / (|∇F| |∇G|)` at `p`; zero when either gradient vanishes.
fn transversality(curves: &[Curve; 2], p: &[Complex64; 3]) -> f64 {
    let a = curves[0].gradient_at(p);
    let b = curves[1].gradient_at(p);
    let na = libm::sqrt(a.iter().map(Complex64::norm_sqr).sum());
    let nb = libm::sqrt(b.iter().map(Complex64::norm_sqr).sum());
    if na < 1e-8 || nb < 1e-8 {
        return 0.0;
    }
    chordal_distance(&a, &b)
}

/// Polishes `(y0, y1)` on the chart `y2 = 1` of the transformed curves.
fn newton(local: &[Curve; 2], curves: &[Curve; 2], g: &[[i64; 3]; 3], mut y: [Complex64; 2]) -> ([Complex64; 3], f64) {
    let one = Complex64::new(1.0, 0.0);
    let point = |y: &[Complex64; 2]| apply(g, &[y[0], y[1], one]);
    let mut best = (y, residual(curves, &point(&y)));
    for _ in 0..NEWTON_ITERATIONS {
        let p = [y[0], y[1], one];
        let f = [local[0].form.evaluate(&p), local[1].form.evaluate(&p)];
        let ga = local[0].gradient_at(&p);
        let gb = local[1].gradient_at(&p);
        let det = ga[0] * gb[1] - ga[1] * gb[0];
        if det.norm() == 0.0 {
            break;
        }
        let d0 = (f[0] * gb[1] - f[1] * ga[1]) / det;
        let d1 = (ga[0] * f[1] - gb[0] * f[0]) / det;
        if !(d0.is_finite() && d1.is_finite()) {
            break;
        }
        y = [y[0] - d0, y[1] - d1];
        let scale = 1.0 + y[0].norm().max(y[1].norm());
        let step = d0.norm().max(d1.norm()) / scale;
        let r = residual(curves, &point(&y));
        if r < best.1 {
            best = (y, r);
        }
        if r <= 1e-13 && step <= 1e-12 {
            break;
        }
    }
    let y = best.0;
    let x = point(&y);
    (x, residual(curves, &x))
}

/// `q` rescaled by a unit complex number so that `<p, q>` is real and nonnegative.
fn align_phase(p: &[Complex64; 3], q: &[Complex64; 3]) -> [Complex64; 3] {
    let inner: Complex64 = (0..3).map(|i| p[i] * q[i].conj()).sum();
    if inner.norm() == 0.0 {
        return *q;
    }
    let phase = inner / inner.norm();
    q.map(|c| c * phase)
}

/// Candidates within the cluster radius, or farther apart but with both
/// curves still vanishing at their midpoint. A point of multiplicity `k`
/// can only be polished to roughly the `k`-th root of the rounding error,
/// so its candidates scatter beyond the radius.
fn same_intersection(curves: &[Curve; 2], p: &[Complex64; 3], q: &[Complex64; 3]) -> bool {
    let d = chordal_distance(p, q);
    if d < CLUSTER_TOL {
        return true;
    }
    if d > 1e-3 {
        return false;
    }
    let q = align_phase(p, q);
    let mid: [Complex64; 3] = core::array::from_fn(|i| (p[i] + q[i]) * 0.5);
    residual(curves, &mid) < ACCEPT_RESIDUAL
}

fn cluster_center(members: &[[Complex64; 3]]) -> [Complex64; 3] {
    let first = members[0];
    let mut sum = [Complex64::new(0.0, 0.0); 3];
    for m in members {
        let m = align_phase(&first, m);
        for i in 0..3 {
            sum[i] += m[i];
        }
    }
    unit_representative(&sum)
}

fn attempt<T: Field>(f: &TernaryForm<T>, g: &TernaryForm<T>, curves: &[Curve; 2], rng: &mut ChaCha8Rng) -> Option<Vec<IntersectionPoint>> {
    let change = random_change(rng);
    let phase: f64 = rng.gen_range(0.0..1.0);
    let gt: [[T; 3]; 3] = change.map(|row| row.map(T::from_i64));
    let (fy, gy) = (f.substitute_linear(&gt), g.substitute_linear(&gt));
    let expected = (f.degree() * g.degree()) as usize;
    let res: Vec<Complex64> = resultant_y0(&fy, &gy).iter().map(Field::to_complex).collect();
    let res = trim(&res, 1e-12);
    if res.len() != expected + 1 {
        return None;
    }
    let max = res.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let res: Vec<Complex64> = res.iter().map(|c| c / max).collect();
    let local = [Curve::new(&fy), Curve::new(&gy)];
    let fy_chart: Vec<Vec<Complex64>> = chart_coefficients(&local[0].form);
    let lead = fy_chart[fy.degree() as usize][0];
    if lead.norm() < 1e-10 {
        return None;
    }
    let mut found: Vec<([Complex64; 3], f64)> = Vec::with_capacity(expected);
    for t in aberth(&res, phase) {
        let univariate: Vec<Complex64> = fy_chart.iter().map(|c| eval_with_derivative(c, t).0).collect();
        let y0 = aberth(&univariate, phase)
            .into_iter()
            .map(|s| (s, local[1].form.evaluate(&[s, t, Complex64::new(1.0, 0.0)]).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?
            .0;
        let (x, r) = newton(&local, curves, &change, [y0, t]);
        if !(r < ACCEPT_RESIDUAL) {
            return None;
        }
        found.push((unit_representative(&x), r));
    }
    let mut clusters: Vec<Vec<[Complex64; 3]>> = Vec::new();
    for (x, _) in found {
        match clusters.iter_mut().find(|c| same_intersection(curves, &c[0], &x)) {
            Some(c) => c.push(x),
            None => clusters.push(alloc::vec![x]),
        }
    }
    let clusters: Vec<([Complex64; 3], usize)> = clusters.iter().map(|c| (cluster_center(c), c.len())).collect();
    if clusters.iter().map(|c| c.1).sum::<usize>() != expected {
        return None;
    }
    // Two candidates polished onto one transversal point means another point was missed.
    if clusters.iter().any(|c| c.1 > 1 && transversality(curves, &c.0) > 1e-5) {
        return None;
    }
    clusters
        .into_iter()
        .map(|(x, multiplicity)| {
            Some(IntersectionPoint {
                point: ProjectivePoint::new(x).ok()?,
                multiplicity,
            })
        })
        .collect()
}

/// Intersection of two coprime curves, with multiplicities summing to the
/// product of the degrees. The seed fixes the random coordinate changes.
pub fn intersect_curves<T: Field>(f: &TernaryForm<T>, g: &TernaryForm<T>, seed: u64) -> Result<Vec<IntersectionPoint>> {
    if f.degree() == 0 || g.degree() == 0 {
        return Err(Error::DegenerateConfiguration {
            reason: "constant curve",
        });
    }
    if common_factor(f, g, DEFAULT_TOL)?.is_some() {
        return Err(Error::PositiveDimensional);
    }
    let curves = [Curve::new(f), Curve::new(g)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        if let Some(points) = attempt(f, g, &curves, &mut rng) {
            return Ok(points);
        }
    }
    Err(Error::IllConditioned { attempts: ATTEMPTS })
}

/// The nine intersection points of two cubics, with multiplicity.
pub fn intersect_cubics<T: Field>(c1: &TernaryForm<T>, c2: &TernaryForm<T>, seed: u64) -> Result<Vec<IntersectionPoint>> {
    for c in [c1, c2] {
        if c.degree() != 3 {
            return Err(Error::WrongDegree {
                expected: 3,
                found: c.degree(),
            });
        }
    }
    intersect_curves(c1, c2, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ratio, Rational};
    use crate::pointsets::matching_distance;
    use crate::poly::Exponent;
    use core::f64::consts::PI;

    fn q(p: i64) -> Rational {
        ratio(p, 1)
    }

    fn m(e: [u32; 3], c: i64) -> TernaryForm<Rational> {
        TernaryForm::monomial(Exponent(e), q(c))
    }

    fn cubic(seed: i64) -> TernaryForm<Rational> {
        let v: Vec<Rational> = (0..10).map(|i| ratio((i * 7 + seed * 13) % 11 - 5, (i + seed) % 4 + 1)).collect();
        TernaryForm::from_dense(3, &v).unwrap()
    }

    fn check_residuals(f: &TernaryForm<Rational>, g: &TernaryForm<Rational>, pts: &[IntersectionPoint]) {
        let (fu, gu) = (f.to_complex().unit_normalized(), g.to_complex().unit_normalized());
        for p in pts {
            let u = p.point.unit();
            assert!(fu.evaluate(&u).norm() < 1e-10);
            assert!(gu.evaluate(&u).norm() < 1e-10);
        }
    }

    #[test]
    fn shared_linear_factor() {
        let x0 = m([1, 0, 0], 1);
        let f = &x0 * &(&m([2, 0, 0], 1) + &m([0, 1, 1], 3));
        let g = &x0 * &(&m([0, 2, 0], 2) - &m([1, 0, 1], 1));
        assert_eq!(common_factor(&f, &g, 0.0).unwrap(), Some(x0.clone()));
        let h = common_factor(&f.to_complex(), &g.to_complex(), DEFAULT_TOL).unwrap().unwrap();
        assert!((&h - &x0.to_complex()).norm() < 1e-10);
        assert_eq!(intersect_cubics(&f, &g, 1), Err(Error::PositiveDimensional));
    }

    #[test]
    fn coprime_cubics() {
        let f = &m([3, 0, 0], 1) - &m([0, 3, 0], 1);
        let g = &m([0, 3, 0], 1) - &m([0, 0, 3], 1);
        assert_eq!(common_factor(&f, &g, 0.0).unwrap(), None);
        assert_eq!(common_factor(&cubic(1), &cubic(2), 0.0).unwrap(), None);
    }

    #[test]
    fn quadratic_factor() {
        let q2 = &m([2, 0, 0], 1) + &m([0, 1, 1], 1);
        let f = &q2 * &m([0, 0, 1], 1);
        let g = &q2 * &(&m([1, 0, 0], 1) + &m([0, 1, 0], 2));
        assert_eq!(common_factor(&f, &g, 0.0).unwrap(), Some(q2));
    }

    #[test]
    fn roots_of_unity_grid() {
        let f = &m([3, 0, 0], 1) - &m([0, 0, 3], 1);
        let g = &m([0, 3, 0], 1) - &m([0, 0, 3], 1);
        let pts = intersect_cubics(&f, &g, 7).unwrap();
        assert_eq!(pts.len(), 9);
        assert!(pts.iter().all(|p| p.multiplicity == 1));
        let w = |k: usize| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
        let expected: Vec<[Complex64; 3]> = (0..9).map(|k| unit_representative(&[w(k / 3), w(k % 3), Complex64::new(1.0, 0.0)])).collect();
        let got: Vec<[Complex64; 3]> = pts.iter().map(|p| p.point.unit()).collect();
        assert!(matching_distance(&got, &expected) < 1e-10);
        check_residuals(&f, &g, &pts);
    }

    #[test]
    fn triple_lines_meet_once() {
        let pts = intersect_cubics(&m([3, 0, 0], 1), &m([0, 3, 0], 1), 3).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].multiplicity, 9);
        let e = [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(chordal_distance(&pts[0].point.unit(), &e) < 1e-5);
    }

    #[test]
    fn random_cubics_meet_in_nine_points() {
        for s in 0..5 {
            let (f, g) = (cubic(2 * s + 1), cubic(2 * s + 2));
            let pts = intersect_cubics(&f, &g, s as u64).unwrap();
            assert_eq!(pts.len(), 9);
            check_residuals(&f, &g, &pts);
        }
    }

    #[test]
    fn cubic_and_quartic() {
        let f = cubic(3);
        let g = &(&m([4, 0, 0], 1) - &m([0, 2, 2], 3)) + &(&m([1, 1, 1], 1) * &m([0, 1, 0], 2));
        let pts = intersect_curves(&f, &g, 11).unwrap();
        assert_eq!(pts.iter().map(|p| p.multiplicity).sum::<usize>(), 12);
        check_residuals(&f, &g, &pts);
    }

    #[test]
    fn equivariance_under_coordinate_change() {
        let (f, g) = (cubic(5), cubic(6));
        let a = [[q(1), q(2), q(0)], [q(0), q(1), q(-1)], [q(1), q(0), q(1)]];
        let fa = f.substitute_linear(&a);
        let ga = g.substitute_linear(&a);
        let base: Vec<[Complex64; 3]> = intersect_cubics(&f, &g, 0).unwrap().iter().map(|p| p.point.unit()).collect();
        // Points of F∘A are A^-1 applied to points of F, so A maps them back.
        let moved: Vec<[Complex64; 3]> = intersect_cubics(&fa, &ga, 9)
            .unwrap()
            .iter()
            .map(|p| {
                let y = p.point.unit();
                core::array::from_fn(|i| (0..3).map(|j| y[j] * a[i][j].to_complex()).sum())
            })
            .collect();
        assert!(matching_distance(&base, &moved) < 1e-6);
    }

    #[test]
    fn wrong_degree() {
        assert_eq!(
            intersect_cubics(&m([2, 0, 0], 1), &cubic(1), 0),
            Err(Error::WrongDegree { expected: 3, found: 2 })
        );
    }

    #[test]
    fn resultant_of_lines() {
        // x0 - x1 and x0 + x1 - 2 x2 meet at (1 : 1 : 1); the resultant vanishes at y1 = 1.
        let f = &m([1, 0, 0], 1) - &m([0, 1, 0], 1);
        let g = &(&m([1, 0, 0], 1) + &m([0, 1, 0], 1)) - &m([0, 0, 1], 2);
        let r = resultant_y0(&f, &g);
        let value = r.iter().cloned().fold(q(0), |a, b| a + b);
        assert_eq!(value, q(0));
    }
}
