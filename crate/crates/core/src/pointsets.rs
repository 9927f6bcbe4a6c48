//! Finite point sets in the projective plane: evaluation matrices, Hilbert
//! functions, ideal slices and Waring expressions.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Complex64, Field};
use crate::linalg::{solve_least_squares, Matrix, DEFAULT_TOL};
use crate::poly::{factorial, monomial_count, monomials, TernaryForm};

/// Points closer than this chordal distance are the same point.
pub const POINT_TOL: f64 = 1e-8;

/// A point of the projective plane, scaled so its last nonzero coordinate is 1.
///
/// Floating points use the last coordinate of at least half the largest
/// magnitude instead, which keeps every coordinate within 2 in magnitude.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePoint<T> {
    coords: [T; 3],
}

impl<T: Field> ProjectivePoint<T> {
    pub fn new(coords: [T; 3]) -> Result<Self> {
        let max = coords.iter().map(Field::magnitude).fold(0.0, f64::max);
        let pivot = coords.iter().rposition(|c| {
            if T::EXACT {
                !c.is_zero()
            } else {
                c.magnitude() >= 0.5 * max
            }
        });
        let Some(pivot) = pivot.filter(|_| T::EXACT || max > 0.0) else {
            return Err(Error::ZeroPoint);
        };
        let inv = T::one() / coords[pivot].clone();
        let mut scaled = coords.map(|c| c * inv.clone());
        scaled[pivot] = T::one();
        Ok(ProjectivePoint { coords: scaled })
    }

    pub fn coords(&self) -> &[T; 3] {
        &self.coords
    }

    /// Unit-norm complex representative.
    pub fn unit(&self) -> [Complex64; 3] {
        unit_representative(&self.coords.clone().map(|c| c.to_complex()))
    }

    /// Sine of the angle between the two lines in `C^3`.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        chordal_distance(&self.unit(), &other.unit())
    }

    /// Exact equality for rationals, chordal distance below [`POINT_TOL`] for floats.
    pub fn same_point(&self, other: &Self) -> bool {
        if T::EXACT {
            self == other
        } else {
            self.chordal_distance(other) < POINT_TOL
        }
    }

    pub fn to_complex(&self) -> ProjectivePoint<Complex64> {
        ProjectivePoint::new(self.coords.clone().map(|c| c.to_complex())).expect("nonzero point stays nonzero")
    }
}

/// `p / |p|`; the zero vector is returned unchanged.
pub fn unit_representative(p: &[Complex64; 3]) -> [Complex64; 3] {
    let n = libm::sqrt(p.iter().map(Complex64::norm_sqr).sum());
    if n == 0.0 {
        return *p;
    }
    p.map(|c| c / n)
}

/// `|p ∧ q| / (|p| |q|)`, computed from the 2×2 minors so that it stays
/// accurate for nearly equal points.
pub fn chordal_distance(p: &[Complex64; 3], q: &[Complex64; 3]) -> f64 {
    let np = p.iter().map(Complex64::norm_sqr).sum::<f64>();
    let nq = q.iter().map(Complex64::norm_sqr).sum::<f64>();
    let wedge: f64 = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| (p[i] * q[j] - p[j] * q[i]).norm_sqr())
        .sum();
    libm::sqrt(wedge / (np * nq))
}

/// Largest chordal distance over a greedy nearest-neighbour matching of two
/// equally sized point lists; infinity when the sizes differ.
pub fn matching_distance(a: &[[Complex64; 3]], b: &[[Complex64; 3]]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = alloc::vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for p in a {
        let best = (0..b.len())
            .filter(|&j| !used[j])
            .map(|j| (j, chordal_distance(p, &b[j])))
            .min_by(|x, y| x.1.total_cmp(&y.1));
        match best {
            Some((j, d)) => {
                used[j] = true;
                worst = worst.max(d);
            }
            None => return f64::INFINITY,
        }
    }
    worst
}

/// Distinct points of the projective plane, in a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<T> {
    points: Vec<ProjectivePoint<T>>,
}

impl<T: Field> PointSet<T> {
    /// Fails with `DuplicatePoint` naming the first repeated index.
    pub fn new(points: Vec<ProjectivePoint<T>>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if points[..i].iter().any(|q| q.same_point(p)) {
                return Err(Error::DuplicatePoint { index: i });
            }
        }
        Ok(PointSet { points })
    }

    pub fn from_coords(coords: impl IntoIterator<Item = [T; 3]>) -> Result<Self> {
        Self::new(coords.into_iter().map(ProjectivePoint::new).collect::<Result<_>>()?)
    }

    pub fn points(&self) -> &[ProjectivePoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn units(&self) -> Vec<[Complex64; 3]> {
        self.points.iter().map(ProjectivePoint::unit).collect()
    }

    pub fn to_complex(&self) -> PointSet<Complex64> {
        PointSet {
            points: self.points.iter().map(ProjectivePoint::to_complex).collect(),
        }
    }

    /// Union, rejecting points common to both sets.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        Self::new(points)
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        PointSet {
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }
}

/// Nonzero values of the first difference of the Hilbert function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVector(pub Vec<usize>);

impl HVector {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// `Dh(i)`, zero past the end.
    pub fn difference(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `Σ_{i ≤ j} Dh(i) ≤ Σ_{d+1-j ≤ i ≤ d+1} Dh(i)` for all `j ≤ d + 1`;
    /// holds when the set is the union of two decompositions of a degree-`d` form.
    pub fn satisfies_union_bound(&self, d: usize) -> bool {
        (0..=d + 1).all(|j| {
            let head: usize = (0..=j).map(|i| self.difference(i)).sum();
            let tail: usize = (d + 1 - j..=d + 1).map(|i| self.difference(i)).sum();
            head <= tail
        })
    }

    /// `Σ_{i > d} Dh(i)`: one more than the projective dimension of the
    /// intersection of the two spans when the set is such a union.
    pub fn tail_after(&self, d: usize) -> usize {
        self.0.iter().skip(d + 1).sum()
    }
}

/// Rows are points (at their normalized representatives), columns are the
/// degree-`d` monomials.
pub fn evaluation_matrix<T: Field>(z: &PointSet<T>, d: u32) -> Matrix<T> {
    let basis = monomials(d);
    Matrix::from_fn(z.len(), basis.len(), |i, j| basis[j].value_at(z.points[i].coords()))
}

/// Columns are the coefficient vectors of `L_i^d`.
pub fn veronese_matrix<T: Field>(z: &PointSet<T>, d: u32) -> Matrix<T> {
    let columns: Vec<Vec<T>> = z
        .points
        .iter()
        .map(|p| TernaryForm::power_of_linear(p.coords(), d).expect("projective points are nonzero").dense())
        .collect();
    Matrix::from_columns(monomial_count(d), &columns)
}

/// Floating input is evaluated at unit representatives with the monomial
/// columns scaled by `sqrt(d! / e!)`, which keeps every row at unit norm.
pub fn hilbert_function<T: Field>(z: &PointSet<T>, d: u32, tol: f64) -> usize {
    if T::EXACT {
        return evaluation_matrix(z, d).rank(tol);
    }
    let basis = monomials(d);
    let weights: Vec<f64> = basis
        .iter()
        .map(|e| libm::sqrt(factorial(d) as f64 / e.factorial() as f64))
        .collect();
    let units = z.units();
    Matrix::from_fn(z.len(), basis.len(), |i, j| basis[j].value_at(&units[i]) * weights[j]).rank(tol)
}

pub fn h_vector<T: Field>(z: &PointSet<T>, tol: f64) -> HVector {
    let mut values = Vec::new();
    let mut previous = 0;
    let mut d = 0;
    while previous < z.len() {
        let h = hilbert_function(z, d, tol);
        if h <= previous {
            break;
        }
        values.push(h - previous);
        previous = h;
        d += 1;
    }
    HVector(values)
}

/// Basis of the degree-`d` forms vanishing on `z`.
pub fn ideal_component<T: Field>(z: &PointSet<T>, d: u32, tol: f64) -> Vec<TernaryForm<T>> {
    evaluation_matrix(z, d)
        .kernel_basis(tol)
        .into_iter()
        .map(|v| TernaryForm::from_dense(d, &v).expect("kernel vector has one entry per monomial"))
        .collect()
}

/// True iff the nine points are cut out by two coprime cubics.
pub fn is_complete_intersection_33<T: Field>(z: &PointSet<T>, tol: f64) -> Result<bool> {
    if z.len() != 9 {
        return Err(Error::WrongCardinality {
            expected: 9,
            found: z.len(),
        });
    }
    let cubics = ideal_component(z, 3, tol);
    if cubics.len() != 2 {
        return Ok(false);
    }
    if crate::intersect::common_factor(&cubics[0], &cubics[1], tol)?.is_some() {
        return Ok(false);
    }
    Ok(h_vector(z, tol).0 == [1, 2, 3, 2, 1])
}

/// Least-squares coefficients of a form in the span of `L_i^d`.
#[derive(Clone, Debug)]
pub struct SpanMembership {
    pub coefficients: Vec<Complex64>,
    pub residual: f64,
    /// `residual / ‖F‖`, or the raw residual for the zero form.
    pub relative_residual: f64,
}

impl SpanMembership {
    pub fn is_member(&self, tol: f64) -> bool {
        self.relative_residual < tol
    }
}

pub fn span_membership<T: Field>(form: &TernaryForm<T>, z: &PointSet<T>) -> SpanMembership {
    let z = z.to_complex();
    let v = veronese_matrix(&z, form.degree());
    let b: Vec<Complex64> = form.dense().iter().map(Field::to_complex).collect();
    let ls = solve_least_squares(&v, &b);
    let norm = form.norm();
    SpanMembership {
        relative_residual: if norm > 0.0 { ls.residual / norm } else { ls.residual },
        coefficients: ls.solution,
        residual: ls.residual,
    }
}

/// `F = Σ a_i L_i^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaringExpression<T> {
    pub points: PointSet<T>,
    pub coefficients: Vec<T>,
    pub degree: u32,
}

impl<T: Field> WaringExpression<T> {
    pub fn new(points: PointSet<T>, coefficients: Vec<T>, degree: u32) -> Result<Self> {
        if points.len() != coefficients.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                found: coefficients.len(),
            });
        }
        Ok(WaringExpression {
            points,
            coefficients,
            degree,
        })
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn form(&self) -> TernaryForm<T> {
        self.points
            .points
            .iter()
            .zip(&self.coefficients)
            .fold(TernaryForm::zero(self.degree), |acc, (p, a)| {
                let power = TernaryForm::power_of_linear(p.coords(), self.degree).expect("projective points are nonzero");
                &acc + &power.scale(a)
            })
    }

    /// All coefficients of the unit-norm linear forms above `tol` relative to
    /// the largest one, and the powers `L_i^d` linearly independent.
    pub fn is_non_redundant(&self, tol: f64) -> bool {
        let weights: Vec<f64> = self
            .points
            .points
            .iter()
            .zip(&self.coefficients)
            .map(|(p, a)| {
                let norm = libm::sqrt(p.coords().iter().map(|c| c.magnitude() * c.magnitude()).sum());
                a.magnitude() * libm::pow(norm, self.degree as f64)
            })
            .collect();
        let max = weights.iter().copied().fold(0.0, f64::max);
        if max == 0.0 || weights.iter().any(|&w| w <= tol * max) {
            return false;
        }
        veronese_matrix(&self.points, self.degree).rank(tol.max(DEFAULT_TOL)) == self.len()
    }

    pub fn to_complex(&self) -> WaringExpression<Complex64> {
        WaringExpression {
            points: self.points.to_complex(),
            coefficients: self.coefficients.iter().map(Field::to_complex).collect(),
            degree: self.degree,
        }
    }
}
