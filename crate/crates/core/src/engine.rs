//! Decision procedures on sextics: stratum classification, decomposition from
//! a pair of kernel cubics, the three-cubic construction of forms with a
//! three-dimensional cubic apolar space, and the linked second decomposition
//! of a general rank-9 form.

use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;

use crate::apolarity::{apolar_component, catalecticant};
use crate::error::{Error, Result};
use crate::field::{Complex64, Field, Rational};
use crate::flattening::{h27, h27_normalized, h27_vanishes};
use crate::intersect::{common_factor, intersect_cubics, intersect_curves};
use crate::linalg::{float::solve_least_squares, Matrix};
use crate::pointsets::{
    chordal_distance, evaluation_matrix, h_vector, ideal_component, span_membership, HVector, PointSet,
    ProjectivePoint,
    WaringExpression,
};
use crate::poly::{apply_operator, monomial_count, monomials, Exponent, TernaryForm};

/// Largest accepted relative residual of a computed decomposition.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Generators of the linked ideal must vanish to this level at its points.
pub const FILTER_TOL: f64 = 1e-7;
/// Points of the two linked sets must be at least this far apart.
pub const SEPARATION_TOL: f64 = 1e-6;
const INTERSECTION_SEED: u64 = 0;
const COMBINATIONS: u64 = 4;
const SEPARATION_RATIO: f64 = 100.0;

const NOTE_CLOSED: &str = "labels certify the closed conditions of the table, not membership in the open stratum";
const NOTE_FAMILY: &str = "forms with a one-parameter family of decompositions are not detected";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StratumLabel {
    Generic10,
    S9,
    R,
    W,
    S8,
    Wprime,
    S7,
    LowRank(usize),
}

impl StratumLabel {
    pub fn from_invariants(rank_c3: usize, h27_vanishes: bool) -> Self {
        match (rank_c3, h27_vanishes) {
            (10.., _) => StratumLabel::Generic10,
            (9, false) => StratumLabel::S9,
            (9, true) => StratumLabel::R,
            (8, false) => StratumLabel::W,
            (8, true) => StratumLabel::S8,
            (7, false) => StratumLabel::Wprime,
            (7, true) => StratumLabel::S7,
            (r, _) => StratumLabel::LowRank(r),
        }
    }

    pub fn expected_decompositions(self) -> ExpectedDecompositions {
        match self {
            StratumLabel::S9 => ExpectedDecompositions::Two,
            StratumLabel::R | StratumLabel::W | StratumLabel::S8 | StratumLabel::S7 => ExpectedDecompositions::One,
            StratumLabel::Wprime => ExpectedDecompositions::Infinite,
            StratumLabel::Generic10 | StratumLabel::LowRank(_) => ExpectedDecompositions::Unknown,
        }
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumLabel::Generic10 => f.write_str("Generic10"),
            StratumLabel::S9 => f.write_str("S9"),
            StratumLabel::R => f.write_str("R"),
            StratumLabel::W => f.write_str("W"),
            StratumLabel::S8 => f.write_str("S8"),
            StratumLabel::Wprime => f.write_str("Wprime"),
            StratumLabel::S7 => f.write_str("S7"),
            StratumLabel::LowRank(r) => write!(f, "LowRank({r})"),
        }
    }
}

/// Number of minimal Waring decompositions of a general member of a stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedDecompositions {
    One,
    Two,
    Infinite,
    Unknown,
}

impl fmt::Display for ExpectedDecompositions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExpectedDecompositions::One => "1",
            ExpectedDecompositions::Two => "2",
            ExpectedDecompositions::Infinite => "infinite",
            ExpectedDecompositions::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StratumReport {
    pub rank_c3: usize,
    pub h27_vanishes: bool,
    pub h27_normalized: f64,
    pub label: StratumLabel,
    pub expected_decompositions: ExpectedDecompositions,
    pub notes: Vec<&'static str>,
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

/// Rank of the cubic catalecticant and vanishing of `H27`, mapped to the
/// stratum table. Exact for rational input.
pub fn classify<T: Field>(form: &TernaryForm<T>, tol: f64) -> Result<StratumReport> {
    require_sextic(form)?;
    let rank_c3 = catalecticant(form, 3)?.rank(tol);
    let (vanishes, normalized) = if T::EXACT {
        let det = h27(form)?;
        if det.is_zero() {
            (true, 0.0)
        } else {
            (false, h27_normalized(form)?)
        }
    } else {
        (h27_vanishes(form, tol)?, h27_normalized(form)?)
    };
    let label = StratumLabel::from_invariants(rank_c3, vanishes);
    let mut notes = alloc::vec![NOTE_CLOSED];
    if matches!(label, StratumLabel::S9 | StratumLabel::R) {
        notes.push(NOTE_FAMILY);
    }
    Ok(StratumReport {
        rank_c3,
        h27_vanishes: vanishes,
        h27_normalized: normalized,
        label,
        expected_decompositions: label.expected_decompositions(),
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// One of the nine coefficients vanishes; the other eight decompose `F`.
    Rank8,
    /// All nine coefficients are nonzero: the unique length-9 decomposition.
    Rank9CompleteIntersection,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Rank8 => "Rank8",
            Verdict::Rank9CompleteIntersection => "Rank9_CI",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelDecomposition {
    /// The nine points cut out by the two cubics.
    pub intersection: PointSet<Complex64>,
    /// Coefficients of `F` over all nine points.
    pub coefficients: Vec<Complex64>,
    pub expression: WaringExpression<Complex64>,
    pub verdict: Verdict,
    pub residual: f64,
}

/// `|a_i| ‖p_i‖^6`: the coefficients with respect to unit-norm linear forms.
pub fn unit_weights(z: &PointSet<Complex64>, coefficients: &[Complex64]) -> Vec<f64> {
    z.points()
        .iter()
        .zip(coefficients)
        .map(|(p, a)| a.norm() * libm::pow(libm::sqrt(p.coords().iter().map(Complex64::norm_sqr).sum()), 6.0))
        .collect()
}

/// Decomposes a sextic whose cubic apolar space is a pencil by intersecting
/// the two generating cubics.
pub fn decompose_via_kernel_cubics<T: Field>(form: &TernaryForm<T>, tol: f64) -> Result<KernelDecomposition> {
    require_sextic(form)?;
    let kernel = apolar_component(form, 3, tol)?;
    if kernel.len() != 2 {
        return Err(Error::KernelWrongSize {
            expected: 2,
            found: kernel.len(),
        });
    }
    decompose_with_cubics(form, &kernel[0], &kernel[1])
}

/// Same as [`decompose_via_kernel_cubics`] for a chosen pair of apolar cubics.
pub fn decompose_with_cubics<T: Field>(
    form: &TernaryForm<T>,
    c1: &TernaryForm<T>,
    c2: &TernaryForm<T>,
) -> Result<KernelDecomposition> {
    require_sextic(form)?;
    let points = intersect_cubics(c1, c2, INTERSECTION_SEED)?;
    if let Some(p) = points.iter().find(|p| p.multiplicity > 1) {
        return Err(Error::NonReducedIntersection {
            multiplicity: p.multiplicity,
        });
    }
    let z = PointSet::new(points.into_iter().map(|p| p.point).collect())?;
    let f = form.to_complex();
    let fit = span_membership(&f, &z);
    if !fit.is_member(RESIDUAL_TOL) {
        return Err(Error::ResidualTooLarge {
            residual: fit.relative_residual,
        });
    }
    // F has rank 8 exactly when it lies in the span of eight of the points,
    // and the only candidate to drop is the smallest contribution.
    let weights = unit_weights(&z, &fit.coefficients);
    let smallest = (0..z.len()).min_by(|&i, &j| weights[i].total_cmp(&weights[j])).expect("nine points");
    let kept: Vec<usize> = (0..z.len()).filter(|&i| i != smallest).collect();
    let eight = z.subset(&kept);
    let refit = span_membership(&f, &eight);
    let (expression, verdict, residual) = if refit.is_member(RESIDUAL_TOL) {
        let residual = refit.relative_residual;
        (WaringExpression::new(eight, refit.coefficients, 6)?, Verdict::Rank8, residual)
    } else {
        (
            WaringExpression::new(z.clone(), fit.coefficients.clone(), 6)?,
            Verdict::Rank9CompleteIntersection,
            fit.relative_residual,
        )
    };
    Ok(KernelDecomposition {
        intersection: z,
        coefficients: fit.coefficients,
        expression,
        verdict,
        residual,
    })
}

/// The sextic apolar to three cubics, scaled so that its first nonzero
/// coefficient is 1.
///
/// `c(∂)F = 0` for all three cubics is 30 linear conditions on the 28
/// coefficients of `F`. The three Koszul relations make them dependent, so
/// for cubics without a common point the solution is a single line.
pub fn construct_wprime_form<T: Field>(cubics: [&TernaryForm<T>; 3], tol: f64) -> Result<TernaryForm<T>> {
    for c in cubics {
        if c.degree() != 3 {
            return Err(Error::WrongDegree {
                expected: 3,
                found: c.degree(),
            });
        }
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if common_factor(cubics[i], cubics[j], tol)?.is_some() {
            return Err(Error::DegenerateConfiguration {
                reason: "two of the cubics share a component",
            });
        }
    }
    let columns: Vec<Vec<T>> = monomials(6)
        .into_iter()
        .map(|e| {
            let m = TernaryForm::monomial(e, T::one());
            cubics
                .iter()
                .flat_map(|c| apply_operator(c, &m).expect("cubic acts on a sextic").dense())
                .collect()
        })
        .collect();
    let kernel = Matrix::from_columns(30, &columns).kernel_basis(tol);
    if kernel.len() != 1 {
        return Err(Error::DegenerateConfiguration {
            reason: "the two spans do not meet in a single point",
        });
    }
    let form = TernaryForm::from_dense(6, &kernel[0])?;
    let lead = form.terms().next().map(|(_, c)| c.clone()).expect("kernel vector is nonzero");
    let form = form.scale(&(T::one() / lead));
    let found = apolar_component(&form, 3, tol)?.len();
    if found != 3 {
        return Err(Error::KernelWrongSize { expected: 3, found });
    }
    Ok(form)
}

/// Minimal free resolution data of nine points with h-vector `(1, 2, 3, 3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HilbertBurch<T> {
    /// The unique cubic through the points.
    pub cubic: TernaryForm<T>,
    /// Quartics completing `x_i · cubic` to the degree-4 part of the ideal.
    pub quartics: [TernaryForm<T>; 3],
    /// 4×3 syzygy matrix. Rows 0–2 are linear and pair with the quartics;
    /// row 3 is quadratic and pairs with the cubic.
    pub matrix: [[TernaryForm<T>; 3]; 4],
}

impl<T: Field> HilbertBurch<T> {
    /// `(Q1, Q2, Q3, C)`, the row that the matrix annihilates.
    pub fn generators(&self) -> [TernaryForm<T>; 4] {
        [
            self.quartics[0].clone(),
            self.quartics[1].clone(),
            self.quartics[2].clone(),
            self.cubic.clone(),
        ]
    }

    /// `generators · matrix`, three quintics that vanish identically.
    pub fn syzygy_products(&self) -> [TernaryForm<T>; 3] {
        let g = self.generators();
        core::array::from_fn(|col| {
            (0..4).fold(TernaryForm::zero(5), |acc, row| &acc + &(&g[row] * &self.matrix[row][col]))
        })
    }

    /// Signed maximal minors: entry `r` is `(-1)^r` times the minor with row
    /// `r` deleted. They equal the generators up to one common scalar.
    pub fn minors(&self) -> [TernaryForm<T>; 4] {
        core::array::from_fn(|r| {
            let rows: Vec<&[TernaryForm<T>; 3]> = (0..4).filter(|&i| i != r).map(|i| &self.matrix[i]).collect();
            let d = det3(&[rows[0].each_ref(), rows[1].each_ref(), rows[2].each_ref()]);
            if r % 2 == 0 {
                d
            } else {
                -&d
            }
        })
    }
}

fn det2<T: Field>(a: &TernaryForm<T>, b: &TernaryForm<T>, c: &TernaryForm<T>, d: &TernaryForm<T>) -> TernaryForm<T> {
    &(a * d) - &(b * c)
}

fn det3<T: Field>(m: &[[&TernaryForm<T>; 3]; 3]) -> TernaryForm<T> {
    let t0 = m[0][0] * &det2(m[1][1], m[1][2], m[2][1], m[2][2]);
    let t1 = m[0][1] * &det2(m[1][0], m[1][2], m[2][0], m[2][2]);
    let t2 = m[0][2] * &det2(m[1][0], m[1][1], m[2][0], m[2][1]);
    &(&t0 - &t1) + &t2
}

fn monomial_form<T: Field>(e: Exponent) -> TernaryForm<T> {
    TernaryForm::monomial(e, T::one())
}

/// How far `v` is from the span of `columns`: 1 or 0 over exact fields,
/// otherwise the relative least-squares residual.
fn independence<T: Field>(columns: &[Vec<T>], v: &[T], tol: f64) -> f64 {
    let n = v.len();
    if T::EXACT {
        let mut trial = columns.to_vec();
        trial.push(v.to_vec());
        return if Matrix::from_columns(n, &trial).rank(tol) == trial.len() { 1.0 } else { 0.0 };
    }
    let to_complex = |c: &Vec<T>| c.iter().map(Field::to_complex).collect::<Vec<_>>();
    let basis: Vec<Vec<Complex64>> = columns.iter().map(to_complex).collect();
    let target = to_complex(&v.to_vec());
    let norm = libm::sqrt(target.iter().map(|z| z.norm_sqr()).sum::<f64>());
    if norm == 0.0 {
        return 0.0;
    }
    solve_least_squares(&Matrix::from_columns(n, &basis), &target).residual / norm
}

pub fn hilbert_burch<T: Field>(a: &PointSet<T>, tol: f64) -> Result<HilbertBurch<T>> {
    if a.len() != 9 {
        return Err(Error::WrongCardinality {
            expected: 9,
            found: a.len(),
        });
    }
    let h = h_vector(a, tol);
    if h.values() != [1, 2, 3, 3] {
        return Err(Error::WrongHVector { found: h.0 });
    }
    let cubic = ideal_component(a, 3, tol).swap_remove(0);
    let mut columns: Vec<Vec<T>> = monomials(1)
        .into_iter()
        .map(|e| (&monomial_form(e) * &cubic).dense())
        .collect();
    let mut pool = ideal_component(a, 4, tol);
    let mut quartics = Vec::new();
    while quartics.len() < 3 && !pool.is_empty() {
        let (best, gain) = pool
            .iter()
            .map(|q| independence(&columns, &q.dense(), tol))
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty pool");
        if gain <= tol {
            break;
        }
        let q = pool.swap_remove(best);
        columns.push(q.dense());
        quartics.push(q);
    }
    let quartics: [TernaryForm<T>; 3] = quartics.try_into().map_err(|_| Error::DegenerateConfiguration {
        reason: "quartics of the ideal do not extend the cubic multiples",
    })?;

    // Unknowns: three linear forms multiplying the quartics, then one quadric
    // multiplying the cubic.
    let mut unknowns: Vec<Vec<T>> = Vec::new();
    for q in &quartics {
        for e in monomials(1) {
            unknowns.push((&monomial_form(e) * q).dense());
        }
    }
    for e in monomials(2) {
        unknowns.push((&monomial_form(e) * &cubic).dense());
    }
    let syzygies = Matrix::from_columns(monomial_count(5), &unknowns).kernel_basis(tol);
    if syzygies.len() != 3 {
        return Err(Error::SyzygyRankUnexpected {
            found: syzygies.len(),
        });
    }
    let entry = |col: usize, row: usize| -> TernaryForm<T> {
        let v = &syzygies[col];
        if row < 3 {
            TernaryForm::from_dense(1, &v[3 * row..3 * row + 3]).expect("three coefficients")
        } else {
            TernaryForm::from_dense(2, &v[9..15]).expect("six coefficients")
        }
    };
    let matrix = core::array::from_fn(|row| core::array::from_fn(|col| entry(col, row)));
    Ok(HilbertBurch {
        cubic,
        quartics,
        matrix,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecondDecomposition {
    pub points: PointSet<Complex64>,
    pub expression: WaringExpression<Complex64>,
    pub residual: f64,
    /// h-vector of the union of the two decompositions.
    pub union_h_vector: HVector,
    /// The cubic and the three quartics generating the ideal of the new points.
    pub generators: Vec<TernaryForm<Complex64>>,
}

/// The other length-9 decomposition of a general rank-9 sextic, linked to the
/// known decomposition `a` through the cubic containing both.
///
/// The three linear rows of the Hilbert–Burch matrix of `a` are completed by
/// a column of three quadrics, chosen so that the quartic maximal minors are
/// apolar to `F`. The minors are linear in the quadrics, and adding linear
/// combinations of the existing columns only changes the minors by multiples
/// of the cubic; those nine directions are removed by requiring the quadric
/// column to be orthogonal to them.
/// The nine common zeros of `cubic` and the quartics, read off the
/// intersection of the cubic with random combinations of the quartics.
/// They are the nine candidates on which the quartics are smallest, provided
/// the tenth is clearly worse.
/// A fresh combination moves the three residual points, which can land
/// next to a common zero and spoil the intersection.
fn linked_points(cubic: &TernaryForm<Complex64>, quartics: &[TernaryForm<Complex64>]) -> Result<Vec<ProjectivePoint<Complex64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(INTERSECTION_SEED);
    let mut last = Error::IllConditioned { attempts: 0 };
    for attempt in 0..COMBINATIONS {
        let combination = quartics.iter().fold(TernaryForm::zero(4), |acc, g| {
            &acc + &g.scale(&Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
        });
        let candidates = match intersect_curves(cubic, &combination.unit_normalized(), INTERSECTION_SEED + attempt) {
            Ok(candidates) => candidates,
            Err(e) => {
                last = e;
                continue;
            }
        };
        let mut ranked: Vec<(f64, ProjectivePoint<Complex64>)> = candidates
            .into_iter()
            .map(|p| {
                let x = p.point.unit();
                (quartics.iter().map(|g| g.evaluate(&x).norm()).fold(0.0, f64::max), p.point)
            })
            .collect();
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0));
        let found = ranked.iter().filter(|r| r.0 < FILTER_TOL).count();
        let separated = ranked.get(9).is_none_or(|next| next.0 > SEPARATION_RATIO * ranked[8].0);
        if found >= 9 && ranked[8].0 < FILTER_TOL && separated {
            return Ok(ranked.into_iter().take(9).map(|r| r.1).collect());
        }
        last = Error::FilterMiscount { found };
    }
    Err(last)
}

/// `form` times the power of two that brings its largest coefficient into
/// `[1, 2)`, so its apolarity rows are commensurate with the gauge rows.
fn balanced<T: Field>(form: &TernaryForm<T>) -> TernaryForm<T> {
    let largest = form.dense().iter().map(Field::magnitude).fold(0.0, f64::max);
    if largest == 0.0 || !largest.is_finite() {
        return form.clone();
    }
    let k = libm::floor(libm::log2(largest)) as i64;
    let power = Rational::from_integer(num_bigint::BigInt::from(2).pow(k.unsigned_abs() as u32));
    let factor = if k >= 0 { power.recip() } else { power };
    form.scale(&T::from_rational(&factor))
}

pub fn second_decomposition<T: Field>(form: &TernaryForm<T>, a: &PointSet<T>, tol: f64) -> Result<SecondDecomposition> {
    require_sextic(form)?;
    let fit = span_membership(form, a);
    if !fit.is_member(RESIDUAL_TOL) {
        return Err(Error::NotADecomposition {
            residual: fit.relative_residual,
        });
    }
    let hb = hilbert_burch(a, tol)?;
    let scaled = balanced(form);
    let found = apolar_component(&scaled, 3, tol)?.len();
    if found != 1 {
        return Err(Error::KernelWrongSize { expected: 1, found });
    }

    let l = &hb.matrix;
    // Expanding the minor without column j along the new column gives
    // Σ_i u_i · cof[i][j].
    let cof: [[TernaryForm<T>; 3]; 3] = core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
            let d = det2(
                &l[rows[0]][cols[0]],
                &l[rows[0]][cols[1]],
                &l[rows[1]][cols[0]],
                &l[rows[1]][cols[1]],
            );
            if i % 2 == 0 {
                d
            } else {
                -&d
            }
        })
    });
    let quadrics = monomials(2);
    let mut apolarity = Matrix::zeros(18, 18);
    for i in 0..3 {
        for (m, e) in quadrics.iter().enumerate() {
            let x = monomial_form::<T>(*e);
            for j in 0..3 {
                let image = apply_operator(&(&x * &cof[i][j]), &scaled)?.dense();
                for (r, v) in image.into_iter().enumerate() {
                    apolarity[(6 * j + r, 6 * i + m)] = v;
                }
            }
        }
    }
    let mut gauge: Vec<Vec<T>> = Vec::new();
    for k in 0..3 {
        for e in monomials(1) {
            let x = monomial_form::<T>(e);
            let mut v = alloc::vec![T::zero(); 18];
            for i in 0..3 {
                for (m, c) in (&x * &l[i][k]).dense().into_iter().enumerate() {
                    v[6 * i + m] = c;
                }
            }
            gauge.push(v);
        }
    }
    let system = apolarity.vstack(&Matrix::from_columns(18, &gauge).conj_transpose());
    let kernel = system.kernel_basis(tol);
    if kernel.len() != 1 {
        return Err(Error::NoSolution {
            dimension: kernel.len(),
        });
    }
    let u: Vec<TernaryForm<T>> = (0..3)
        .map(|i| TernaryForm::from_dense(2, &kernel[0][6 * i..6 * i + 6]).expect("six coefficients"))
        .collect();
    let quartic_minors: Vec<TernaryForm<Complex64>> = (0..3)
        .map(|j| {
            (0..3)
                .fold(TernaryForm::zero(4), |acc, i| &acc + &(&u[i] * &cof[i][j]))
                .to_complex()
                .unit_normalized()
        })
        .collect();

    let cubic = hb.cubic.to_complex().unit_normalized();
    let survivors = linked_points(&cubic, &quartic_minors)?;
    let b = PointSet::new(survivors)?;

    let a = a.to_complex();
    let closest = a
        .units()
        .iter()
        .flat_map(|p| b.units().into_iter().map(move |q| chordal_distance(p, &q)))
        .fold(f64::INFINITY, f64::min);
    if closest < SEPARATION_TOL {
        return Err(Error::LiaisonCheckFailed {
            reason: "the linked set meets the original one",
        });
    }
    let union = a.union(&b).map_err(|_| Error::LiaisonCheckFailed {
        reason: "the linked set meets the original one",
    })?;
    let union_h_vector = h_vector(&union, tol);
    if union_h_vector.values() != [1, 2, 3, 3, 3, 3, 2, 1] {
        return Err(Error::LiaisonCheckFailed {
            reason: "the union is not a complete intersection of a cubic and a sextic",
        });
    }

    let fit = span_membership(&form.to_complex(), &b);
    if !fit.is_member(RESIDUAL_TOL) {
        return Err(Error::ResidualTooLarge {
            residual: fit.relative_residual,
        });
    }
    let mut generators = alloc::vec![cubic];
    generators.extend(quartic_minors);
    Ok(SecondDecomposition {
        expression: WaringExpression::new(b.clone(), fit.coefficients, 6)?,
        points: b,
        residual: fit.relative_residual,
        union_h_vector,
        generators,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Verification {
    /// `‖F - Σ a_i L_i^d‖ / ‖F‖`.
    pub residual: f64,
    pub non_redundant: bool,
}

pub fn verify_expression<T: Field>(form: &TernaryForm<T>, expr: &WaringExpression<T>, tol: f64) -> Result<Verification> {
    if form.degree() != expr.degree {
        return Err(Error::WrongDegree {
            expected: form.degree(),
            found: expr.degree,
        });
    }
    let f = form.to_complex();
    let difference = (&f - &expr.to_complex().form()).norm();
    let norm = f.norm();
    Ok(Verification {
        residual: if norm > 0.0 { difference / norm } else { difference },
        non_redundant: expr.is_non_redundant(tol),
    })
}

/// No three points on a line and no six on a conic.
fn in_general_position(z: &PointSet<Rational>) -> bool {
    let n = z.len();
    (0u32..1 << n)
        .filter(|mask| matches!(mask.count_ones(), 3 | 6))
        .all(|mask| {
            let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let degree = if subset.len() == 3 { 1 } else { 2 };
            let m = evaluation_matrix(&z.subset(&subset), degree);
            !m.determinant().expect("square").is_zero()
        })
}

/// A sum of `rank_target` sixth powers of rational linear forms with integer
/// coordinates in `[-10, 10]`. Coefficients are `p/q`, `1 ≤ |p|, q ≤ 10`,
/// divided by `‖L_i‖^6` so that every term has the same scale.
/// The points are redrawn until they are in general position and impose
/// independent conditions on cubics.
pub fn random_form(rank_target: usize, seed: u64) -> Result<(TernaryForm<Rational>, WaringExpression<Rational>)> {
    if !(1..=10).contains(&rank_target) {
        return Err(Error::RankTargetOutOfRange { rank: rank_target });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = loop {
        let coords: Vec<[Rational; 3]> = (0..rank_target)
            .map(|_| loop {
                let p: [i64; 3] = core::array::from_fn(|_| rng.gen_range(-10..=10));
                if p != [0, 0, 0] {
                    break p.map(Rational::from_i64);
                }
            })
            .collect();
        let Ok(z) = PointSet::from_coords(coords) else {
            continue;
        };
        if in_general_position(&z) && evaluation_matrix(&z, 3).rank(0.0) == rank_target {
            break z;
        }
    };
    let coefficients: Vec<Rational> = points
        .points()
        .iter()
        .map(|point| {
            let p: i64 = rng.gen_range(1..=10) * if rng.gen::<bool>() { 1 } else { -1 };
            let q: i64 = rng.gen_range(1..=10);
            let squared_norm = point.coords().iter().fold(Rational::zero(), |acc, x| acc + x * x);
            Rational::new(p.into(), q.into()) / (&squared_norm * &squared_norm * &squared_norm)
        })
        .collect();
    let expr = WaringExpression::new(points, coefficients, 6)?;
    Ok((expr.form(), expr))
}

/// Nine rational points `ℓ_i ∩ m_j` cut out by two triples of random lines,
/// a complete intersection of two reducible cubics.
pub fn random_line_grid(seed: u64) -> PointSet<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let lines: Vec<[i64; 3]> = (0..6).map(|_| core::array::from_fn(|_| rng.gen_range(-5..=5))).collect();
        let coords: Vec<[Rational; 3]> = (0..3)
            .flat_map(|i| (3..6).map(move |j| (i, j)))
            .map(|(i, j)| {
                let (a, b) = (lines[i], lines[j]);
                [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]].map(Rational::from_i64)
            })
            .collect();
        if coords.iter().any(|c| c.iter().all(|x| x.is_zero())) {
            continue;
        }
        if let Ok(z) = PointSet::from_coords(coords) {
            if h_vector(&z, 0.0).values() == [1, 2, 3, 2, 1] {
                return z;
            }
        }
    }
}

impl fmt::Display for StratumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (rank C3 = {}, H27 {}, decompositions: {})",
            self.label,
            self.rank_c3,
            if self.h27_vanishes { "vanishes" } else { "nonzero" },
            self.expected_decompositions
        )
    }
}
