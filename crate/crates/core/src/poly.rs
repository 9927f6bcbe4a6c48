//! Homogeneous polynomials in three variables.
//!
//! Monomials of a fixed degree are always listed in graded lexicographic
//! order with `x0 > x1 > x2`: `x0^d, x0^(d-1) x1, x0^(d-1) x2, x0^(d-2) x1^2, ...`.
//! Every matrix row/column layout and every file format uses this order.
//!
//! A form in the dual variables `z0, z1, z2` is stored with the same type;
//! the monomial `z^a` acts on forms as the differential operator `∂^a`, with
//! no factorial rescaling.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Complex64, Field};

/// Exponent vector of a monomial `x0^a x1^b x2^c`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Exponent(pub [u32; 3]);

impl Exponent {
    pub const fn new(e0: u32, e1: u32, e2: u32) -> Self {
        Exponent([e0, e1, e2])
    }

    pub fn degree(&self) -> u32 {
        self.0[0] + self.0[1] + self.0[2]
    }

    /// Position among the monomials of the same degree.
    pub fn index(&self) -> usize {
        let s = (self.degree() - self.0[0]) as usize;
        s * (s + 1) / 2 + self.0[2] as usize
    }

    /// `a! b! c!`
    pub fn factorial(&self) -> u64 {
        self.0.iter().map(|&e| factorial(e)).product()
    }

    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        Some(Exponent([
            self.0[0].checked_sub(other.0[0])?,
            self.0[1].checked_sub(other.0[1])?,
            self.0[2].checked_sub(other.0[2])?,
        ]))
    }

    pub fn plus(&self, other: &Exponent) -> Exponent {
        Exponent([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    /// `self! / (self - other)!` when `other <= self` componentwise.
    pub fn falling_factorial(&self, other: &Exponent) -> Option<u64> {
        let mut w = 1u64;
        for i in 0..3 {
            let (top, k) = (self.0[i], other.0[i]);
            if k > top {
                return None;
            }
            w *= ((top - k + 1)..=top).map(u64::from).product::<u64>();
        }
        Some(w)
    }

    /// Value of the monomial at `p`.
    pub fn value_at<T: Field>(&self, p: &[T; 3]) -> T {
        let mut acc = T::one();
        for (coord, &e) in p.iter().zip(&self.0) {
            for _ in 0..e {
                acc = acc * coord.clone();
            }
        }
        acc
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.index().cmp(&other.index()))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn factorial(n: u32) -> u64 {
    (1..=u64::from(n)).product()
}

pub fn monomial_count(degree: u32) -> usize {
    let d = degree as usize;
    (d + 1) * (d + 2) / 2
}

/// All exponents of the given degree, in graded lexicographic order.
pub fn monomials(degree: u32) -> Vec<Exponent> {
    let mut out = Vec::with_capacity(monomial_count(degree));
    for a in (0..=degree).rev() {
        for b in (0..=degree - a).rev() {
            out.push(Exponent([a, b, degree - a - b]));
        }
    }
    out
}

/// Homogeneous polynomial of a fixed degree; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct TernaryForm<T> {
    degree: u32,
    coeffs: BTreeMap<Exponent, T>,
}

impl<T: Field> TernaryForm<T> {
    pub fn zero(degree: u32) -> Self {
        TernaryForm {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a form from explicit terms. Zero coefficients are dropped;
    /// exponents of the wrong degree or repeated exponents are rejected.
    pub fn from_terms(degree: u32, terms: impl IntoIterator<Item = (Exponent, T)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (e, c) in terms {
            if e.degree() != degree {
                return Err(Error::ExponentDegree {
                    exponent: e.0,
                    degree,
                });
            }
            if coeffs.contains_key(&e) {
                return Err(Error::DuplicateExponent { exponent: e.0 });
            }
            coeffs.insert(e, c);
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(TernaryForm { degree, coeffs })
    }

    /// Coefficients listed in graded lexicographic order.
    pub fn from_dense(degree: u32, values: &[T]) -> Result<Self> {
        let basis = monomials(degree);
        if basis.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: basis.len(),
                found: values.len(),
            });
        }
        Ok(Self::collect(degree, basis.into_iter().zip(values.iter().cloned())))
    }

    pub fn monomial(exponent: Exponent, coefficient: T) -> Self {
        Self::collect(exponent.degree(), core::iter::once((exponent, coefficient)))
    }

    /// `a0 x0 + a1 x1 + a2 x2`
    pub fn linear(a: &[T; 3]) -> Self {
        Self::collect(
            1,
            [
                (Exponent::new(1, 0, 0), a[0].clone()),
                (Exponent::new(0, 1, 0), a[1].clone()),
                (Exponent::new(0, 0, 1), a[2].clone()),
            ],
        )
    }

    /// Sums the terms, dropping zeros. Exponents must all have `degree`.
    fn collect(degree: u32, terms: impl IntoIterator<Item = (Exponent, T)>) -> Self {
        let mut coeffs: BTreeMap<Exponent, T> = BTreeMap::new();
        for (e, c) in terms {
            debug_assert_eq!(e.degree(), degree);
            if c.is_zero() {
                continue;
            }
            match coeffs.get_mut(&e) {
                Some(v) => *v = v.clone() + c,
                None => {
                    coeffs.insert(e, c);
                }
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        TernaryForm { degree, coeffs }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Nonzero terms in graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &T)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> T {
        self.coeffs.get(e).cloned().unwrap_or_else(T::zero)
    }

    /// Dense coefficient vector in graded lexicographic order.
    pub fn dense(&self) -> Vec<T> {
        let mut v = alloc::vec![T::zero(); monomial_count(self.degree)];
        for (e, c) in &self.coeffs {
            v[e.index()] = c.clone();
        }
        v
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::collect(
            self.degree,
            self.coeffs.iter().map(|(e, c)| (*e, c.clone() * s.clone())),
        )
    }

    pub fn evaluate(&self, p: &[T; 3]) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, (e, c)| acc + c.clone() * e.value_at(p))
    }

    /// Partial derivative with respect to `x_var`.
    pub fn partial(&self, var: usize) -> Self {
        let degree = self.degree.saturating_sub(1);
        Self::collect(
            degree,
            self.coeffs.iter().filter(|(e, _)| e.0[var] > 0).map(|(e, c)| {
                let mut d = *e;
                d.0[var] -= 1;
                (d, c.clone() * T::from_i64(i64::from(e.0[var])))
            }),
        )
    }

    pub fn gradient(&self) -> [Self; 3] {
        [self.partial(0), self.partial(1), self.partial(2)]
    }

    /// The form `y ↦ F(G y)`.
    pub fn substitute_linear(&self, g: &[[T; 3]; 3]) -> Self {
        let images: Vec<Self> = g.iter().map(Self::linear).collect();
        let d = self.degree;
        let powers: Vec<Vec<Self>> = images
            .iter()
            .map(|l| {
                let mut p = Vec::with_capacity(d as usize + 1);
                p.push(Self::constant(T::one()));
                for k in 1..=d as usize {
                    let next = &p[k - 1] * l;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut out = Self::zero(d);
        for (e, c) in &self.coeffs {
            let term = &(&powers[0][e.0[0] as usize] * &powers[1][e.0[1] as usize])
                * &powers[2][e.0[2] as usize];
            out = &out + &term.scale(c);
        }
        out
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(Exponent::new(0, 0, 0), c)
    }

    /// Explicit lossy conversion to floating coefficients.
    pub fn to_complex(&self) -> TernaryForm<Complex64> {
        TernaryForm::collect(
            self.degree,
            self.coeffs.iter().map(|(e, c)| (*e, c.to_complex())),
        )
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        libm::sqrt(self.coeffs.values().map(|c| { let m = c.magnitude(); m * m }).sum())
    }

    /// Expands `(a x0 + b x1 + c x2)^d`.
    pub fn power_of_linear(point: &[T; 3], d: u32) -> Result<Self> {
        if point.iter().all(T::is_zero) {
            return Err(Error::ZeroPoint);
        }
        let df = factorial(d);
        Ok(Self::collect(
            d,
            monomials(d).into_iter().map(|e| {
                let multinomial = (df / e.factorial()) as i64;
                (e, T::from_i64(multinomial) * e.value_at(point))
            }),
        ))
    }
}

impl TernaryForm<Complex64> {
    /// Rescaled to unit coefficient norm; the zero form is returned as is.
    pub fn unit_normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scale(&Complex64::new(1.0 / n, 0.0))
    }
}

/// Applies the dual form `operator` (monomial `z^a` read as `∂^a`) to `form`.
pub fn apply_operator<T: Field>(operator: &TernaryForm<T>, form: &TernaryForm<T>) -> Result<TernaryForm<T>> {
    if operator.degree > form.degree {
        return Err(Error::DegreeMismatch {
            operator: operator.degree,
            form: form.degree,
        });
    }
    let degree = form.degree - operator.degree;
    let mut terms = Vec::new();
    for (a, ca) in &operator.coeffs {
        for (b, cb) in &form.coeffs {
            if let (Some(rest), Some(w)) = (b.checked_sub(a), b.falling_factorial(a)) {
                terms.push((rest, ca.clone() * cb.clone() * T::from_i64(w as i64)));
            }
        }
    }
    Ok(TernaryForm::collect(degree, terms))
}

impl<T: Field> Add for &TernaryForm<T> {
    type Output = TernaryForm<T>;

    /// Panics if the degrees differ.
    fn add(self, rhs: &TernaryForm<T>) -> TernaryForm<T> {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        TernaryForm::collect(
            self.degree,
            self.coeffs
                .iter()
                .chain(rhs.coeffs.iter())
                .map(|(e, c)| (*e, c.clone())),
        )
    }
}

impl<T: Field> Sub for &TernaryForm<T> {
    type Output = TernaryForm<T>;

    /// Panics if the degrees differ.
    fn sub(self, rhs: &TernaryForm<T>) -> TernaryForm<T> {
        self + &(-rhs)
    }
}

impl<T: Field> Neg for &TernaryForm<T> {
    type Output = TernaryForm<T>;

    fn neg(self) -> TernaryForm<T> {
        TernaryForm::collect(self.degree, self.coeffs.iter().map(|(e, c)| (*e, -c.clone())))
    }
}

impl<T: Field> Mul for &TernaryForm<T> {
    type Output = TernaryForm<T>;

    fn mul(self, rhs: &TernaryForm<T>) -> TernaryForm<T> {
        let mut terms = Vec::with_capacity(self.coeffs.len() * rhs.coeffs.len());
        for (a, ca) in &self.coeffs {
            for (b, cb) in &rhs.coeffs {
                terms.push((a.plus(b), ca.clone() * cb.clone()));
            }
        }
        TernaryForm::collect(self.degree + rhs.degree, terms)
    }
}
