//! Univariate complex polynomials and simultaneous root finding.

use alloc::vec::Vec;

use crate::field::Complex64;

/// Value and derivative of `Σ c_i z^i` (ascending coefficients) by Horner's rule.
pub fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Drops leading coefficients below `rel` times the largest one.
pub fn trim(coeffs: &[Complex64], rel: f64) -> Vec<Complex64> {
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut v = coeffs.to_vec();
    while v.last().is_some_and(|c| c.norm() <= rel * max) {
        v.pop();
    }
    v
}

/// All roots of `Σ c_i z^i` by Aberth–Ehrlich iteration, starting from a
/// circle rotated by `phase` radians. The leading coefficient must be nonzero.
pub fn aberth(coeffs: &[Complex64], phase: f64) -> Vec<Complex64> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let radius = {
        let r = (coeffs[0] / lead).norm();
        if r > 0.0 {
            libm::pow(r, 1.0 / n as f64)
        } else {
            1.0
        }
    };
    let tau = 2.0 * core::f64::consts::PI;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, tau * k as f64 / n as f64 + phase + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut largest: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = eval_with_derivative(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                largest = largest.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if largest < 1e-15 {
            break;
        }
    }
    z
}
