//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sextic_core::apolarity::{apolar_component, catalecticant};
use sextic_core::engine::{
    classify, construct_wprime_form, decompose_via_kernel_cubics, decompose_with_cubics, random_form,
    random_line_grid, second_decomposition, verify_expression, StratumLabel, Verdict,
};
use sextic_core::flattening::{build_pf, complement_basis, derivation_matrix, h27, h27_gap, h27_normalized};
use sextic_core::intersect::intersect_cubics;
use sextic_core::linalg::{vector_norm, DEFAULT_TOL};
use sextic_core::pointsets::{h_vector, matching_distance, PointSet, WaringExpression};
use sextic_core::terracini::{
    check_lambda_n_squared, n_value, power_sum, random_real_point, sample_on_nonic, terracini_matrix,
};
use sextic_core::{Complex64, Error, Exponent, Field, Rational, TernaryForm};

type Outcome = Result<String, String>;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

fn check(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn real_points(n: usize, rng: &mut ChaCha8Rng) -> Vec<[Complex64; 3]> {
    (0..n).map(|_| random_real_point(rng)).collect()
}

fn integer_cubic(rng: &mut ChaCha8Rng) -> TernaryForm<Rational> {
    let c: Vec<Rational> = (0..10).map(|_| Rational::from_i64(rng.gen_range(-5..=5))).collect();
    TernaryForm::from_dense(3, &c).unwrap()
}

/// The nine points of two random real cubics, when they are all real.
fn complete_intersection(seed: u64) -> Vec<[Complex64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let a = integer_cubic(&mut rng);
        let b = integer_cubic(&mut rng);
        if let Ok(points) = intersect_cubics(&a, &b, seed) {
            if points.len() == 9 {
                return points.iter().map(|p| p.point.unit()).collect();
            }
        }
    }
}

/// Product of elementary integer matrices, so the determinant is exactly 1.
fn unimodular(rng: &mut ChaCha8Rng) -> [[Rational; 3]; 3] {
    let mut g = [[0i64; 3]; 3];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 1;
    }
    for _ in 0..4 {
        let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
        if i == j {
            continue;
        }
        let k: i64 = rng.gen_range(-2..=2);
        for c in 0..3 {
            g[i][c] += k * g[j][c];
        }
    }
    g.map(|row| row.map(Rational::from_i64))
}

/// A rotation times `diag(s, t, 1/(st))`: determinant 1 and well conditioned.
fn special_linear(rng: &mut ChaCha8Rng) -> [[Complex64; 3]; 3] {
    let mut g = [[0.0f64; 3]; 3];
    let (s, t) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
    for (i, d) in [s, t, 1.0 / (s * t)].into_iter().enumerate() {
        g[i][i] = d;
    }
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let (sin, cos) = rng.gen_range(0.0..std::f64::consts::TAU).sin_cos();
        for row in g.iter_mut() {
            let (a, b) = (row[i], row[j]);
            row[i] = cos * a - sin * b;
            row[j] = sin * a + cos * b;
        }
    }
    g.map(|row| row.map(|x| Complex64::new(x, 0.0)))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut points = Vec::new();
    let mut coefficients = Vec::new();
    for p in 0..3 {
        for q in 0..3 {
            points.push([Complex64::new(1.0, 0.0), w.powi(p), w.powi(q)]);
            coefficients.push(w.powi(p + q));
        }
    }
    let expr = WaringExpression::new(PointSet::from_coords(points).unwrap(), coefficients, 6).unwrap();
    let f = TernaryForm::monomial(Exponent::new(2, 2, 2), Complex64::new(810.0, 0.0));
    let v = verify_expression(&f, &expr, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(v.residual < 1e-10, || format!("residual {:e}", v.residual))?;
    check(elapsed < Duration::from_millis(100), || format!("took {elapsed:?}"))?;
    Ok(format!("residual {:.1e} in {:?}", v.residual, elapsed))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for seed in 0..100 {
        let (f, witness) = random_form(8, seed).unwrap();
        let d = decompose_via_kernel_cubics(&f, DEFAULT_TOL).map_err(|e| format!("seed {seed}: {e}"))?;
        check(d.verdict == Verdict::Rank8, || format!("seed {seed}: verdict {}", d.verdict))?;
        let distance = matching_distance(&d.expression.points.units(), &witness.points.units());
        check(distance < 1e-8, || format!("seed {seed}: matching distance {distance:e}"))?;
        worst = worst.max(distance);
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("100 forms, worst matching distance {worst:.1e}, {elapsed:.1?}"))
}

fn criterion_3() -> Outcome {
    for rank in [7, 8, 9, 10] {
        for seed in 0..50 {
            let (f, _) = random_form(rank, 1000 * rank as u64 + seed).unwrap();
            let report = classify(&f, 1e-9).map_err(|e| e.to_string())?;
            check(report.rank_c3 == rank.min(10), || format!("rank {rank} seed {seed}: rank_C3 {}", report.rank_c3))?;
            check(report.h27_vanishes == (rank <= 8), || format!("rank {rank} seed {seed}: H27 vanishing {}", report.h27_vanishes))?;
            let expected = [StratumLabel::S7, StratumLabel::S8, StratumLabel::S9, StratumLabel::Generic10][rank - 7];
            check(report.label == expected, || format!("rank {rank} seed {seed}: label {}", report.label))?;
        }
    }
    Ok("200 forms, no misclassification".into())
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    for frame in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(400 + frame);
        let points = real_points(9, &mut rng);
        let mut ratios = Vec::new();
        for _ in 0..5 {
            let k: Vec<f64> = (0..9).map(|_| rng.gen_range(0.5..2.0)).collect();
            let f = points.iter().zip(&k).fold(TernaryForm::zero(6), |acc, (p, &k)| {
                &acc + &TernaryForm::power_of_linear(p, 6).unwrap().scale(&Complex64::new(k, 0.0))
            });
            let product: f64 = k.iter().product();
            ratios.push(h27(&f).unwrap() / (product * product * product));
        }
        for r in &ratios[1..] {
            worst = worst.max(rel(ratios[0], *r));
        }
    }
    check(worst < 1e-6, || format!("ratio spread {worst:e}"))?;
    Ok(format!("5 frames x 5 coefficient vectors, spread {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + seed);
        let n = n_value(&real_points(9, &mut rng), seed).map_err(|e| format!("seed {seed}: {e}"))?;
        worst = worst.max(n.gap);
    }
    check(worst < 1e-8, || format!("auxiliary gap {worst:e}"))?;
    for seed in 0..10 {
        let points = complete_intersection(550 + seed);
        match n_value(&points, seed) {
            Err(Error::DegenerateCubicSystem { .. }) => {}
            other => return Err(format!("CI seed {seed}: {other:?}")),
        }
    }
    Ok(format!("auxiliary gap {worst:.1e}; 10 CI(3,3) sets rejected"))
}

fn criterion_6() -> Outcome {
    let mut lambdas = Vec::new();
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(600 + seed);
        let points = real_points(9, &mut rng);
        lambdas.push(check_lambda_n_squared(&points, seed).map_err(|e| e.to_string())?.lambda);
    }
    let spread = lambdas[1..].iter().map(|l| rel(lambdas[0], *l)).fold(0.0, f64::max);
    check(spread < 1e-6, || format!("lambda spread {spread:e}"))?;
    let mut worst: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(650 + seed);
        let mut points = real_points(8, &mut rng);
        points.push(sample_on_nonic(&points, seed).map_err(|e| e.to_string())?);
        let f = power_sum(&points.iter().map(sextic_core::pointsets::unit_representative).collect::<Vec<_>>()).unwrap();
        worst = worst.max(h27_normalized(&f).unwrap());
        worst_gap = worst_gap.max(h27_gap(&f).unwrap());
    }
    check(worst < 1e-6, || format!("normalized H27 {worst:e} on the nonic"))?;
    check(worst_gap < 1e-9, || format!("A_f gap {worst_gap:e} on the nonic"))?;
    Ok(format!("lambda spread {spread:.1e}; on the nonic normalized H27 <= {worst:.1e}, gap <= {worst_gap:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut worst_residual: f64 = 0.0;
    let mut worst_return: f64 = 0.0;
    for seed in 0..20 {
        let (f, a) = random_form(9, 700 + seed).unwrap();
        let second = second_decomposition(&f, &a.points, DEFAULT_TOL).map_err(|e| format!("seed {seed}: {e}"))?;
        let b = &second.points;
        let union = a.points.to_complex().union(b).map_err(|e| format!("seed {seed}: A and B meet: {e}"))?;
        let h = h_vector(&union, DEFAULT_TOL);
        check(h.values() == [1, 2, 3, 3, 3, 3, 2, 1], || format!("seed {seed}: h-vector {:?}", h.values()))?;
        let v = verify_expression(&f.to_complex(), &second.expression, DEFAULT_TOL).unwrap();
        check(v.residual < 1e-8, || format!("seed {seed}: residual {:e}", v.residual))?;
        worst_residual = worst_residual.max(v.residual);
        let back = second_decomposition(&f.to_complex(), b, DEFAULT_TOL).map_err(|e| format!("seed {seed} return: {e}"))?;
        let distance = matching_distance(&back.points.units(), &a.points.units());
        check(distance < 1e-6, || format!("seed {seed}: round trip distance {distance:e}"))?;
        worst_return = worst_return.max(distance);
    }
    for seed in 0..5 {
        let grid = random_line_grid(750 + seed);
        let coefficients: Vec<Rational> = (1..=9).map(Rational::from_i64).collect();
        let f = WaringExpression::new(grid.clone(), coefficients, 6).unwrap().form();
        match second_decomposition(&f, &grid, DEFAULT_TOL) {
            Err(Error::WrongHVector { .. }) => {}
            other => return Err(format!("CI seed {seed}: {:?}", other.map(|s| s.residual))),
        }
    }
    Ok(format!("20 round trips, residual <= {worst_residual:.1e}, return <= {worst_return:.1e}; CI inputs rejected"))
}

fn criterion_8() -> Outcome {
    let ci33 = random_line_grid(800);
    let h = h_vector(&ci33, 0.0);
    check(h.values() == [1, 2, 3, 2, 1], || format!("CI(3,3) h-vector {:?}", h.values()))?;
    let lines = |v: &[[i64; 3]]| -> Vec<[i64; 3]> { v.to_vec() };
    let cubic = lines(&[[1, 0, -1], [1, 0, 1], [1, 0, 3]]);
    let sextic = lines(&[[0, 1, -1], [0, 1, 1], [0, 1, 2], [0, 1, 3], [0, 1, -3], [0, 1, 5]]);
    let coords: Vec<[Rational; 3]> = cubic
        .iter()
        .flat_map(|a| sextic.iter().map(move |b| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]))
        .map(|c| c.map(Rational::from_i64))
        .collect();
    let ci36 = PointSet::from_coords(coords).unwrap();
    let h = h_vector(&ci36, 0.0);
    check(h.values() == [1, 2, 3, 3, 3, 3, 2, 1], || format!("CI(3,6) h-vector {:?}", h.values()))?;
    Ok("(1,2,3,2,1) and (1,2,3,3,3,3,2,1) exactly".into())
}

fn criterion_9() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let (_, general) = random_form(9, 900 + seed).unwrap();
        let coords: Vec<[Rational; 3]> = general.points.points().iter().map(|p| p.coords().clone()).collect();
        let rank = terracini_matrix(&coords).unwrap().rank(0.0);
        check(rank == 27, || format!("general seed {seed}: rank {rank}"))?;
        let grid = random_line_grid(950 + seed);
        let coords: Vec<[Rational; 3]> = grid.points().iter().map(|p| p.coords().clone()).collect();
        let rank = terracini_matrix(&coords).unwrap().rank(0.0);
        check(rank <= 26, || format!("CI seed {seed}: rank {rank}"))?;

        let mut rng = ChaCha8Rng::seed_from_u64(980 + seed);
        let points = real_points(9, &mut rng);
        let kernel = terracini_matrix(&points).unwrap().kernel_basis(DEFAULT_TOL);
        check(kernel.len() == 1, || format!("float seed {seed}: kernel dimension {}", kernel.len()))?;
        let z = PointSet::from_coords(points).unwrap();
        let cubic = sextic_core::pointsets::ideal_component(&z, 3, DEFAULT_TOL).remove(0);
        let square = (&cubic * &cubic).dense();
        let inner: Complex64 = kernel[0].iter().zip(&square).map(|(a, b)| a.conj() * b).sum();
        let cosine = inner.norm() / (vector_norm(&kernel[0]) * vector_norm(&square));
        worst = worst.max(1.0 - cosine);
    }
    check(worst < 1e-8, || format!("cosine deficit {worst:e}"))?;
    Ok(format!("rank 27 / <= 26 on 20 + 20 sets; kernel cosine deficit {worst:.1e}"))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let coefficients: Vec<Complex64> = (0..28).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
    let f = TernaryForm::from_dense(6, &coefficients).unwrap();
    let base = h27(&f).unwrap();
    let mut invariance: f64 = 0.0;
    for _ in 0..10 {
        let g = special_linear(&mut rng);
        invariance = invariance.max(rel(base, h27(&f.substitute_linear(&g)).unwrap()));
    }
    check(invariance < 1e-8, || format!("SL3 invariance {invariance:e}"))?;
    let exact: Vec<Rational> = (0..28).map(|_| Rational::from_i64(rng.gen_range(-5..=5))).collect();
    let exact = TernaryForm::from_dense(6, &exact).unwrap();
    let exact_base = h27(&exact).unwrap();
    check(exact_base != Rational::from_i64(0), || "exact H27 vanishes on the random form".into())?;
    for _ in 0..10 {
        let g = unimodular(&mut rng);
        let moved = h27(&exact.substitute_linear(&g)).unwrap();
        check(moved == exact_base, || "exact SL3 invariance fails for an integer unimodular matrix".into())?;
    }

    let mut homogeneity: f64 = 0.0;
    let c3 = catalecticant(&f, 3).unwrap().matrix.determinant().unwrap();
    for _ in 0..5 {
        let t = Complex64::new(rng.gen_range(0.5..2.0), 0.0);
        let ft = f.scale(&t);
        homogeneity = homogeneity.max(rel(h27(&ft).unwrap(), base * t.powi(27)));
        let c3t = catalecticant(&ft, 3).unwrap().matrix.determinant().unwrap();
        homogeneity = homogeneity.max(rel(c3t, c3 * t.powi(10)));
    }
    check(homogeneity < 1e-10, || format!("homogeneity {homogeneity:e}"))?;

    let p = build_pf(&f).unwrap();
    let q = complement_basis().to_complex();
    let d = derivation_matrix::<Complex64>();
    let block = q.transpose().mul(&p).mul(&d);
    let scale = q.frobenius_norm() * p.frobenius_norm() * d.frobenius_norm();
    let vanishing = block.max_abs() / scale;
    check(vanishing < 1e-10, || format!("equivariance block {vanishing:e}"))?;
    Ok(format!("invariance {invariance:.1e} (exact on integer matrices), homogeneity {homogeneity:.1e}, block {vanishing:.1e}"))
}

fn criterion_11() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(1100 + seed);
        let c: [TernaryForm<Rational>; 3] = std::array::from_fn(|_| integer_cubic(&mut rng));
        let f = construct_wprime_form([&c[0], &c[1], &c[2]], 0.0).map_err(|e| format!("seed {seed}: {e}"))?;
        let kernel = apolar_component(&f, 3, 0.0).unwrap().len();
        check(kernel == 3, || format!("seed {seed}: kernel dimension {kernel}"))?;
        let report = classify(&f, 0.0).unwrap();
        check(report.label == StratumLabel::Wprime, || format!("seed {seed}: label {}", report.label))?;
        let first = decompose_with_cubics(&f, &c[0], &c[1]).map_err(|e| format!("seed {seed}: {e}"))?;
        let second = decompose_with_cubics(&f, &c[0], &c[2]).map_err(|e| format!("seed {seed}: {e}"))?;
        let fc = f.to_complex();
        for d in [&first, &second] {
            let v = verify_expression(&fc, &d.expression, DEFAULT_TOL).unwrap();
            check(v.residual < 1e-8, || format!("seed {seed}: residual {:e}", v.residual))?;
            worst = worst.max(v.residual);
        }
        let apart = matching_distance(&first.expression.points.units(), &second.expression.points.units());
        check(apart > 1e-6, || format!("seed {seed}: the two decompositions coincide"))?;
    }
    Ok(format!("20 forms, residual <= {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("golden identity", criterion_1),
        ("rank-8 recovery", criterion_2),
        ("classification table", criterion_3),
        ("nine-secant determinant identity", criterion_4),
        ("factorization R = C^2 N", criterion_5),
        ("det A_f = lambda N^2", criterion_6),
        ("liaison round trip", criterion_7),
        ("exact h-vectors", criterion_8),
        ("Terracini ranks", criterion_9),
        ("invariance and degrees", criterion_10),
        ("W' pipeline", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{:.1?}]", i + 1, start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{:.1?}]", i + 1, start.elapsed());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
