//! One function per subcommand. Each returns the report object without
//! `"schema_version"`, which the caller adds.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde_json::{json, Map, Value};
use sextic_core::apolarity::catalecticant;
use sextic_core::engine::{
    classify, construct_wprime_form, decompose_via_kernel_cubics, random_form, second_decomposition,
    verify_expression, StratumReport,
};
use sextic_core::flattening::{h27, h27_normalized, h27_vanishes};
use sextic_core::intersect::intersect_curves;
use sextic_core::pointsets::{h_vector, is_complete_intersection_33, PointSet};
use sextic_core::terracini::{check_lambda_n_squared, cubic_det, n_value, n_value_at, r_det, random_real_point, terracini_matrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sextic_core::{Error, Field, TernaryForm};

use crate::error::CliError;
use crate::json::{self, complex, encode_expression, encode_form, encode_points, float, report, Data, Encode, RawPoint};

pub type Report = Map<String, Value>;

fn object(v: Value) -> Report {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("reports are objects"),
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn read_form(path: &Path) -> Result<json::RawForm, CliError> {
    json::parse_form(&read_json(path)?)
}

fn read_points(path: &Path) -> Result<Vec<RawPoint>, CliError> {
    json::parse_points(&read_json(path)?)
}

fn stratum(r: &StratumReport) -> Value {
    json!({
        "rank_c3": r.rank_c3,
        "h27_vanishes": r.h27_vanishes,
        "h27_normalized": float(r.h27_normalized),
        "label": r.label.to_string(),
        "expected_decompositions": r.expected_decompositions.to_string(),
        "notes": r.notes,
    })
}

fn classify_one(path: &Path, tol: f64) -> Result<Value, CliError> {
    let r = match read_form(path)?.data()? {
        Data::Exact(f) => classify(&f, tol)?,
        Data::Float(f) => classify(&f, tol)?,
    };
    Ok(stratum(&r))
}

/// A single file gives its report; several give a `"reports"` list with one
/// entry per file, in input order. The returned error, if any, is the most
/// severe one and decides the exit code.
pub fn classify_files(files: &[PathBuf], tol: f64, jobs: usize) -> (Report, Option<CliError>) {
    if let [file] = files {
        return match classify_one(file, tol) {
            Ok(r) => (object(r), None),
            Err(e) => (Report::new(), Some(e)),
        };
    }
    let results: Vec<Mutex<Option<Result<Value, CliError>>>> = files.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, files.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(file) = files.get(i) else { break };
                *results[i].lock().expect("no panics while held") = Some(classify_one(file, tol));
            });
        }
    });
    let mut worst: Option<CliError> = None;
    let reports: Vec<Value> = files
        .iter()
        .zip(results)
        .map(|(file, slot)| {
            let name = file.display().to_string();
            match slot.into_inner().expect("no panics while held").expect("every file is processed") {
                Ok(r) => json!({"file": name, "report": r}),
                Err(e) => {
                    let entry = json!({"file": name, "error": {"name": e.name(), "message": e.to_string()}});
                    if worst.as_ref().is_none_or(|w| e.is_numerical() && !w.is_numerical()) {
                        worst = Some(e);
                    }
                    entry
                }
            }
        })
        .collect();
    let mut body = Report::new();
    body.insert("reports".into(), Value::Array(reports));
    (body, worst)
}

pub fn decompose(path: &Path, tol: f64) -> Result<Report, CliError> {
    let d = match read_form(path)?.data()? {
        Data::Exact(f) => decompose_via_kernel_cubics(&f, tol)?,
        Data::Float(f) => decompose_via_kernel_cubics(&f, tol)?,
    };
    Ok(object(json!({
        "intersection": encode_points(&d.intersection)["points"],
        "coefficients": d.coefficients.iter().map(|c| complex(*c)).collect::<Vec<_>>(),
        "expression": encode_expression(&d.expression),
        "verdict": d.verdict.to_string(),
        "residual": float(d.residual),
    })))
}

pub fn second(form: &Path, points: &Path, tol: f64) -> Result<Report, CliError> {
    let raw = read_form(form)?;
    let pts = read_points(points)?;
    let d = if raw.is_exact() && json::points_exact(&pts) {
        second_decomposition(&raw.exact()?, &json::point_set(json::exact_coords(&pts))?, tol)?
    } else {
        second_decomposition(&raw.complex()?, &json::point_set(json::complex_coords(&pts))?, tol)?
    };
    Ok(object(json!({
        "points": encode_points(&d.points)["points"],
        "expression": encode_expression(&d.expression),
        "residual": float(d.residual),
        "union_h_vector": d.union_h_vector.values(),
        "generators": d.generators.iter().map(encode_form).collect::<Vec<_>>(),
    })))
}

fn wprime_report<T: Encode>(cubics: [&TernaryForm<T>; 3], tol: f64) -> Result<Report, CliError> {
    let form = construct_wprime_form(cubics, tol)?;
    let r = classify(&form, tol)?;
    Ok(object(json!({"form": encode_form(&form), "report": stratum(&r)})))
}

pub fn wprime(paths: &[PathBuf; 3], tol: f64) -> Result<Report, CliError> {
    let raw = paths.iter().map(|p| read_form(p)).collect::<Result<Vec<_>, _>>()?;
    if raw.iter().all(json::RawForm::is_exact) {
        let c = raw.iter().map(json::RawForm::exact).collect::<Result<Vec<_>, _>>()?;
        wprime_report([&c[0], &c[1], &c[2]], tol)
    } else {
        let c = raw.iter().map(json::RawForm::complex).collect::<Result<Vec<_>, _>>()?;
        wprime_report([&c[0], &c[1], &c[2]], tol)
    }
}

fn invariants_of<T: Encode>(form: &TernaryForm<T>, tol: f64) -> Result<Report, CliError> {
    if form.degree() != 6 {
        return Err(Error::WrongDegree {
            expected: 6,
            found: form.degree(),
        }
        .into());
    }
    let cat = catalecticant(form, 3)?;
    let raw = h27(form)?;
    let vanishes = if T::EXACT { raw.is_zero() } else { h27_vanishes(form, tol)? };
    Ok(object(json!({
        "rank_c3": cat.rank(tol),
        "det_c3": cat.matrix.determinant()?.encode(),
        "h27": raw.encode(),
        "h27_normalized": float(if T::EXACT && vanishes { 0.0 } else { h27_normalized(form)? }),
        "h27_vanishes": vanishes,
    })))
}

pub fn invariants(path: &Path, tol: f64) -> Result<Report, CliError> {
    match read_form(path)?.data()? {
        Data::Exact(f) => invariants_of(&f, tol),
        Data::Float(f) => invariants_of(&f, tol),
    }
}

fn hvector_of<T: Field>(z: &PointSet<T>, tol: f64) -> Result<Report, CliError> {
    let h = h_vector(z, tol);
    let ci = if z.len() == 9 { is_complete_intersection_33(z, tol)? } else { false };
    Ok(object(json!({
        "count": z.len(),
        "h_vector": h.values(),
        "complete_intersection_33": ci,
    })))
}

pub fn hvector(path: &Path, tol: f64) -> Result<Report, CliError> {
    let pts = read_points(path)?;
    points_data(&pts)?.map_both(|z| hvector_of(z, tol), |z| hvector_of(z, tol))
}

fn points_data(pts: &[RawPoint]) -> Result<json::PointsData, CliError> {
    Ok(if json::points_exact(pts) {
        Data::Exact(json::point_set(json::exact_coords(pts))?)
    } else {
        Data::Float(json::point_set(json::complex_coords(pts))?)
    })
}

impl<E, F> Data<E, F> {
    fn map_both<R>(&self, exact: impl FnOnce(&E) -> R, float: impl FnOnce(&F) -> R) -> R {
        match self {
            Data::Exact(e) => exact(e),
            Data::Float(f) => float(f),
        }
    }
}

pub fn intersect(c1: &Path, c2: &Path, seed: u64) -> Result<Report, CliError> {
    let (f, g) = (read_form(c1)?, read_form(c2)?);
    let found = if f.is_exact() && g.is_exact() {
        intersect_curves(&f.exact()?, &g.exact()?, seed)?
    } else {
        intersect_curves(&f.complex()?, &g.complex()?, seed)?
    };
    let points: Vec<Value> = found
        .iter()
        .map(|p| {
            json!({
                "point": p.point.coords().iter().map(|c| complex(*c)).collect::<Vec<_>>(),
                "multiplicity": p.multiplicity,
            })
        })
        .collect();
    Ok(object(json!({
        "count": found.iter().map(|p| p.multiplicity).sum::<usize>(),
        "points": points,
    })))
}

const DEGENERATE_NOTE: &str = "the nine points lie on a pencil of cubics; C and R vanish identically and N is undefined";

fn terracini_of<T: Encode>(points: &[[T; 3]], aux: &[T; 3], tol: f64) -> Result<Report, CliError> {
    let mut tenth = points.to_vec();
    tenth.push(aux.clone());
    Ok(object(json!({
        "rank_t": terracini_matrix(points)?.rank(tol),
        "c": cubic_det(&tenth)?.encode(),
        "r": r_det(points, aux)?.encode(),
    })))
}

pub fn terracini(path: &Path, aux: Option<RawPoint>, seed: u64, tol: f64) -> Result<Report, CliError> {
    let pts = read_points(path)?;
    if pts.len() != 9 {
        return Err(Error::WrongCardinality {
            expected: 9,
            found: pts.len(),
        }
        .into());
    }
    let units = json::complex_coords(&pts);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let evaluation = match &aux {
        Some(q) => n_value_at(&units, [json::complex_coords(std::slice::from_ref(q))[0], random_real_point(&mut rng)]),
        None => n_value(&units, seed),
    };
    let evaluation = match evaluation {
        Ok(n) => Some(n),
        Err(Error::DegenerateCubicSystem { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let mut body = match (aux, &evaluation) {
        (Some(q), _) if json::points_exact(&pts) && json::points_exact(std::slice::from_ref(&q)) => {
            terracini_of(&json::exact_coords(&pts), &json::exact_coords(&[q])[0], tol)?
        }
        (Some(q), _) => terracini_of(&units, &json::complex_coords(&[q])[0], tol)?,
        (None, Some(n)) => terracini_of(&units, &n.aux[0], tol)?,
        (None, None) => terracini_of(&units, &random_real_point(&mut rng), tol)?,
    };
    if json::points_exact(&pts) {
        body.insert("rank_t".into(), json!(terracini_matrix(&json::exact_coords(&pts))?.rank(tol)));
    }
    match evaluation {
        Some(n) => {
            let check = check_lambda_n_squared(&units, seed)?;
            body.insert("n".into(), complex(n.value));
            body.insert("aux".into(), json!(n.aux.iter().map(|q| q.iter().map(|c| complex(*c)).collect::<Vec<_>>()).collect::<Vec<_>>()));
            body.insert("n_gap".into(), float(n.gap));
            body.insert(
                "lambda_check".into(),
                json!({
                    "lambda": complex(check.lambda),
                    "h27": complex(check.h27),
                    "n": complex(check.n),
                    "relative_residual": float(check.relative_residual),
                }),
            );
        }
        None => {
            body.insert("n".into(), Value::Null);
            body.insert("note".into(), json!(DEGENERATE_NOTE));
        }
    }
    Ok(body)
}

pub fn random(rank: usize, seed: u64, out: &Path) -> Result<Report, CliError> {
    let (form, witness) = random_form(rank, seed)?;
    fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let form_path = out.join("form.json");
    let witness_path = out.join("witness.json");
    for (path, value) in [(&form_path, encode_form(&form)), (&witness_path, encode_expression(&witness))] {
        let text = serde_json::to_string_pretty(&value).expect("values serialize") + "\n";
        fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(object(json!({
        "rank": rank,
        "seed": seed,
        "form": form_path.display().to_string(),
        "witness": witness_path.display().to_string(),
    })))
}

pub fn verify(form: &Path, expression: &Path, tol: f64) -> Result<Report, CliError> {
    let f = read_form(form)?;
    let e = json::parse_expression(&read_json(expression)?)?;
    let v = if f.is_exact() && e.is_exact() {
        verify_expression(&f.exact()?, &e.exact()?, tol)?
    } else {
        verify_expression(&f.complex()?, &e.complex()?, tol)?
    };
    Ok(object(json!({
        "residual": float(v.residual),
        "non_redundant": v.non_redundant,
    })))
}

/// Top-level keys one per line, values as compact JSON.
pub fn render_text(body: &Report) -> String {
    body.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

pub fn render_json(body: Report) -> String {
    serde_json::to_string_pretty(&report(body)).expect("values serialize")
}
