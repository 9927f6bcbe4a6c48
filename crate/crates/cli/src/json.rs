//! JSON encodings of forms, point sets, expressions and scalars.
//!
//! Rationals are strings `"p/q"`, complex numbers are `[re, im]` pairs, and
//! floats are written with 17 significant digits. Objects serialize with
//! sorted keys.

use std::str::FromStr;

use serde_json::{json, Map, Number, Value};
use sextic_core::pointsets::{PointSet, WaringExpression};
use sextic_core::{monomials, Complex64, Exponent, Field, Rational, TernaryForm};

use crate::error::CliError;

pub const SCHEMA_VERSION: u64 = 1;

/// Adds `"schema_version"` to a report object.
pub fn report(mut body: Map<String, Value>) -> Value {
    body.insert("schema_version".into(), json!(SCHEMA_VERSION));
    Value::Object(body)
}

pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float is a JSON number"))
}

pub fn complex(z: Complex64) -> Value {
    json!([float(z.re), float(z.im)])
}

/// Scalars that have a JSON encoding.
pub trait Encode: Field {
    fn encode(&self) -> Value;
}

impl Encode for Rational {
    fn encode(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl Encode for Complex64 {
    fn encode(&self) -> Value {
        complex(*self)
    }
}

pub fn encode_form<T: Encode>(form: &TernaryForm<T>) -> Value {
    let coefficients: Vec<Value> = monomials(form.degree())
        .into_iter()
        .filter_map(|e| {
            let c = form.coefficient(&e);
            (!c.is_zero()).then(|| json!({"e": e.0, "v": c.encode()}))
        })
        .collect();
    json!({"degree": form.degree(), "coefficients": coefficients})
}

pub fn encode_points<T: Encode>(z: &PointSet<T>) -> Value {
    let points: Vec<Value> = z
        .points()
        .iter()
        .map(|p| Value::Array(p.coords().iter().map(Encode::encode).collect()))
        .collect();
    json!({ "points": points })
}

pub fn encode_expression<T: Encode>(expr: &WaringExpression<T>) -> Value {
    let mut body = encode_points(&expr.points);
    body["degree"] = json!(expr.degree);
    body["coefficients"] = Value::Array(expr.coefficients.iter().map(Encode::encode).collect());
    body
}

/// A scalar as read from JSON, before the input is assigned an arithmetic.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rational),
    Float(Complex64),
}

impl Scalar {
    fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    fn rational(&self) -> Rational {
        match self {
            Scalar::Exact(q) => q.clone(),
            Scalar::Float(_) => unreachable!("checked by the caller"),
        }
    }

    fn complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(q) => q.to_complex(),
            Scalar::Float(z) => *z,
        }
    }
}

/// Parses `"p/q"`, `"p"`, a JSON number, or a `[re, im]` pair.
pub fn parse_scalar(v: &Value, what: &str) -> Result<Scalar, CliError> {
    match v {
        Value::String(s) => parse_scalar_str(s).ok_or_else(|| CliError::input(format!("{what}: cannot read {s:?}"))),
        Value::Number(n) => number(n, what).map(|x| Scalar::Float(Complex64::new(x, 0.0))),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_number().ok_or_else(|| CliError::input(format!("{what}: real part is not a number")))?;
            let im = pair[1].as_number().ok_or_else(|| CliError::input(format!("{what}: imaginary part is not a number")))?;
            Ok(Scalar::Float(Complex64::new(number(re, what)?, number(im, what)?)))
        }
        other => Err(CliError::input(format!("{what}: expected a rational string or [re, im], found {other}"))),
    }
}

fn number(n: &Number, what: &str) -> Result<f64, CliError> {
    n.to_string()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::input(format!("{what}: {n} is not a finite number")))
}

/// A rational string, or failing that a decimal float.
pub fn parse_scalar_str(s: &str) -> Option<Scalar> {
    let s = s.trim();
    if let Ok(q) = Rational::from_str(s) {
        return Some(Scalar::Exact(q));
    }
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .map(|x| Scalar::Float(Complex64::new(x, 0.0)))
}

/// Input data in exact or floating arithmetic. Mixed input is read as floating.
#[derive(Clone, Debug)]
pub enum Data<E, F> {
    Exact(E),
    Float(F),
}

pub type FormData = Data<TernaryForm<Rational>, TernaryForm<Complex64>>;
pub type PointsData = Data<PointSet<Rational>, PointSet<Complex64>>;

/// A parsed form: exponent/value pairs plus the declared degree.
#[derive(Clone, Debug)]
pub struct RawForm {
    pub degree: u32,
    pub terms: Vec<(Exponent, Scalar)>,
}

impl RawForm {
    pub fn is_exact(&self) -> bool {
        self.terms.iter().all(|t| t.1.is_exact())
    }

    pub fn exact(&self) -> Result<TernaryForm<Rational>, CliError> {
        let terms = self.terms.iter().map(|(e, v)| (*e, v.rational()));
        Ok(TernaryForm::from_terms(self.degree, terms)?)
    }

    pub fn complex(&self) -> Result<TernaryForm<Complex64>, CliError> {
        let terms = self.terms.iter().map(|(e, v)| (*e, v.complex()));
        Ok(TernaryForm::from_terms(self.degree, terms)?)
    }

    pub fn data(&self) -> Result<FormData, CliError> {
        Ok(if self.is_exact() { Data::Exact(self.exact()?) } else { Data::Float(self.complex()?) })
    }
}

pub fn parse_form(v: &Value) -> Result<RawForm, CliError> {
    let degree = v
        .get("degree")
        .and_then(Value::as_u64)
        .and_then(|d| u32::try_from(d).ok())
        .ok_or_else(|| CliError::input("form: missing or invalid \"degree\""))?;
    let entries = v
        .get("coefficients")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::input("form: missing \"coefficients\" array"))?;
    let mut terms = Vec::with_capacity(entries.len());
    for (i, entry) in entries.iter().enumerate() {
        let e = entry
            .get("e")
            .and_then(Value::as_array)
            .filter(|e| e.len() == 3)
            .ok_or_else(|| CliError::input(format!("form: coefficient {i} needs a three-entry \"e\"")))?;
        let mut exponent = [0u32; 3];
        for (slot, x) in exponent.iter_mut().zip(e) {
            *slot = x
                .as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| CliError::input(format!("form: coefficient {i} has a bad exponent")))?;
        }
        let value = entry
            .get("v")
            .ok_or_else(|| CliError::input(format!("form: coefficient {i} has no \"v\"")))?;
        terms.push((Exponent(exponent), parse_scalar(value, &format!("form coefficient {i}"))?));
    }
    Ok(RawForm { degree, terms })
}

pub type RawPoint = [Scalar; 3];

pub fn parse_point(v: &Value, what: &str) -> Result<RawPoint, CliError> {
    let coords = v
        .as_array()
        .filter(|c| c.len() == 3)
        .ok_or_else(|| CliError::input(format!("{what}: expected three coordinates")))?;
    Ok([
        parse_scalar(&coords[0], what)?,
        parse_scalar(&coords[1], what)?,
        parse_scalar(&coords[2], what)?,
    ])
}

/// `"1,2,-1/3"`: three comma-separated rationals or decimals.
pub fn parse_point_arg(s: &str) -> Result<RawPoint, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::input(format!("point {s:?}: expected three comma-separated coordinates")));
    }
    let read = |p: &str| parse_scalar_str(p).ok_or_else(|| CliError::input(format!("point {s:?}: cannot read {p:?}")));
    Ok([read(parts[0])?, read(parts[1])?, read(parts[2])?])
}

pub fn parse_points(v: &Value) -> Result<Vec<RawPoint>, CliError> {
    v.get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::input("point set: missing \"points\" array"))?
        .iter()
        .enumerate()
        .map(|(i, p)| parse_point(p, &format!("point {i}")))
        .collect()
}

pub fn points_exact(points: &[RawPoint]) -> bool {
    points.iter().flatten().all(Scalar::is_exact)
}

pub fn exact_coords(points: &[RawPoint]) -> Vec<[Rational; 3]> {
    points.iter().map(|p| [p[0].rational(), p[1].rational(), p[2].rational()]).collect()
}

pub fn complex_coords(points: &[RawPoint]) -> Vec<[Complex64; 3]> {
    points.iter().map(|p| [p[0].complex(), p[1].complex(), p[2].complex()]).collect()
}

pub fn point_set<T: Field>(coords: Vec<[T; 3]>) -> Result<PointSet<T>, CliError> {
    Ok(PointSet::from_coords(coords)?)
}

/// `{"degree": d, "points": [...], "coefficients": [...]}`.
pub struct RawExpression {
    pub degree: u32,
    pub points: Vec<RawPoint>,
    pub coefficients: Vec<Scalar>,
}

impl RawExpression {
    pub fn is_exact(&self) -> bool {
        points_exact(&self.points) && self.coefficients.iter().all(Scalar::is_exact)
    }

    pub fn exact(&self) -> Result<WaringExpression<Rational>, CliError> {
        let z = point_set(exact_coords(&self.points))?;
        Ok(WaringExpression::new(z, self.coefficients.iter().map(Scalar::rational).collect(), self.degree)?)
    }

    pub fn complex(&self) -> Result<WaringExpression<Complex64>, CliError> {
        let z = point_set(complex_coords(&self.points))?;
        Ok(WaringExpression::new(z, self.coefficients.iter().map(Scalar::complex).collect(), self.degree)?)
    }
}

pub fn parse_expression(v: &Value) -> Result<RawExpression, CliError> {
    let degree = v
        .get("degree")
        .and_then(Value::as_u64)
        .and_then(|d| u32::try_from(d).ok())
        .ok_or_else(|| CliError::input("expression: missing or invalid \"degree\""))?;
    let points = parse_points(v)?;
    let coefficients = v
        .get("coefficients")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::input("expression: missing \"coefficients\" array"))?
        .iter()
        .enumerate()
        .map(|(i, c)| parse_scalar(c, &format!("expression coefficient {i}")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RawExpression {
        degree,
        points,
        coefficients,
    })
}
