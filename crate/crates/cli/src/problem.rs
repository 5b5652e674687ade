//! Problem files: `{"dim", "theta", "R", "gamma"?}` with every scalar either a
//! JSON number (float mode) or a string such as `"3/4"`, `"-2"` or `"0.25"`
//! (exact mode).

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::Value;
use srbm_core::{Matrix, ProblemData, Rational, Scalar};

use crate::error::CliError;

#[derive(Debug, Clone)]
pub enum Problem {
    Exact(ProblemData<Rational>),
    Float(ProblemData<f64>),
}

impl Problem {
    pub fn to_f64(&self) -> ProblemData<f64> {
        match self {
            Problem::Exact(d) => d.to_f64(),
            Problem::Float(d) => d.clone(),
        }
    }
}

pub fn parse_problem(text: &str) -> Result<Problem, CliError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| CliError::Input("problem file must be a JSON object".into()))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "dim" | "theta" | "R" | "gamma") {
            return Err(CliError::Input(format!("unknown key {key:?}")));
        }
    }
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| CliError::Input("\"dim\" must be 2 or 3".into()))? as usize;
    if !(2..=3).contains(&dim) {
        return Err(CliError::Input(format!("\"dim\" must be 2 or 3, got {dim}")));
    }
    let theta = vector(obj.get("theta"), dim, "theta")?;
    let r = matrix(obj.get("R"), dim, "R")?;
    let gamma = obj.get("gamma").map(|g| matrix(Some(g), dim, "gamma")).transpose()?;

    let mut scalars: Vec<&Value> = theta.clone();
    scalars.extend(r.iter().flatten());
    if let Some(g) = &gamma {
        scalars.extend(g.iter().flatten());
    }
    let all_numbers = scalars.iter().all(|v| v.is_number());
    let all_strings = scalars.iter().all(|v| v.is_string());
    if all_numbers {
        Ok(Problem::Float(build(&theta, &r, gamma.as_deref(), float_scalar)?))
    } else if all_strings {
        Ok(Problem::Exact(build(&theta, &r, gamma.as_deref(), exact_scalar)?))
    } else {
        Err(CliError::Input(
            "scalars must be all JSON numbers (float mode) or all strings (exact mode)".into(),
        ))
    }
}

fn vector<'a>(v: Option<&'a Value>, dim: usize, name: &str) -> Result<Vec<&'a Value>, CliError> {
    let arr = v
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Input(format!("\"{name}\" must be an array")))?;
    if arr.len() != dim {
        return Err(CliError::Input(format!("\"{name}\" has {} entries, expected {dim}", arr.len())));
    }
    Ok(arr.iter().collect())
}

fn matrix<'a>(v: Option<&'a Value>, dim: usize, name: &str) -> Result<Vec<Vec<&'a Value>>, CliError> {
    vector(v, dim, name)?
        .into_iter()
        .map(|row| vector(Some(row), dim, name))
        .collect()
}

type ScalarParser<T> = fn(&Value) -> Result<T, CliError>;

fn build<T: Scalar>(
    theta: &[&Value],
    r: &[Vec<&Value>],
    gamma: Option<&[Vec<&Value>]>,
    parse: ScalarParser<T>,
) -> Result<ProblemData<T>, CliError> {
    let theta: Vec<T> = theta.iter().map(|v| parse(v)).collect::<Result<_, _>>()?;
    let rows = |m: &[Vec<&Value>]| -> Result<Matrix<T>, CliError> {
        let rows = m
            .iter()
            .map(|row| row.iter().map(|v| parse(v)).collect::<Result<Vec<T>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_rows(rows)?)
    };
    let r = rows(r)?;
    let data = match gamma {
        Some(g) => ProblemData::new(theta, rows(g)?, r)?,
        None => ProblemData::with_identity_covariance(theta, r)?,
    };
    Ok(data)
}

fn float_scalar(v: &Value) -> Result<f64, CliError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Input(format!("{v} is not a finite number")))
}

fn exact_scalar(v: &Value) -> Result<Rational, CliError> {
    let s = v.as_str().ok_or_else(|| CliError::Input(format!("{v} is not a string")))?;
    parse_exact(s).map_err(CliError::Input)
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"-0.125"` exactly.
pub fn parse_exact(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let bad = || format!("{s:?} is not a rational (expected \"p/q\", an integer or a decimal)");
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d == BigInt::from(0) {
            return Err(format!("{s:?} has a zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let digits_ok = |x: &str| x.chars().all(|c| c.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(bad());
    }
    let numer = BigInt::from_str(&format!("{int_part}{frac_part}")).map_err(|_| bad())?;
    let denom = BigInt::from(10).pow(frac_part.len() as u32);
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Parses a comma-separated start state in the problem's arithmetic.
pub fn parse_state<T: crate::render::CliScalar>(s: &str, dim: usize) -> Result<Vec<T>, CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != dim {
        return Err(CliError::Input(format!("--z0 needs {dim} comma-separated values, got {s:?}")));
    }
    parts.into_iter().map(|p| T::parse_arg(p).map_err(CliError::Input)).collect()
}
