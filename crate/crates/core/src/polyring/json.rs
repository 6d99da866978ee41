//! JSON forms for polynomials and matrices.
//!
//! Polynomials: `{"vars": n, "terms": [{"exp": [..], "num": int, "den": int}]}`
//! in exact mode and `{"vars": n, "terms": [{"exp": [..], "coef": float}]}` in
//! float mode. Integers too large for `i64` are written as decimal strings.
//! Terms are emitted in descending graded-lex order.
//!
//! Matrices: `{"m": rows, "n": cols, "rows": [[..], ..]}`. Entries may be
//! JSON integers or `"p/q"` strings (exact), or JSON floats (float). A single
//! float entry makes the whole matrix float.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use super::{AnyMatrix, AnyPolynomial, Coeff, Matrix, Polynomial, Rational, Scalar};
use crate::error::{Error, Result};

fn int_value(i: &BigInt) -> Value {
    match i.to_i64() {
        Some(v) => json!(v),
        None => Value::String(i.to_string()),
    }
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::parse(format!("expected an integer, got {n}"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("expected an integer, got {s:?}"))),
        other => Err(Error::parse(format!("expected an integer, got {other}"))),
    }
}

pub fn exact_polynomial_to_json(p: &Polynomial<Rational>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| json!({"exp": m.exponents(), "num": int_value(c.numer()), "den": int_value(c.denom())}))
        .collect();
    json!({"vars": p.var_count(), "terms": terms})
}

pub fn float_polynomial_to_json(p: &Polynomial<f64>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| json!({"exp": m.exponents(), "coef": c}))
        .collect();
    json!({"vars": p.var_count(), "terms": terms})
}

pub fn polynomial_to_json(p: &AnyPolynomial) -> Value {
    match p {
        AnyPolynomial::Exact(p) => exact_polynomial_to_json(p),
        AnyPolynomial::Float(p) => float_polynomial_to_json(p),
    }
}

pub fn polynomial_from_json(v: &Value) -> Result<AnyPolynomial> {
    let vars = v
        .get("vars")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::parse("polynomial needs a positive integer \"vars\""))? as usize;
    if vars == 0 {
        return Err(Error::parse("polynomial needs at least one variable"));
    }
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("polynomial needs a \"terms\" array"))?;
    let float_mode = terms.iter().any(|t| t.get("coef").is_some());
    let mut exact_terms = Vec::new();
    let mut float_terms = Vec::new();
    for t in terms {
        let exp: Vec<u32> = t
            .get("exp")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("term needs an \"exp\" array"))?
            .iter()
            .map(|e| {
                e.as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| Error::parse("exponents must be non-negative integers"))
            })
            .collect::<Result<_>>()?;
        if float_mode {
            let c = t
                .get("coef")
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::parse("float-mode term needs a numeric \"coef\""))?;
            float_terms.push((exp, c));
        } else {
            let num = parse_int(t.get("num").ok_or_else(|| Error::parse("exact term needs \"num\""))?)?;
            let den = match t.get("den") {
                Some(d) => parse_int(d)?,
                None => BigInt::from(1),
            };
            if den.is_zero() {
                return Err(Error::parse("zero denominator"));
            }
            exact_terms.push((exp, Rational::new(num, den)));
        }
    }
    if float_mode {
        Polynomial::from_terms(vars, float_terms).map(AnyPolynomial::Float)
    } else {
        Polynomial::from_terms(vars, exact_terms).map(AnyPolynomial::Exact)
    }
}

fn exact_entry(r: &Rational) -> Value {
    if r.is_integer() {
        int_value(r.numer())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

pub fn matrix_to_json(m: &AnyMatrix) -> Value {
    let rows: Vec<Value> = match m {
        AnyMatrix::Exact(m) => (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(exact_entry).collect()))
            .collect(),
        AnyMatrix::Float(m) => (0..m.rows()).map(|i| json!(m.row(i))).collect(),
    };
    json!({"m": m.rows(), "n": m.cols(), "rows": rows})
}

pub fn exact_matrix_to_json(m: &Matrix<Rational>) -> Value {
    matrix_to_json(&AnyMatrix::Exact(m.clone()))
}

pub fn float_matrix_to_json(m: &Matrix<f64>) -> Value {
    matrix_to_json(&AnyMatrix::Float(m.clone()))
}

fn parse_entry(v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Scalar::Exact(Rational::from_i64(i)))
            } else {
                n.as_f64()
                    .map(Scalar::Float)
                    .ok_or_else(|| Error::parse(format!("bad number {n}")))
            }
        }
        Value::String(s) => super::parse_scalar(s),
        other => Err(Error::parse(format!(
            "matrix entry must be a number or string, got {other}"
        ))),
    }
}

pub fn matrix_from_json(v: &Value) -> Result<AnyMatrix> {
    let rows = v
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("matrix needs a \"rows\" array"))?;
    let parsed: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::parse("each matrix row must be an array"))?
                .iter()
                .map(parse_entry)
                .collect()
        })
        .collect::<Result<_>>()?;
    let m = parsed.len();
    let n = parsed.first().map_or(0, Vec::len);
    if let Some(dm) = v.get("m") {
        if dm.as_u64() != Some(m as u64) {
            return Err(Error::parse(format!("\"m\" = {dm} but {m} rows given")));
        }
    }
    if let Some(dn) = v.get("n") {
        if dn.as_u64() != Some(n as u64) {
            return Err(Error::parse(format!("\"n\" = {dn} but rows have {n} entries")));
        }
    }
    if m == 0 || n == 0 {
        return Err(Error::parse("matrix must be non-empty"));
    }
    let any_float = parsed.iter().flatten().any(|s| matches!(s, Scalar::Float(_)));
    if any_float {
        let rows = parsed.iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect();
        Matrix::from_rows(rows).map(AnyMatrix::Float)
    } else {
        let rows = parsed
            .iter()
            .map(|r| r.iter().map(Rational::from_scalar).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows).map(AnyMatrix::Exact)
    }
}
