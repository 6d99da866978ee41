//! JSON form of a star symbol:
//! `{"p": <polynomial> | {"elementary": k}, "U": {"m": .., "n": .., "rows": [..]}}`.
//!
//! An elementary `p` takes the coefficient field of `U`. An explicit
//! polynomial must carry the same field as `U`.

use serde_json::{json, Value};

use super::{AnyStar, BranchMatrix, StarSymbol};
use crate::error::{Error, Result};
use crate::polyring::json::{exact_matrix_to_json, float_matrix_to_json, polynomial_from_json};
use crate::polyring::{
    elementary_degree, elementary_symmetric, json as pjson, AnyMatrix, AnyPolynomial, Coeff, Polynomial,
};

pub fn star_from_json(v: &Value) -> Result<AnyStar> {
    let u = pjson::matrix_from_json(v.get("U").ok_or_else(|| Error::parse("star symbol needs \"U\""))?)?;
    let p = v.get("p").ok_or_else(|| Error::parse("star symbol needs \"p\""))?;
    if let Some(k) = p.get("elementary") {
        let k = k
            .as_u64()
            .ok_or_else(|| Error::parse("\"elementary\" must be a non-negative integer"))? as usize;
        return match u {
            AnyMatrix::Exact(u) => {
                let b = BranchMatrix::new(u)?;
                StarSymbol::new(elementary_symmetric(k, b.m())?, b).map(AnyStar::Exact)
            }
            AnyMatrix::Float(u) => {
                let b = BranchMatrix::new(u)?;
                StarSymbol::new(elementary_symmetric(k, b.m())?, b).map(AnyStar::Float)
            }
        };
    }
    match (polynomial_from_json(p)?, u) {
        (AnyPolynomial::Exact(p), AnyMatrix::Exact(u)) => StarSymbol::new(p, BranchMatrix::new(u)?).map(AnyStar::Exact),
        (AnyPolynomial::Float(p), AnyMatrix::Float(u)) => StarSymbol::new(p, BranchMatrix::new(u)?).map(AnyStar::Float),
        _ => Err(Error::TagMismatch),
    }
}

fn p_json<C: Coeff>(p: &Polynomial<C>, full: impl Fn(&Polynomial<C>) -> Value) -> Value {
    match elementary_degree(p) {
        Some(k) => json!({"elementary": k}),
        None => full(p),
    }
}

pub fn star_to_json(s: &AnyStar) -> Value {
    match s {
        AnyStar::Exact(s) => json!({
            "p": p_json(s.polynomial(), pjson::exact_polynomial_to_json),
            "U": exact_matrix_to_json(s.branches().matrix()),
        }),
        AnyStar::Float(s) => json!({
            "p": p_json(s.polynomial(), pjson::float_polynomial_to_json),
            "U": float_matrix_to_json(s.branches().matrix()),
        }),
    }
}
