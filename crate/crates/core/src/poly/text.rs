//! JSON text format for polynomials and polynomial systems.
//!
//! A polynomial is `{"vars": ["x1","x2"], "terms": [{"coef": "1", "pow": [0, 2]}, …]}`
//! with an optional `"degree_bound"` (a number applied to every variable, or one
//! number per variable) that can only raise the inferred bounds. A system is
//! `{"vars": […], "polys": [{"terms": […], "degree_bound": …}, …]}`.

use serde_json::{json, Value};

use super::multi::MultiPoly;
use crate::error::{Error, Result};
use crate::reals::{format_rational, parse_rational, ApproxReal, Interval, Precision, Rational};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Reads a rational given as a string (`"p/q"`, decimal) or a JSON number.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(parse_err(format!("expected a rational, found {v}"))),
    }
}

pub fn rational_to_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn interval_to_json(iv: &Interval) -> Value {
    json!([format_rational(iv.lo()), format_rational(iv.hi())])
}

fn vars_from_json(v: &Value) -> Result<Vec<String>> {
    let arr = v
        .get("vars")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing \"vars\" array"))?;
    arr.iter()
        .map(|s| {
            s.as_str()
                .map(str::to_owned)
                .ok_or_else(|| parse_err("variable names must be strings"))
        })
        .collect()
}

fn poly_body_from_json(v: &Value, nvars: usize) -> Result<MultiPoly> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing \"terms\" array"))?;
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        let coef = rational_from_json(
            t.get("coef")
                .ok_or_else(|| parse_err("term without \"coef\""))?,
        )?;
        let pow = t
            .get("pow")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("term without \"pow\" array"))?;
        let pow: Vec<u32> = pow
            .iter()
            .map(|e| {
                e.as_u64()
                    .and_then(|e| u32::try_from(e).ok())
                    .ok_or_else(|| parse_err("exponents must be natural numbers"))
            })
            .collect::<Result<_>>()?;
        if pow.len() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                got: pow.len(),
            });
        }
        parsed.push((ApproxReal::from_rational(coef), pow));
    }
    let bounds = match v.get("degree_bound") {
        None | Some(Value::Null) => None,
        Some(Value::Array(a)) => {
            let b: Vec<u32> = a
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|e| e as u32)
                        .ok_or_else(|| parse_err("bad degree_bound"))
                })
                .collect::<Result<_>>()?;
            if b.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: b.len(),
                });
            }
            Some(b)
        }
        Some(e) => {
            let d = e.as_u64().ok_or_else(|| parse_err("bad degree_bound"))? as u32;
            Some(vec![d; nvars])
        }
    };
    MultiPoly::from_terms(nvars, &parsed, bounds.as_deref())
}

/// Parses a single polynomial document; returns its variable names and body.
pub fn poly_from_json(v: &Value) -> Result<(Vec<String>, MultiPoly)> {
    let vars = vars_from_json(v)?;
    let f = poly_body_from_json(v, vars.len())?;
    Ok((vars, f))
}

/// Parses a polynomial system document.
pub fn system_from_json(v: &Value) -> Result<(Vec<String>, Vec<MultiPoly>)> {
    let vars = vars_from_json(v)?;
    let polys = v
        .get("polys")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("missing \"polys\" array"))?;
    let polys = polys
        .iter()
        .map(|p| poly_body_from_json(p, vars.len()))
        .collect::<Result<_>>()?;
    Ok((vars, polys))
}

/// Serializes a polynomial; lazily known coefficients are written as
/// enclosures at precision `p`.
pub fn poly_to_json(vars: &[String], f: &MultiPoly, p: Precision) -> Value {
    let terms: Vec<Value> = f
        .terms()
        .into_iter()
        .map(|(c, pow)| {
            let coef = match c.as_exact() {
                Some(q) => rational_to_json(q),
                None => interval_to_json(&c.enclosure_at(p)),
            };
            json!({"coef": coef, "pow": pow})
        })
        .collect();
    json!({"vars": vars, "terms": terms, "degree_bound": f.degree_bounds()})
}
