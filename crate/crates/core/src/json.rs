//! JSON encodings of the library's values.
//!
//! Rationals are strings `"p"` or `"p/q"`; integer JSON numbers are accepted on
//! input. Vectors are arrays of rationals.
//!
//! * series: `{"d": 2, "m": 2, "trunc": "10", "terms": [{"u": ["1/2","0"], "c": {"level": 1, "coords": ["1"]}}]}`;
//!   `trunc` is `"inf"` (or absent) for an exact series, and `c` may also be a
//!   plain rational;
//! * semigroup: `{"m": 2, "generators": [["1"], ["3/2"]]}`;
//! * Weierstrass polynomial: `{"d": 2, "coefficients": [series, …]}` listing the
//!   coefficients of `Y^0, …, Y^{n-1}` of a monic polynomial of degree `n`;
//! * branch: a series, or `{"series": series}`;
//! * fan: `{"cones": [[ray, …], …]}` with primitive integer rays.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lattice::{format_rational, parse_rational, RationalVector};
use crate::newton::Fan;
use crate::qo::{QuasiOrdinaryBranch, WeierstrassPolynomial};
use crate::semigroup::{AffineSemigroup, SemigroupIsomorphism};
use crate::series::{format_bigq, CyclotomicNumber, FractionalSeries};
use crate::{BigQ, Q};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer")))
}

pub fn rational_to_json(q: &Q) -> Value {
    Value::String(format_rational(q))
}

pub fn rational_from_json(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n.as_i64().map(Q::from_integer).ok_or_else(|| parse_err(format!("{n} is not an integer"))),
        _ => Err(parse_err(format!("expected a rational, found {v}"))),
    }
}

fn big_rational_from_str(s: &str) -> Result<BigQ> {
    let s = s.trim();
    let bad = || parse_err(format!("invalid rational {s:?}"));
    let (p, q) = match s.split_once('/') {
        None => (BigInt::from_str(s).map_err(|_| bad())?, BigInt::from(1)),
        Some((p, q)) => (BigInt::from_str(p.trim()).map_err(|_| bad())?, BigInt::from_str(q.trim()).map_err(|_| bad())?),
    };
    if q == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigQ::new(p, q))
}

fn big_rational_from_json(v: &Value) -> Result<BigQ> {
    match v {
        Value::String(s) => big_rational_from_str(s),
        Value::Number(n) => {
            n.as_i64().map(|i| BigQ::from_integer(BigInt::from(i))).ok_or_else(|| parse_err(format!("{n} is not an integer")))
        }
        _ => Err(parse_err(format!("expected a rational, found {v}"))),
    }
}

pub fn vector_to_json(v: &RationalVector) -> Value {
    Value::Array(v.coords().iter().map(rational_to_json).collect())
}

pub fn vector_from_json(v: &Value) -> Result<RationalVector> {
    let coords = as_array(v, "vector")?.iter().map(rational_from_json).collect::<Result<Vec<_>>>()?;
    Ok(RationalVector::new(coords))
}

pub fn int_matrix_to_json(m: &[Vec<i64>]) -> Value {
    json!(m)
}

pub fn cyclotomic_to_json(c: &CyclotomicNumber) -> Value {
    json!({"level": c.level(), "coords": c.to_strings()})
}

pub fn cyclotomic_from_json(v: &Value) -> Result<CyclotomicNumber> {
    if v.is_object() {
        let level = as_u64(field(v, "level")?, "level")?;
        if level == 0 {
            return Err(parse_err("cyclotomic level must be positive"));
        }
        let coords = as_array(field(v, "coords")?, "coords")?.iter().map(big_rational_from_json).collect::<Result<_>>()?;
        Ok(CyclotomicNumber::from_coords(level, coords))
    } else {
        Ok(CyclotomicNumber::from_rational(big_rational_from_json(v)?))
    }
}

pub fn series_to_json(s: &FractionalSeries) -> Value {
    let terms: Vec<Value> =
        s.terms().iter().map(|(u, c)| json!({"u": vector_to_json(u), "c": cyclotomic_to_json(c)})).collect();
    json!({
        "d": s.nvars(),
        "m": s.denom(),
        "trunc": s.trunc().map_or_else(|| Value::String("inf".into()), |t| rational_to_json(&t)),
        "terms": terms,
    })
}

pub fn series_from_json(v: &Value) -> Result<FractionalSeries> {
    if !v.is_object() {
        return Err(parse_err("a series must be an object"));
    }
    let mut terms = Vec::new();
    for t in as_array(field(v, "terms")?, "terms")? {
        terms.push((vector_from_json(field(t, "u")?)?, cyclotomic_from_json(field(t, "c")?)?));
    }
    let d = match v.get("d") {
        Some(d) => as_u64(d, "d")? as usize,
        None => terms.first().map(|(u, _)| u.rank()).ok_or_else(|| parse_err("field \"d\" is required for an empty series"))?,
    };
    let m = match v.get("m") {
        Some(m) => as_u64(m, "m")? as i64,
        None => terms.iter().fold(1i64, |acc, (u, _)| acc.lcm(&u.denominator())),
    };
    let trunc = match v.get("trunc") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) if s == "inf" => None,
        Some(t) => Some(rational_from_json(t)?),
    };
    FractionalSeries::new(d, m, trunc, terms).map_err(|e| parse_err(e.to_string()))
}

pub fn semigroup_to_json(s: &AffineSemigroup) -> Value {
    json!({
        "m": s.denominator(),
        "generators": s.generators().iter().map(vector_to_json).collect::<Vec<_>>(),
    })
}

pub fn semigroup_from_json(v: &Value) -> Result<AffineSemigroup> {
    let m = match v.get("m") {
        Some(m) => as_u64(m, "m")? as i64,
        None => 1,
    };
    let gens = as_array(field(v, "generators")?, "generators")?.iter().map(vector_from_json).collect::<Result<Vec<_>>>()?;
    AffineSemigroup::new(m, gens).map_err(|e| parse_err(e.to_string()))
}

pub fn polynomial_to_json(f: &WeierstrassPolynomial) -> Value {
    json!({
        "d": f.nvars(),
        "degree": f.degree(),
        "coefficients": f.coefficients().iter().map(series_to_json).collect::<Vec<_>>(),
    })
}

pub fn polynomial_from_json(v: &Value) -> Result<WeierstrassPolynomial> {
    let coeffs = as_array(field(v, "coefficients")?, "coefficients")?.iter().map(series_from_json).collect::<Result<Vec<_>>>()?;
    let d = match v.get("d") {
        Some(d) => as_u64(d, "d")? as usize,
        None => coeffs.first().map(FractionalSeries::nvars).ok_or_else(|| parse_err("empty coefficient list"))?,
    };
    if let Some(deg) = v.get("degree") {
        if as_u64(deg, "degree")? as usize != coeffs.len() {
            return Err(parse_err("degree does not match the number of coefficients"));
        }
    }
    WeierstrassPolynomial::new(d, coeffs).map_err(|e| parse_err(e.to_string()))
}

/// Parses the series of a branch; validation of the branch itself is left to
/// the caller so that domain errors stay distinct from parse errors.
pub fn branch_series_from_json(v: &Value) -> Result<FractionalSeries> {
    match v.get("series") {
        Some(s) => series_from_json(s),
        None => series_from_json(v),
    }
}

pub fn branch_to_json(b: &QuasiOrdinaryBranch) -> Value {
    json!({"series": series_to_json(b.series())})
}

/// Maximal cones of the fan by their rays.
pub fn fan_to_json(fan: &Fan) -> Value {
    let cones: Vec<Value> = fan.maximal_cones().iter().map(|c| json!(c.generators())).collect();
    json!({"cones": cones})
}

pub fn isomorphism_to_json(w: &SemigroupIsomorphism) -> Value {
    json!({
        "matrix": int_matrix_to_json(&w.matrix),
        "source_basis": w.source.basis().iter().map(vector_to_json).collect::<Vec<_>>(),
        "target_basis": w.target.basis().iter().map(vector_to_json).collect::<Vec<_>>(),
    })
}

/// Coordinates of a cyclotomic number as strings, for compact display.
pub fn big_rationals_to_json(values: &[BigQ]) -> Value {
    Value::Array(values.iter().map(|q| Value::String(format_bigq(q))).collect())
}

/// Builds an object from key/value pairs; keys come out sorted.
pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}
