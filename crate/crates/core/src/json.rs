//! JSON helpers shared by the report types.
//!
//! Rationals are written as `[num, den]` pairs of JSON integers (falling back
//! to decimal strings if a component does not fit in an `i64`), big integers
//! as decimal strings.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::{SerializeSeq, Serializer};
use serde_json::Value;

use crate::Rational;

pub fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

pub fn rational_value(r: &Rational) -> Value {
    Value::Array(vec![int_value(r.numer()), int_value(r.denom())])
}

pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_some(&rational_value(r))
}

pub fn serialize_rationals<S: Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(rs.len()))?;
    for r in rs {
        seq.serialize_element(&rational_value(r))?;
    }
    seq.end()
}

pub fn serialize_opt_rationals<S: Serializer>(
    rs: &[Option<Rational>],
    s: S,
) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(rs.len()))?;
    for r in rs {
        match r {
            Some(r) => seq.serialize_element(&rational_value(r))?,
            None => seq.serialize_element(&Value::Null)?,
        }
    }
    seq.end()
}

pub fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
