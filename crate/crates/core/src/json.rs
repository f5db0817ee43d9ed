//! Serde adapters for exact values in JSON reports.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serializer;
use serde_json::Value;

use crate::rational::{self, Rational};

/// Serializes a rational as a `"num/den"` string.
pub fn ratio<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational::to_string(x))
}

pub fn ratio_vec<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(rational::to_string))
}

/// Serializes a rational as a `["num", "den"]` pair.
pub fn fraction_pair(x: &Rational) -> Value {
    Value::Array(vec![
        Value::String(x.numer().to_string()),
        Value::String(x.denom().to_string()),
    ])
}

/// A JSON number when the integer fits in `u64`, a decimal string otherwise.
pub fn big_uint_value(x: &BigUint) -> Value {
    match x.to_u64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn big_uint<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match x.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&x.to_string()),
    }
}
