//! Exact rational helpers over `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

/// Reduced arbitrary-precision rational; the denominator is always positive.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn bigint_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

/// `{"num": .., "den": ..}` with reduced integers.
pub fn to_json(r: &Rational) -> Value {
    json!({ "num": bigint_json(r.numer()), "den": bigint_json(r.denom()) })
}

/// Decimal string with `places` digits, rounding half away from zero.
pub fn round_decimal(r: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = r * Rational::from_integer(scale.clone());
    let (q, rem) = scaled.numer().abs().div_rem(scaled.denom());
    let twice = rem * 2u32;
    let q = if twice >= *scaled.denom() {
        q + 1u32
    } else {
        q
    };
    let sign = if r.is_negative() && !q.is_zero() {
        "-"
    } else {
        ""
    };
    let (int_part, frac_part) = q.div_rem(&scale);
    if places == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{:0>width$}",
        frac_part.to_string(),
        width = places as usize
    )
}

/// Short text form: `a` for integers, `a/b` otherwise.
pub fn display(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
