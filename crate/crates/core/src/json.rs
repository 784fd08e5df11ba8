//! JSON encoding of exact rationals as `[numerator, denominator]` pairs.
//!
//! Numbers are written as JSON integers of arbitrary length (serde_json is
//! built with `arbitrary_precision`), so no value is ever routed through `f64`.

use std::fmt::Display;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;
use serde_json::{Number, Value};

use crate::scalar::ratio_parts;

/// Encodes `q` as `[num, den]` with a positive denominator in lowest terms.
pub fn rational_to_json<I>(q: &Ratio<I>) -> Value
where
    I: Integer + Clone + Display + Signed,
{
    let (n, d) = ratio_parts(q);
    Value::Array(vec![integer_value(&n), integer_value(&d)])
}

pub fn vector_to_json<I>(v: &[Ratio<I>]) -> Value
where
    I: Integer + Clone + Display + Signed,
{
    Value::Array(v.iter().map(rational_to_json).collect())
}

fn integer_value(digits: &str) -> Value {
    Value::Number(Number::from_str(digits).expect("integer digits form a JSON number"))
}

/// Decodes `[num, den]` (or a bare integer) into a ratio; `None` on malformed input.
pub fn rational_from_json<I>(v: &Value) -> Option<Ratio<I>>
where
    I: Integer + Clone + FromStr,
{
    match v {
        Value::Number(n) => Some(Ratio::from_integer(parse_integer(n)?)),
        Value::Array(parts) if parts.len() == 2 => {
            let num = parse_integer(parts[0].as_number()?)?;
            let den: I = parse_integer(parts[1].as_number()?)?;
            if den.is_zero() {
                return None;
            }
            Some(Ratio::new(num, den))
        }
        _ => None,
    }
}

pub fn vector_from_json<I>(v: &Value) -> Option<Vec<Ratio<I>>>
where
    I: Integer + Clone + FromStr,
{
    v.as_array()?.iter().map(rational_from_json).collect()
}

fn parse_integer<I: FromStr>(n: &Number) -> Option<I> {
    n.to_string().parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn round_trip_big_values() {
        let huge = BigRational::new(
            BigInt::from_str("123456789012345678901234567890").unwrap(),
            BigInt::from(7),
        );
        for q in [frac(-3, 6), frac(0, 1), huge] {
            let v = rational_to_json(&q);
            assert_eq!(rational_from_json::<BigInt>(&v), Some(q));
        }
        assert_eq!(
            serde_json::to_string(&rational_to_json(&frac(4, -6))).unwrap(),
            "[-2,3]"
        );
    }

    #[test]
    fn rejects_malformed() {
        let bad: Value = serde_json::from_str("[1, 0]").unwrap();
        assert!(rational_from_json::<BigInt>(&bad).is_none());
        let bad: Value = serde_json::from_str("[1.5, 2]").unwrap();
        assert!(rational_from_json::<BigInt>(&bad).is_none());
        let ok: Value = serde_json::from_str("5").unwrap();
        assert_eq!(rational_from_json::<BigInt>(&ok), Some(frac(5, 1)));
    }
}
