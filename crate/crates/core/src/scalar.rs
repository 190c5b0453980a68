//! Exact rationals and arbitrary-precision reals.
//!
//! Every moment, determinant and polynomial coefficient is a canonical
//! [`Rational`] (positive denominator, reduced). Irrational quantities such as
//! polynomial roots and the k-th roots needed by the inverse solver use MPFR
//! [`Float`]s at an explicit precision.
//!
//! Rationals travel as strings: `"p/q"`, or `"p"` when `q = 1`. Parsing also
//! accepts terminating decimals such as `"-0.125"`, which are converted
//! exactly.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, ParseError, Result};

pub const DEFAULT_PRECISION: u32 = 256;
pub const MIN_PRECISION: u32 = 64;
pub const MAX_PRECISION: u32 = 1 << 20;

/// Parses `"p"`, `"p/q"` or a terminating decimal `"a.b"` into a canonical rational.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseError::Empty);
    }
    let malformed = || ParseError::Malformed(text.to_string());

    if let Some((num, den)) = text.split_once('/') {
        let num = parse_integer(num).ok_or_else(malformed)?;
        if !is_digits(den) {
            return Err(malformed());
        }
        let den = Integer::from_str_radix(den, 10).map_err(|_| malformed())?;
        if den == 0 {
            return Err(ParseError::ZeroDenominator(text.to_string()));
        }
        return Ok(Rational::from((num, den)));
    }

    if let Some((whole, frac)) = text.split_once('.') {
        let (negative, whole) = split_sign(whole);
        if (whole.is_empty() && frac.is_empty())
            || (!whole.is_empty() && !is_digits(whole))
            || (!frac.is_empty() && !is_digits(frac))
        {
            return Err(malformed());
        }
        let digits = format!("{whole}{frac}");
        let mut num = Integer::from_str_radix(&digits, 10).map_err(|_| malformed())?;
        if negative {
            num = -num;
        }
        let scale = u32::try_from(frac.len()).map_err(|_| malformed())?;
        let den = Integer::from(10).pow(scale);
        return Ok(Rational::from((num, den)));
    }

    parse_integer(text)
        .map(Rational::from)
        .ok_or_else(malformed)
}

/// Canonical string form of a rational.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

fn split_sign(text: &str) -> (bool, &str) {
    match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        _ => (false, text),
    }
}

fn is_digits(text: &str) -> bool {
    !text.is_empty() && text.bytes().all(|b| b.is_ascii_digit())
}

fn parse_integer(text: &str) -> Option<Integer> {
    let (negative, digits) = split_sign(text);
    if !is_digits(digits) {
        return None;
    }
    let value = Integer::from_str_radix(digits, 10).ok()?;
    Some(if negative { -value } else { value })
}

pub fn check_precision(bits: u32) -> Result<u32> {
    if (MIN_PRECISION..=MAX_PRECISION).contains(&bits) {
        Ok(bits)
    } else {
        Err(Error::InvalidPrecision {
            bits,
            min: MIN_PRECISION,
            max: MAX_PRECISION,
        })
    }
}

/// Number of decimal digits that carry `bits` of binary precision.
pub fn decimal_digits(bits: u32) -> usize {
    (f64::from(bits) * std::f64::consts::LOG10_2).ceil() as usize + 1
}

/// Decimal rendering of a real at its own precision; zero prints as `"0"`.
pub fn format_real(value: &Float) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    value.to_string_radix(10, Some(decimal_digits(value.prec())))
}

/// Parses a decimal real such as `"1e-30"` at the given precision.
pub fn parse_real(text: &str, prec: u32) -> Result<Float, ParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseError::Empty);
    }
    let parsed = Float::parse(text).map_err(|_| ParseError::Malformed(text.to_string()))?;
    let value = Float::with_val(prec, parsed);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ParseError::Malformed(text.to_string()))
    }
}

/// Exact k-th root of a rational, if it is a perfect k-th power.
///
/// Negative inputs have a real root only for odd `k`.
pub fn exact_root(value: &Rational, k: u32) -> Option<Rational> {
    assert!(k >= 1, "root order must be positive");
    if k == 1 {
        return Some(value.clone());
    }
    let negative = *value < 0;
    if negative && k.is_multiple_of(2) {
        return None;
    }
    let (num, den) = value.clone().abs().into_numer_denom();
    let (num_root, num_rem) = num.root_rem(Integer::new(), k);
    if num_rem != 0 {
        return None;
    }
    let (den_root, den_rem) = den.root_rem(Integer::new(), k);
    if den_rem != 0 {
        return None;
    }
    let root = Rational::from((num_root, den_root));
    Some(if negative { -root } else { root })
}

/// Real k-th root of a rational rounded to `prec` bits, returned as the exact
/// dyadic rational value of the rounded float.
pub fn rounded_root(value: &Rational, k: u32, prec: u32) -> Rational {
    assert!(k >= 1, "root order must be positive");
    assert!(*value >= 0 || k % 2 == 1, "even root of a negative number");
    let root = Float::with_val(prec, value).root(k);
    root.to_rational()
        .expect("root of a finite rational is finite")
}

/// `|a - b| / max(1, |b|)` evaluated at `prec` bits.
pub fn relative_deviation(actual: &Rational, target: &Rational, prec: u32) -> Float {
    let diff = Rational::from(actual - target).abs();
    let scale = target.clone().abs().max(Rational::from(1));
    Float::with_val(prec, diff / scale)
}

/// Serde adapters that keep rationals as strings.
pub mod serde_rational {
    use rug::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&super::format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(deserializer)?;
        super::parse_rational(&text).map_err(D::Error::custom)
    }

    pub mod vec {
        use rug::Rational;
        use serde::ser::SerializeSeq;
        use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(
            values: &[Rational],
            serializer: S,
        ) -> Result<S::Ok, S::Error> {
            let mut seq = serializer.serialize_seq(Some(values.len()))?;
            for value in values {
                seq.serialize_element(&crate::scalar::format_rational(value))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            deserializer: D,
        ) -> Result<Vec<Rational>, D::Error> {
            let texts = Vec::<String>::deserialize(deserializer)?;
            texts
                .iter()
                .map(|t| crate::scalar::parse_rational(t).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use rug::Rational;
        use serde::Serializer;

        pub fn serialize<S: Serializer>(
            value: &Option<Rational>,
            serializer: S,
        ) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => serializer.serialize_some(&crate::scalar::format_rational(v)),
                None => serializer.serialize_none(),
            }
        }
    }
}

/// Serde adapter for reals rendered as decimal strings.
pub mod serde_real {
    use rug::Float;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(value: &Float, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&super::format_real(value))
    }
}
