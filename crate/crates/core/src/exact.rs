//! Exact rational helpers and the fixed-precision float formatting used by
//! every report the crate emits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

/// Significant digits for every float written to JSON or CSV.
pub const OUTPUT_SIGNIFICANT_DIGITS: usize = 12;

/// Parses a decimal (`1.99940`, `-3`, `2.5e-3`) or a fraction (`7/9`) into an
/// exact rational. Decimal inputs are read digit for digit, never through `f64`.
pub fn parse_exact(text: &str) -> Result<ExactRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(num, den));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Parse(format!("no digits in {s:?}")));
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(Error::Parse(format!("not a number: {s:?}")));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().unwrap_or_default());
    let scale = exponent - frac_part.len() as i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale != 0 {
        let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
        if scale > 0 {
            value *= factor;
        } else {
            value /= factor;
        }
    }
    Ok(if negative { -value } else { value })
}

/// Exact rational for the shortest decimal that round-trips `x`, so that
/// `from_f64_decimal(1.9994)` is `19994/10000` rather than the binary
/// expansion of the nearest double.
pub fn from_f64_decimal(x: f64) -> Result<ExactRational> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite value {x}")));
    }
    parse_exact(&format!("{x}"))
}

/// Exact value of the double itself.
pub fn from_f64_binary(x: f64) -> Result<ExactRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
}

pub fn to_f64(q: &ExactRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn fraction_string(q: &ExactRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Rounds to [`OUTPUT_SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", OUTPUT_SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

pub fn format_sig(x: f64) -> String {
    format!("{}", round_sig(x))
}

pub fn serialize_sig<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}

pub fn serialize_opt_sig<S: Serializer>(
    x: &Option<f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round_sig(*v)),
        None => s.serialize_none(),
    }
}

/// An exact value rendered both as a fraction string and as a decimal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalValue {
    pub fraction: String,
    #[serde(serialize_with = "serialize_sig")]
    pub decimal: f64,
}

impl From<&ExactRational> for RationalValue {
    fn from(q: &ExactRational) -> Self {
        RationalValue {
            fraction: fraction_string(q),
            decimal: to_f64(q),
        }
    }
}
