//! Exact rational scalars: construction, parsing, and formatting.
//!
//! Every coefficient on the analysis path (`α_k`, `β_k`, `γ_{i,j}`) lives
//! in [`Rat`]; nothing downstream of this module rounds. Floats only ever
//! appear as one-way *images* of exact values via [`to_f64`].

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator (maintained by the underlying representation).
pub type Rat = BigRational;

/// Errors from [`parse_rational`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    /// The literal was empty (or all whitespace).
    #[error("empty numeric literal")]
    Empty,
    /// Factorials like `6!` are not part of the input grammar.
    #[error("factorial shorthand `{0}` is not accepted; write the integer out")]
    Factorial(String),
    /// `p/q` with `q = 0`.
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    /// Anything else that is not an integer, `p/q`, or a decimal literal.
    #[error("malformed numeric literal `{0}` (expected an integer, `p/q`, or a decimal)")]
    Malformed(String),
}

/// Rational from a small numerator/denominator pair.
///
/// Panics when `den == 0`; intended for compile-time-known constants.
pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> Rat {
    BigRational::from_integer(BigInt::from(num))
}

/// `k!` as a big integer.
pub fn factorial(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    acc
}

/// `1/k!` as a rational.
pub fn inv_factorial(k: usize) -> Rat {
    BigRational::new(BigInt::one(), factorial(k))
}

/// Parse an exact rational from one of three forms:
///
/// * an integer: `3`, `-17`;
/// * a fraction: `p/q` with integer `p` and positive integer `q`;
/// * a decimal literal: `0.25`, `-4.477718303076007` (converted exactly
///   to a rational over a power of ten — decimals never round).
///
/// Exponent notation and factorial shorthand are rejected so that every
/// accepted literal has exactly one reading.
pub fn parse_rational(text: &str) -> Result<Rat, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if s.ends_with('!') {
        return Err(ParseRationalError::Factorial(s.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n =
            parse_int(num.trim()).ok_or_else(|| ParseRationalError::Malformed(s.to_string()))?;
        let d =
            parse_int(den.trim()).ok_or_else(|| ParseRationalError::Malformed(s.to_string()))?;
        if d.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        // Sign belongs to the whole literal; digits on either side may be
        // empty ("1." or ".5") but not both.
        let (sign, int_digits) = match int_part.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, int_part.strip_prefix('+').unwrap_or(int_part)),
        };
        if int_digits.is_empty() && frac_part.is_empty() {
            return Err(ParseRationalError::Malformed(s.to_string()));
        }
        if !int_digits.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(ParseRationalError::Malformed(s.to_string()));
        }
        let mut digits = String::with_capacity(int_digits.len() + frac_part.len());
        digits.push_str(int_digits);
        digits.push_str(frac_part);
        let magnitude = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits
                .parse::<BigInt>()
                .map_err(|_| ParseRationalError::Malformed(s.to_string()))?
        };
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        return Ok(BigRational::new(BigInt::from(sign) * magnitude, den));
    }
    parse_int(s)
        .map(BigRational::from_integer)
        .ok_or_else(|| ParseRationalError::Malformed(s.to_string()))
}

fn parse_int(s: &str) -> Option<BigInt> {
    if s.is_empty() {
        return None;
    }
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse::<BigInt>().ok()
}

/// Render as `p/q`, or just `p` when the value is an integer.
pub fn format_rational(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest double. The analysis itself never consumes this; it exists for
/// reports and for seeding float-side diagnostics.
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fallback for magnitudes outside the double range.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_fractions_decimals() {
        assert_eq!(parse_rational("3").unwrap(), rat_int(3));
        assert_eq!(parse_rational("-17").unwrap(), rat_int(-17));
        assert_eq!(parse_rational("+4").unwrap(), rat_int(4));
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7/8").unwrap(), rat(-7, 8));
        assert_eq!(parse_rational(" 19/44 ").unwrap(), rat(19, 44));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("2.").unwrap(), rat_int(2));
        assert_eq!(parse_rational(".125").unwrap(), rat(1, 8));
    }

    #[test]
    fn decimal_conversion_is_exact() {
        // 16 significant digits survive untouched: the literal becomes the
        // integer over 10^15, not the nearest double.
        let r = parse_rational("4.477718303076007").unwrap();
        assert_eq!(
            r,
            BigRational::new(
                BigInt::from(4477718303076007i64),
                BigInt::from(10u64.pow(15))
            )
        );
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(parse_rational(""), Err(ParseRationalError::Empty));
        assert!(matches!(
            parse_rational("6!"),
            Err(ParseRationalError::Factorial(_))
        ));
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(matches!(
            parse_rational("1e-3"),
            Err(ParseRationalError::Malformed(_))
        ));
        assert!(matches!(
            parse_rational("1/2/3"),
            Err(ParseRationalError::Malformed(_))
        ));
        assert!(matches!(
            parse_rational("."),
            Err(ParseRationalError::Malformed(_))
        ));
        assert!(matches!(
            parse_rational("--3"),
            Err(ParseRationalError::Malformed(_))
        ));
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_rational(&rat(2, 4)), "1/2");
        assert_eq!(format_rational(&rat(-6, 3)), "-2");
        assert_eq!(format_rational(&rat(0, 5)), "0");
        assert_eq!(format_rational(&rat(1, -2)), "-1/2");
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(inv_factorial(12), rat(1, 479001600));
    }

    #[test]
    fn f64_image() {
        assert_eq!(to_f64(&rat(1, 4)), 0.25);
        assert!((to_f64(&rat(-1, 3)) + 1.0 / 3.0).abs() < 1e-16);
    }
}
