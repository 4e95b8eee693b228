//! Exact rational helpers: decimal parsing, rounding, formatting.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses a decimal literal such as `0.3`, `-12`, `.5` or `1.25e-3` into an
/// exact rational.
pub fn parse_decimal(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::invalid(format!("not a decimal number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if exponent.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = all_digits.parse::<BigUint>().map_err(|_| bad())?.into();
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

pub fn ceil_to_int(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

pub fn floor_to_int(q: &BigRational) -> BigInt {
    q.floor().to_integer()
}

/// Rounds to the nearest integer, halves away from zero.
pub fn round_half_away(q: &BigRational) -> BigInt {
    q.round().to_integer()
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// True when the reduced denominator has no prime factors besides 2 and 5.
pub fn is_terminating(q: &BigRational) -> bool {
    let mut den = q.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    while den.is_even() {
        den /= &two;
    }
    while (&den % &five).is_zero() {
        den /= &five;
    }
    den.is_one()
}

/// Formats a rational as a decimal string. Terminating expansions are
/// written exactly; anything else is rounded to `max_digits` fractional
/// digits.
pub fn to_decimal_string(q: &BigRational, max_digits: usize) -> String {
    let negative = q.is_negative();
    let abs = q.abs();
    let int_part = abs.trunc().to_integer();
    let mut frac = abs.fract();
    let ten = BigInt::from(10u32);
    let mut digits = String::new();
    if is_terminating(q) {
        while !frac.is_zero() {
            frac *= BigRational::from_integer(ten.clone());
            let digit = frac.trunc().to_integer();
            digits.push_str(&digit.to_string());
            frac = frac.fract();
        }
        let mut out = int_part.to_string();
        if !digits.is_empty() {
            out.push('.');
            out.push_str(&digits);
        }
        return if negative { format!("-{out}") } else { out };
    }
    let scale = num_traits::pow(ten, max_digits);
    let scaled = (abs * BigRational::from_integer(scale.clone())).round().to_integer();
    let (whole, rem) = scaled.div_rem(&scale);
    let mut rem_str = rem.to_string();
    while rem_str.len() < max_digits {
        rem_str.insert(0, '0');
    }
    let trimmed = rem_str.trim_end_matches('0');
    let mut out = whole.to_string();
    if !trimmed.is_empty() {
        out.push('.');
        out.push_str(trimmed);
    }
    if negative && out.chars().any(|ch| ch != '0' && ch != '.') {
        format!("-{out}")
    } else {
        out
    }
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_decimals() {
        assert_eq!(parse_decimal("0.3").unwrap(), rational(3, 10));
        assert_eq!(parse_decimal("-1.25").unwrap(), rational(-5, 4));
        assert_eq!(parse_decimal(".5").unwrap(), rational(1, 2));
        assert_eq!(parse_decimal("7").unwrap(), rational(7, 1));
        assert_eq!(parse_decimal("1e-4").unwrap(), rational(1, 10_000));
        assert_eq!(parse_decimal("2.5E2").unwrap(), rational(250, 1));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "-", ".", "1.2.3", "abc", "1e", "0x10", "1_000"] {
            assert!(parse_decimal(s).is_err(), "{s:?}");
        }
    }

    #[test]
    fn ceiling_of_integer_product_is_exact() {
        // 0.07 * 100 is exactly 7; the float product rounds up past it.
        let c = parse_decimal("0.07").unwrap();
        let ck = c * BigRational::from_integer(100.into());
        assert_eq!(ceil_to_int(&ck), BigInt::from(7));
        assert!((0.07f64 * 100.0).ceil() > 7.0);
    }

    #[test]
    fn rounding_halves_away_from_zero() {
        assert_eq!(round_half_away(&rational(5, 2)), BigInt::from(3));
        assert_eq!(round_half_away(&rational(3, 2)), BigInt::from(2));
        assert_eq!(round_half_away(&rational(2, 5)), BigInt::from(0));
    }

    #[test]
    fn decimal_strings() {
        assert_eq!(to_decimal_string(&rational(3, 8), 5), "0.375");
        assert_eq!(to_decimal_string(&rational(-3, 8), 5), "-0.375");
        assert_eq!(to_decimal_string(&rational(1, 3), 4), "0.3333");
        assert_eq!(to_decimal_string(&rational(2, 3), 4), "0.6667");
        assert_eq!(to_decimal_string(&rational(12, 1), 4), "12");
        let q = parse_decimal(&to_decimal_string(&rational(1, 1 << 20), 0)).unwrap();
        assert_eq!(q, rational(1, 1 << 20));
    }
}

/// Binomial coefficient `C(n, r)`, zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}
