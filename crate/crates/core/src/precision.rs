//! Multi-precision real arithmetic on top of `astro-float`.
//!
//! Every evaluation takes its [`Precision`] explicitly; the environment
//! override is read once by the caller, never consulted behind its back.

use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact;

pub const PRECISION_ENV: &str = "ANGLESET_PRECISION_BITS";

const RM: RoundingMode = RoundingMode::ToEven;

/// Guard bits carried by intermediate results.
const GUARD_BITS: usize = 32;

/// Working precision in bits of mantissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(usize);

impl Precision {
    pub const MIN_BITS: usize = 64;
    pub const DEFAULT: Precision = Precision(128);

    pub fn new(bits: usize) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::invalid(format!(
                "precision must be at least {} bits, got {bits}",
                Self::MIN_BITS
            )));
        }
        if bits > 1 << 20 {
            return Err(Error::invalid(format!("precision {bits} bits is unreasonably large")));
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> usize {
        self.0
    }

    /// Reads `ANGLESET_PRECISION_BITS`, falling back to 128 bits when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(PRECISION_ENV) {
            Ok(v) => {
                let bits = v.trim().parse::<usize>().map_err(|_| {
                    Error::invalid(format!("{PRECISION_ENV} must be an integer, got {v:?}"))
                })?;
                Precision::new(bits)
            }
            Err(_) => Ok(Precision::DEFAULT),
        }
    }

    pub(crate) fn working(self) -> usize {
        self.0 + GUARD_BITS
    }

    /// Number of decimal digits this precision carries, rounded down.
    pub fn decimal_digits(self) -> usize {
        (self.0 as f64 * std::f64::consts::LOG10_2).floor() as usize
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

/// Evaluation context: precision plus the constant cache astro-float needs.
pub(crate) struct Ctx {
    pub p: usize,
    pub cc: Consts,
}

impl Ctx {
    pub fn new(prec: Precision) -> Self {
        Ctx {
            p: prec.working(),
            cc: Consts::new().expect("astro-float constant cache"),
        }
    }

    pub fn with_bits(bits: usize) -> Self {
        Ctx {
            p: bits,
            cc: Consts::new().expect("astro-float constant cache"),
        }
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.p)
    }

    pub fn big_int(&mut self, v: &BigInt) -> BigFloat {
        let bits = (v.bits() as usize).div_ceil(64) * 64 + 64;
        BigFloat::parse(&v.to_string(), Radix::Dec, bits.max(self.p), RM, &mut self.cc)
    }

    pub fn rational(&mut self, q: &BigRational) -> BigFloat {
        let n = self.big_int(q.numer());
        let d = self.big_int(q.denom());
        n.div(&d, self.p, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cc)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.p, RM)
    }

    pub fn sin(&mut self, a: &BigFloat) -> BigFloat {
        a.sin(self.p, RM, &mut self.cc)
    }

    pub fn cos(&mut self, a: &BigFloat) -> BigFloat {
        a.cos(self.p, RM, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    pub fn powi(&self, a: &BigFloat, n: usize) -> BigFloat {
        a.powi(n, self.p, RM)
    }

    /// `x * ln(x)` with the limit 0 at `x = 0`.
    pub fn xlogx(&mut self, x: &BigFloat) -> BigFloat {
        if x.is_zero() {
            BigFloat::from_i64(0, self.p)
        } else {
            let l = self.ln(x);
            self.mul(x, &l)
        }
    }
}

/// Exact rational value of a finite `BigFloat`.
pub(crate) fn big_float_to_rational(x: &BigFloat) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let (words, _, sign, exponent, _) = x.as_raw_parts()?;
    let bytes: Vec<u8> = words.iter().flat_map(|w| w.to_le_bytes()).collect();
    let mantissa: BigInt = BigUint::from_bytes_le(&bytes).into();
    // value = 0.mantissa * 2^exponent
    let shift = exponent as i64 - (words.len() * 64) as i64;
    let two = BigInt::from(2u32);
    let mut q = if shift >= 0 {
        BigRational::from_integer(mantissa * num_traits::pow(two, shift as usize))
    } else {
        BigRational::new(mantissa, num_traits::pow(two, (-shift) as usize))
    };
    if sign == Sign::Neg {
        q = -q;
    }
    Some(q)
}

/// A real number carried at a known precision.
#[derive(Debug, Clone)]
pub struct Real {
    value: BigFloat,
    prec: Precision,
}

impl Real {
    pub(crate) fn new(value: BigFloat, prec: Precision) -> Self {
        Real { value, prec }
    }

    pub fn from_f64(x: f64, prec: Precision) -> Self {
        Real::new(BigFloat::from_f64(x, prec.working()), prec)
    }

    pub fn from_rational(q: &BigRational, prec: Precision) -> Self {
        let mut ctx = Ctx::new(prec);
        Real::new(ctx.rational(q), prec)
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub(crate) fn raw(&self) -> &BigFloat {
        &self.value
    }

    pub fn is_finite(&self) -> bool {
        !(self.value.is_nan() || self.value.is_inf())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        big_float_to_rational(&self.value)
    }

    pub fn to_f64(&self) -> f64 {
        if self.value.is_nan() {
            return f64::NAN;
        }
        if self.value.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.value.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        self.to_rational().map_or(f64::NAN, |q| exact::to_f64(&q))
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_sig_string(&self, digits: usize) -> String {
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        let q = match self.to_rational() {
            Some(q) => q,
            None => return "NaN".into(),
        };
        if q.is_zero() {
            return "0".into();
        }
        // Fractional digits so that `digits` significant digits survive.
        let magnitude = self.to_f64().abs().log10().floor() as i64;
        let frac = (digits as i64 - 1 - magnitude).max(0) as usize;
        exact::to_decimal_string(&round_to_digits(&q, frac), frac)
    }

    pub fn sign(&self) -> i8 {
        if self.value.is_zero() {
            0
        } else if self.value.is_negative() {
            -1
        } else {
            1
        }
    }
}

fn round_to_digits(q: &BigRational, frac: usize) -> BigRational {
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10u32), frac));
    let sign = if q.is_negative() { -BigRational::one() } else { BigRational::one() };
    sign * ((q.abs() * &scale).round() / scale)
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sig_string(self.prec.decimal_digits()))
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip_is_exact_for_dyadics() {
        let q = exact::rational(-13, 1024);
        let r = Real::from_rational(&q, Precision::DEFAULT);
        assert_eq!(r.to_rational().unwrap(), q);
        assert_eq!(r.to_f64(), -13.0 / 1024.0);
    }

    #[test]
    fn large_integers_convert_exactly() {
        let n = num_traits::pow(BigInt::from(3u32), 200);
        let mut ctx = Ctx::with_bits(512);
        let x = ctx.big_int(&n);
        assert_eq!(big_float_to_rational(&x).unwrap(), BigRational::from_integer(n));
    }

    #[test]
    fn pi_matches_f64() {
        let mut ctx = Ctx::new(Precision::DEFAULT);
        let pi = Real::new(ctx.pi(), Precision::DEFAULT);
        assert_eq!(pi.to_f64(), std::f64::consts::PI);
        assert!(pi.to_string().starts_with("3.14159265358979323846264338327950288"));
    }

    #[test]
    fn precision_floor() {
        assert!(Precision::new(63).is_err());
        assert_eq!(Precision::new(256).unwrap().bits(), 256);
        assert_eq!(Precision::DEFAULT.decimal_digits(), 38);
    }
}
