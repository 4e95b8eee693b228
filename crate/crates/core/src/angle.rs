//! Angle thresholds: parsing `alpha` specs and producing rational enclosures
//! of `cos(alpha)` for the exact triple predicate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact;
use crate::precision::{big_float_to_rational, Ctx, Precision, Real};

/// Strict (`angle < alpha`, the `f` problem) or weak (`angle <= alpha`, the
/// `g` problem) comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Weak,
}

impl Mode {
    /// Whether an angle whose cosine compares to `cos(alpha)` as `ord`
    /// satisfies the threshold. Cosine is decreasing on `[0, pi]`.
    pub fn accepts(self, cos_vs_threshold: Ordering) -> bool {
        match self {
            Mode::Strict => cos_vs_threshold == Ordering::Greater,
            Mode::Weak => cos_vs_threshold != Ordering::Less,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Weak => "weak",
        })
    }
}

/// An angle threshold in one of the accepted notations:
/// `pi/<n>[(+|-)<decimal>]`, `pi`, `<decimal>deg`, `<decimal>rad` or a bare
/// decimal (radians). Decimal parts are kept as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AngleSpec {
    /// `pi / divisor + offset` radians.
    PiFraction { divisor: u32, offset: BigRational },
    Degrees(BigRational),
    Radians(BigRational),
}

impl AngleSpec {
    /// `pi/3 + c`, the threshold of the construction.
    pub fn pi_third_plus(c: BigRational) -> Self {
        AngleSpec::PiFraction { divisor: 3, offset: c }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
        let lower = s.to_ascii_lowercase();
        let spec = if let Some(rest) = lower.strip_prefix("pi") {
            let (divisor, tail) = match rest.strip_prefix('/') {
                Some(r) => {
                    let end = r.find(['+', '-']).unwrap_or(r.len());
                    let divisor: u32 = r[..end]
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad divisor in angle {text:?}")))?;
                    if divisor == 0 {
                        return Err(Error::invalid("angle divisor must be positive"));
                    }
                    (divisor, &r[end..])
                }
                None => (1, rest),
            };
            let offset = match tail.as_bytes().first() {
                None => BigRational::zero(),
                Some(b'+') => exact::parse_decimal(&tail[1..])?,
                Some(b'-') => -exact::parse_decimal(&tail[1..])?,
                Some(_) => return Err(Error::invalid(format!("cannot parse angle {text:?}"))),
            };
            AngleSpec::PiFraction { divisor, offset }
        } else if let Some(v) = lower.strip_suffix("deg") {
            AngleSpec::Degrees(exact::parse_decimal(v)?)
        } else if let Some(v) = lower.strip_suffix("rad") {
            AngleSpec::Radians(exact::parse_decimal(v)?)
        } else {
            AngleSpec::Radians(exact::parse_decimal(&lower)?)
        };
        let radians = spec.radians_f64();
        if !(radians > 0.0 && radians <= std::f64::consts::PI + 1e-15) {
            return Err(Error::invalid(format!(
                "angle {text:?} must lie in (0, pi], got {radians} rad"
            )));
        }
        Ok(spec)
    }

    /// The slack `c` when the spec has the form `pi/3 + c`.
    pub fn pi_third_slack(&self) -> Option<&BigRational> {
        match self {
            AngleSpec::PiFraction { divisor: 3, offset } => Some(offset),
            _ => None,
        }
    }

    /// The angle in radians at the given precision.
    pub fn radians(&self, prec: Precision) -> Real {
        let mut ctx = Ctx::new(prec);
        Real::new(self.radians_in(&mut ctx), prec)
    }

    pub(crate) fn radians_in(&self, ctx: &mut Ctx) -> astro_float::BigFloat {
        match self {
            AngleSpec::PiFraction { divisor, offset } => {
                let pi = ctx.pi();
                let base = ctx.div(&pi, &ctx.int(i64::from(*divisor)));
                let off = ctx.rational(offset);
                ctx.add(&base, &off)
            }
            AngleSpec::Degrees(deg) => {
                let pi = ctx.pi();
                let v = ctx.rational(deg);
                let t = ctx.mul(&v, &pi);
                ctx.div(&t, &ctx.int(180))
            }
            AngleSpec::Radians(r) => ctx.rational(r),
        }
    }

    pub fn radians_f64(&self) -> f64 {
        use std::f64::consts::PI;
        match self {
            AngleSpec::PiFraction { divisor, offset } => PI / f64::from(*divisor) + exact::to_f64(offset),
            AngleSpec::Degrees(deg) => exact::to_f64(deg) * PI / 180.0,
            AngleSpec::Radians(r) => exact::to_f64(r),
        }
    }

    /// `(sign, cos^2)` when `cos^2(alpha)` is rational, i.e. for multiples of
    /// 30 and 45 degrees.
    pub fn exact_cos_squared(&self) -> Option<(i8, BigRational)> {
        let degrees = match self {
            AngleSpec::PiFraction { divisor, offset } if offset.is_zero() => {
                BigRational::new(BigInt::from(180), BigInt::from(*divisor))
            }
            AngleSpec::Degrees(deg) => deg.clone(),
            AngleSpec::Radians(r) if r.is_zero() => BigRational::zero(),
            _ => return None,
        };
        if !degrees.is_integer() {
            return None;
        }
        let table: [(i64, i8, i64, i64); 9] = [
            (0, 1, 1, 1),
            (30, 1, 3, 4),
            (45, 1, 1, 2),
            (60, 1, 1, 4),
            (90, 0, 0, 1),
            (120, -1, 1, 4),
            (135, -1, 1, 2),
            (150, -1, 3, 4),
            (180, -1, 1, 1),
        ];
        let deg = degrees.to_integer();
        table
            .iter()
            .find(|(d, ..)| BigInt::from(*d) == deg)
            .map(|&(_, sign, n, m)| (sign, exact::rational(n, m)))
    }

    /// Rational enclosure of `cos(alpha)` good to about `2^-bits`.
    pub fn cos_enclosure(&self, bits: usize) -> CosEnclosure {
        if let Some((sign, sq)) = self.exact_cos_squared() {
            return CosEnclosure {
                sign: Some(sign),
                sq_lo: sq.clone(),
                sq_hi: sq,
                exact: true,
                bits,
            };
        }
        let mut ctx = Ctx::with_bits(bits + 64);
        let alpha = self.radians_in(&mut ctx);
        let cos = ctx.cos(&alpha);
        let t = big_float_to_rational(&cos).expect("cos of a finite angle is finite");
        let radius = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(2u32), bits));
        let lo = &t - &radius;
        let hi = &t + &radius;
        let sign = if lo.is_positive() {
            Some(1)
        } else if hi.is_negative() {
            Some(-1)
        } else {
            None
        };
        let (sq_lo, sq_hi) = match sign {
            Some(1) => (&lo * &lo, &hi * &hi),
            Some(_) => (&hi * &hi, &lo * &lo),
            None => (BigRational::zero(), std::cmp::max(&lo * &lo, &hi * &hi)),
        };
        CosEnclosure {
            sign,
            sq_lo,
            sq_hi,
            exact: false,
            bits,
        }
    }
}

impl FromStr for AngleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AngleSpec::parse(s)
    }
}

impl fmt::Display for AngleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dec = |q: &BigRational| exact::to_decimal_string(q, 30);
        match self {
            AngleSpec::PiFraction { divisor, offset } => {
                let head = if *divisor == 1 { "pi".to_string() } else { format!("pi/{divisor}") };
                match offset.cmp(&BigRational::zero()) {
                    Ordering::Equal => f.write_str(&head),
                    Ordering::Greater => write!(f, "{head}+{}", dec(offset)),
                    Ordering::Less => write!(f, "{head}-{}", dec(&-offset)),
                }
            }
            AngleSpec::Degrees(v) => write!(f, "{}deg", dec(v)),
            AngleSpec::Radians(v) => write!(f, "{}rad", dec(v)),
        }
    }
}

impl Serialize for AngleSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `cos(alpha)` as a sign plus an interval `[sq_lo, sq_hi]` containing
/// `cos^2(alpha)`. `sign` is `None` when the interval straddles zero.
#[derive(Debug, Clone)]
pub struct CosEnclosure {
    pub sign: Option<i8>,
    pub sq_lo: BigRational,
    pub sq_hi: BigRational,
    pub exact: bool,
    pub bits: usize,
}

impl CosEnclosure {
    /// Compares `num / sqrt(den)` against `cos(alpha)`, with `den > 0`.
    /// Returns `None` when the enclosure is too wide to decide.
    pub fn compare(&self, num: &BigInt, den: &BigInt) -> Option<Ordering> {
        debug_assert!(den.is_positive());
        let sn = exact::sign_of(num);
        let st = self.sign?;
        if st == 0 {
            return Some(sn.cmp(&0));
        }
        if st > 0 && sn <= 0 {
            return Some(Ordering::Less);
        }
        if st < 0 && sn >= 0 {
            return Some(Ordering::Greater);
        }
        // Same sign: compare num^2 / den with cos^2.
        let n2 = num * num;
        let vs = |sq: &BigRational| (&n2 * sq.denom()).cmp(&(sq.numer() * den));
        let vs_lo = vs(&self.sq_lo);
        let vs_hi = vs(&self.sq_hi);
        let sq_order = if vs_hi == Ordering::Greater {
            Ordering::Greater
        } else if vs_lo == Ordering::Less {
            Ordering::Less
        } else if self.exact {
            Ordering::Equal
        } else {
            return None;
        };
        // |cos| > |t| means cos > t for positive t, cos < t for negative t.
        Some(if st > 0 { sq_order } else { sq_order.reverse() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar() {
        let a = AngleSpec::parse("pi/3+0.01").unwrap();
        assert_eq!(a.pi_third_slack(), Some(&exact::rational(1, 100)));
        assert!((a.radians_f64() - (std::f64::consts::FRAC_PI_3 + 0.01)).abs() < 1e-15);
        assert_eq!(AngleSpec::parse("pi/3").unwrap().to_string(), "pi/3");
        assert_eq!(AngleSpec::parse("pi/3 - 0.5").unwrap().to_string(), "pi/3-0.5");
        assert_eq!(AngleSpec::parse("70deg").unwrap(), AngleSpec::Degrees(exact::rational(70, 1)));
        assert_eq!(AngleSpec::parse("1.5rad").unwrap(), AngleSpec::Radians(exact::rational(3, 2)));
        assert_eq!(AngleSpec::parse("3.0").unwrap(), AngleSpec::Radians(exact::rational(3, 1)));
        assert_eq!(AngleSpec::parse("pi").unwrap().radians_f64(), std::f64::consts::PI);
    }

    #[test]
    fn rejects_out_of_range_and_garbage() {
        for s in ["0", "-1rad", "200deg", "pi+0.1", "pi/0", "pi/x", "tau", "3.5", ""] {
            assert!(AngleSpec::parse(s).is_err(), "{s:?}");
        }
    }

    #[test]
    fn exact_cosines() {
        let (s, sq) = AngleSpec::parse("pi/3").unwrap().exact_cos_squared().unwrap();
        assert_eq!((s, sq), (1, exact::rational(1, 4)));
        let (s, sq) = AngleSpec::parse("90deg").unwrap().exact_cos_squared().unwrap();
        assert_eq!((s, sq), (0, BigRational::zero()));
        let (s, sq) = AngleSpec::parse("135deg").unwrap().exact_cos_squared().unwrap();
        assert_eq!((s, sq), (-1, exact::rational(1, 2)));
        assert!(AngleSpec::parse("70deg").unwrap().exact_cos_squared().is_none());
        assert!(AngleSpec::parse("pi/3+0.01").unwrap().exact_cos_squared().is_none());
    }

    #[test]
    fn enclosure_brackets_cosine() {
        let spec = AngleSpec::parse("pi/3+0.02").unwrap();
        let enc = spec.cos_enclosure(128);
        assert_eq!(enc.sign, Some(1));
        let t = spec.radians_f64().cos();
        let t2 = exact::from_f64(t * t).unwrap();
        let slack = exact::rational(1, 1_000_000_000_000);
        assert!(enc.sq_lo <= &t2 + &slack && &t2 - &slack <= enc.sq_hi);
        assert!(&enc.sq_hi - &enc.sq_lo < exact::rational(1, 1 << 40));
    }

    #[test]
    fn compare_handles_signs() {
        let sixty = AngleSpec::parse("pi/3").unwrap().cos_enclosure(128);
        // cos = 1 / sqrt(4) = 1/2: exactly the threshold
        assert_eq!(sixty.compare(&BigInt::from(1), &BigInt::from(4)), Some(Ordering::Equal));
        assert_eq!(sixty.compare(&BigInt::from(-1), &BigInt::from(4)), Some(Ordering::Less));
        assert_eq!(sixty.compare(&BigInt::from(2), &BigInt::from(9)), Some(Ordering::Greater));
        let obtuse = AngleSpec::parse("120deg").unwrap().cos_enclosure(128);
        // cos = -1/sqrt(9) = -1/3 > -1/2
        assert_eq!(obtuse.compare(&BigInt::from(-1), &BigInt::from(9)), Some(Ordering::Greater));
        assert_eq!(obtuse.compare(&BigInt::from(-2), &BigInt::from(9)), Some(Ordering::Less));
        assert_eq!(obtuse.compare(&BigInt::from(0), &BigInt::from(9)), Some(Ordering::Greater));
        let right = AngleSpec::parse("pi/2").unwrap().cos_enclosure(128);
        assert_eq!(right.compare(&BigInt::from(0), &BigInt::from(9)), Some(Ordering::Equal));
    }
}
