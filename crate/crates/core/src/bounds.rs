//! Closed-form quantities: the guaranteed edge count `A(d, k, c)`, the
//! entropy-like exponent `H(a, b)`, the growth envelopes and the auxiliary
//! packing, covering and trigonometric bounds.
//!
//! Integer quantities are exact. Real quantities are evaluated at an explicit
//! [`Precision`].

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, binomial};
use crate::precision::{Ctx, Precision, Real};
use crate::subset::{check_slack, ConstructionParams};

fn check_dk(d: u64, k: u64) -> Result<()> {
    if k == 0 || k > d {
        return Err(Error::invalid(format!("need 1 <= k <= d, got d={d}, k={k}")));
    }
    Ok(())
}

fn threshold(k: u64, c: &BigRational) -> u64 {
    let ck = c * BigRational::from_integer(BigInt::from(k));
    exact::ceil_to_int(&ck).to_u64().expect("ceil(c*k) <= k")
}

/// `sum_{j = ceil(ck)}^{k} C(k, j) C(d - k, k - j)`: how many `k`-subsets meet
/// a fixed `k`-subset in at least `ceil(ck)` elements.
pub fn bad_denominator(d: u64, k: u64, c: &BigRational) -> Result<BigUint> {
    check_dk(d, k)?;
    check_slack(c)?;
    let t = threshold(k, c);
    Ok((t..=k).map(|j| binomial(k, j) * binomial(d - k, k - j)).sum())
}

/// `A(d, k, c) = C(d, k) / bad_denominator(d, k, c)`, exactly.
pub fn guaranteed_edges(d: u64, k: u64, c: &BigRational) -> Result<BigRational> {
    let den = bad_denominator(d, k, c)?;
    Ok(BigRational::new(binomial(d, k).into(), den.into()))
}

/// True when `A >= base^d`, i.e. `A^(1/d) >= base`, decided exactly.
pub fn per_dim_root_at_least(a: &BigRational, d: u64, base: &BigRational) -> bool {
    let d = usize::try_from(d).expect("dimension fits in usize");
    *a >= num_traits::pow(base.clone(), d)
}

/// `A^(1/d)` at the given precision.
pub fn per_dim_root(a: &BigRational, d: u64, prec: Precision) -> Real {
    let mut ctx = Ctx::new(prec);
    let x = ctx.rational(a);
    let l = ctx.ln(&x);
    let scaled = ctx.div(&l, &ctx.int(d as i64));
    Real::new(ctx.exp(&scaled), prec)
}

/// `log 5 - 8/5`, the limiting growth constant.
pub fn rho(prec: Precision) -> Real {
    let mut ctx = Ctx::new(prec);
    let five = ctx.int(5);
    let l5 = ctx.ln(&five);
    let eight_fifths = ctx.div(&ctx.int(8), &five);
    Real::new(ctx.sub(&l5, &eight_fifths), prec)
}

fn check_h_domain(a: &BigRational, b: &BigRational, need_b_below_one: bool) -> Result<()> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if *a <= zero || *a >= one {
        return Err(Error::domain(format!("a must lie in (0, 1), got {}", exact::to_decimal_string(a, 12))));
    }
    if *b <= zero || *b > one || (need_b_below_one && *b >= one) {
        return Err(Error::domain(format!(
            "b must lie in (0, 1{}, got {}",
            if need_b_below_one { ")" } else { "]" },
            exact::to_decimal_string(b, 12)
        )));
    }
    let inner = &one - a * BigRational::from_integer(2.into()) + a * b;
    if !inner.is_positive() {
        return Err(Error::domain("1 - 2a + ab must be positive"));
    }
    Ok(())
}

/// `H(a, b) = -ab log a - 2(1-a) log(1-a) + ab log b + 2a(1-b) log(1-b)
///  + (1-2a+ab) log(1-2a+ab)`, with `x log x -> 0` at `b = 1`.
pub fn entropy_h(a: &BigRational, b: &BigRational, prec: Precision) -> Result<Real> {
    check_h_domain(a, b, false)?;
    let mut ctx = Ctx::new(prec);
    Ok(Real::new(h_in(&mut ctx, a, b), prec))
}

fn h_in(ctx: &mut Ctx, a: &BigRational, b: &BigRational) -> astro_float::BigFloat {
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let ab = a * b;
    let one_minus_a = &one - a;
    let one_minus_b = &one - b;
    let inner = &one - &two * a + &ab;

    let fa = ctx.rational(a);
    let fb = ctx.rational(b);
    let fab = ctx.rational(&ab);
    let f1a = ctx.rational(&one_minus_a);
    let f1b = ctx.rational(&one_minus_b);
    let finner = ctx.rational(&inner);

    let ln_a = ctx.ln(&fa);
    let ln_b = ctx.ln(&fb);
    let t1 = ctx.mul(&fab, &ln_a);
    let t2 = ctx.xlogx(&f1a);
    let t3 = ctx.mul(&fab, &ln_b);
    let t4 = ctx.xlogx(&f1b);
    let t5 = ctx.xlogx(&finner);

    let two_f = ctx.int(2);
    let t2 = ctx.mul(&two_f, &t2);
    let t4 = ctx.mul(&ctx.mul(&two_f, &fa), &t4);
    let s = ctx.sub(&t3, &t1);
    let s = ctx.sub(&s, &t2);
    let s = ctx.add(&s, &t4);
    ctx.add(&s, &t5)
}

/// `dH/db = -a log a + a log b - 2a log(1-b) + a log(1-2a+ab)`.
pub fn entropy_h_db(a: &BigRational, b: &BigRational, prec: Precision) -> Result<Real> {
    check_h_domain(a, b, true)?;
    let one = BigRational::one();
    let inner = &one - a * BigRational::from_integer(2.into()) + a * b;
    let mut ctx = Ctx::new(prec);
    let fa = ctx.rational(a);
    let fb = ctx.rational(b);
    let f1b = ctx.rational(&(&one - b));
    let finner = ctx.rational(&inner);
    let ln_a = ctx.ln(&fa);
    let ln_b = ctx.ln(&fb);
    let ln_1b = ctx.ln(&f1b);
    let ln_inner = ctx.ln(&finner);
    // a * (log b - log a - 2 log(1-b) + log(1-2a+ab))
    let s = ctx.sub(&ln_b, &ln_a);
    let two_ln = ctx.mul(&ctx.int(2), &ln_1b);
    let s = ctx.sub(&s, &two_ln);
    let s = ctx.add(&s, &ln_inner);
    Ok(Real::new(ctx.mul(&fa, &s), prec))
}

/// One evaluation of `H` and its `b`-derivative.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisPoint {
    pub a: f64,
    pub b: f64,
    pub h_value: Real,
    pub dh_db_value: Real,
}

pub fn analysis_point(a: &BigRational, b: &BigRational, prec: Precision) -> Result<AnalysisPoint> {
    Ok(AnalysisPoint {
        a: exact::to_f64(a),
        b: exact::to_f64(b),
        h_value: entropy_h(a, b, prec)?,
        dh_db_value: entropy_h_db(a, b, prec)?,
    })
}

/// `(exp(H(c/5, c)) - 1) / c`, which tends to `log 5 - 8/5` as `c -> 0`.
pub fn growth_ratio(c: &BigRational, prec: Precision) -> Result<Real> {
    check_slack(c)?;
    let a = c / BigRational::from_integer(5.into());
    let mut ctx = Ctx::new(prec);
    let h = h_in(&mut ctx, &a, c);
    let e = ctx.exp(&h);
    let num = ctx.sub(&e, &ctx.int(1));
    let fc = ctx.rational(c);
    Ok(Real::new(ctx.div(&num, &fc), prec))
}

/// Search window for [`choose_k`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KWindow {
    /// Half-width `max(3, ceil(0.02 d))` around `round(c d / 5)`.
    #[default]
    Default,
    /// Explicit half-width.
    HalfWidth(u64),
    /// Every `k` in `1..=d`.
    Full,
}

/// Default half-width of the `k` search window.
pub fn default_half_width(d: u64) -> u64 {
    let two_percent = exact::ceil_to_int(&BigRational::new(BigInt::from(2 * d), BigInt::from(100)));
    3.max(two_percent.to_u64().unwrap_or(u64::MAX))
}

/// Inclusive `k` range searched by [`choose_k`].
pub fn k_window(d: u64, c: &BigRational, window: KWindow) -> (u64, u64) {
    let center = exact::round_half_away(&(c * BigRational::from_integer(BigInt::from(d)) / BigRational::from_integer(5.into())))
        .to_u64()
        .unwrap_or(0);
    let w = match window {
        KWindow::Default => default_half_width(d),
        KWindow::HalfWidth(w) => w,
        KWindow::Full => return (1, d),
    };
    let lo = center.saturating_sub(w).max(1);
    let hi = center.saturating_add(w).min(d).max(lo);
    (lo, hi)
}

/// The `k` maximising `A(d, k, c)` over the window around `c d / 5`; ties go
/// to the smaller `k`.
pub fn choose_k(d: u64, c: &BigRational, window: KWindow) -> Result<u64> {
    if d == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    check_slack(c)?;
    let (lo, hi) = k_window(d, c, window);
    let mut best: Option<(u64, BigRational)> = None;
    for k in lo..=hi {
        let a = guaranteed_edges(d, k, c)?;
        if best.as_ref().is_none_or(|(_, b)| a > *b) {
            best = Some((k, a));
        }
    }
    Ok(best.expect("window is non-empty").0)
}

fn power_of_linear(d: u64, rate: &astro_float::BigFloat, c: &BigRational, ctx: &mut Ctx) -> astro_float::BigFloat {
    let fc = ctx.rational(c);
    let step = ctx.mul(rate, &fc);
    let base = ctx.add(&ctx.int(1), &step);
    ctx.powi(&base, d as usize)
}

/// `(1 + (log 5 - 8/5 - delta) c)^d`.
pub fn lower_envelope(d: u64, c: &BigRational, delta: &BigRational, prec: Precision) -> Result<Real> {
    check_slack(c)?;
    let rho_r = rho(prec);
    let delta_f = exact::to_f64(delta);
    if delta.is_negative() || delta_f > rho_r.to_f64() {
        return Err(Error::domain(format!(
            "delta must lie in [0, log 5 - 8/5], got {}",
            exact::to_decimal_string(delta, 12)
        )));
    }
    let mut ctx = Ctx::new(prec);
    let fdelta = ctx.rational(delta);
    let rate = ctx.sub(rho_r.raw(), &fdelta);
    Ok(Real::new(power_of_linear(d, &rate, c, &mut ctx), prec))
}

/// Upper envelope value plus whether `c` satisfies the `(0, 0.02)` hypothesis
/// under which it is a bound.
#[derive(Debug, Clone, Serialize)]
pub struct UpperEnvelope {
    pub value: Real,
    pub hypothesis_holds: bool,
}

/// `(1 + 3.75 c)^d`. Evaluated for any `c > 0`; `hypothesis_holds` flags
/// `c` outside `(0, 0.02)`.
pub fn upper_envelope(d: u64, c: &BigRational, prec: Precision) -> Result<UpperEnvelope> {
    if !c.is_positive() {
        return Err(Error::domain("c must be positive"));
    }
    let hypothesis_holds = *c < exact::rational(2, 100);
    let mut ctx = Ctx::new(prec);
    let rate = ctx.rational(&exact::rational(375, 100));
    Ok(UpperEnvelope {
        value: Real::new(power_of_linear(d, &rate, c, &mut ctx), prec),
        hypothesis_holds,
    })
}

/// Asymptotic cap-packing count `sqrt(pi d^3 cos(2 alpha) / 2) / (sqrt(2) sin alpha)^(d-1)`
/// for `alpha` in `(0, pi/4)` radians.
pub fn rankin_asymptotic(alpha: &Real, d: u64, prec: Precision) -> Result<Real> {
    if d < 2 {
        return Err(Error::domain("Rankin's formula needs d >= 2"));
    }
    let mut ctx = Ctx::new(prec);
    let a = alpha.raw().clone();
    let pi = ctx.pi();
    let quarter = ctx.div(&pi, &ctx.int(4));
    if !a.is_positive() || a.cmp(&quarter).is_none_or(|o| o >= 0) {
        return Err(Error::domain(format!("alpha must lie in (0, pi/4), got {}", alpha.to_f64())));
    }
    let two_a = ctx.mul(&ctx.int(2), &a);
    let cos2a = ctx.cos(&two_a);
    let fd = ctx.int(d as i64);
    let d3 = ctx.powi(&fd, 3);
    let num = ctx.mul(&ctx.mul(&pi, &d3), &cos2a);
    let num = ctx.div(&num, &ctx.int(2));
    let num = ctx.sqrt(&num);
    let sin_a = ctx.sin(&a);
    let sqrt2 = ctx.sqrt(&ctx.int(2));
    let base = ctx.mul(&sqrt2, &sin_a);
    let den = ctx.powi(&base, (d - 1) as usize);
    Ok(Real::new(ctx.div(&num, &den), prec))
}

/// Jung's radius `sqrt(d / (2 (d + 1)))` for a diameter-1 set in `R^d`.
pub fn jung_radius(d: u64, prec: Precision) -> Result<Real> {
    if d == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    let mut ctx = Ctx::new(prec);
    let q = ctx.rational(&BigRational::new(BigInt::from(d), BigInt::from(2 * (d + 1))));
    Ok(Real::new(ctx.sqrt(&q), prec))
}

pub fn jung_radius_f64(d: u64) -> f64 {
    (d as f64 / (2.0 * (d as f64 + 1.0))).sqrt()
}

/// Both exponent variants of the cap-count bound. The statement form is
/// `d^2 (1-y)^(-d)`, the form reached at the end of its derivation is
/// `d^2 (1-y)^(1-d)`; neither is preferred.
#[derive(Debug, Clone, Serialize)]
pub struct CapCountBound {
    pub statement_form: Real,
    pub proof_form: Real,
}

pub fn cap_count_bound(d: u64, y: &BigRational, prec: Precision) -> Result<CapCountBound> {
    if d < 2 {
        return Err(Error::domain("cap count bound needs d >= 2"));
    }
    if !y.is_positive() || *y >= BigRational::one() {
        return Err(Error::domain("y must lie in (0, 1)"));
    }
    let (statement, proof) = cap_count_bound_exact(d, y);
    Ok(CapCountBound {
        statement_form: Real::from_rational(&statement, prec),
        proof_form: Real::from_rational(&proof, prec),
    })
}

/// Exact rational values of both cap-count variants.
pub fn cap_count_bound_exact(d: u64, y: &BigRational) -> (BigRational, BigRational) {
    let base = BigRational::one() - y;
    let d2 = BigRational::from_integer(BigInt::from(d) * BigInt::from(d));
    let du = d as usize;
    let statement = &d2 / num_traits::pow(base.clone(), du);
    let proof = &d2 / num_traits::pow(base, du - 1);
    (statement, proof)
}

/// Ratio of the smallest to the largest side allowed by angles in
/// `(pi/3 - 2c, pi/3 + c)`, against its linear lower bound `1 - 1.744 c`.
#[derive(Debug, Clone, Serialize)]
pub struct SineRatio {
    pub ratio: Real,
    pub linear_bound: Real,
    pub holds: bool,
}

pub fn sine_ratio_margin(c: &BigRational, prec: Precision) -> Result<SineRatio> {
    if !c.is_positive() || *c >= exact::rational(24, 1000) {
        return Err(Error::domain(format!(
            "sine ratio margin needs c in (0, 0.024), got {}",
            exact::to_decimal_string(c, 12)
        )));
    }
    let mut ctx = Ctx::new(prec);
    let pi = ctx.pi();
    let third = ctx.div(&pi, &ctx.int(3));
    let fc = ctx.rational(c);
    let small = ctx.sub(&third, &ctx.mul(&ctx.int(2), &fc));
    let large = ctx.add(&third, &fc);
    let s_small = ctx.sin(&small);
    let s_large = ctx.sin(&large);
    let ratio = ctx.div(&s_small, &s_large);
    let linear = BigRational::one() - exact::rational(1744, 1000) * c;
    let flinear = ctx.rational(&linear);
    let holds = ratio.cmp(&flinear).is_some_and(|o| o >= 0);
    Ok(SineRatio {
        ratio: Real::new(ratio, prec),
        linear_bound: Real::new(flinear, prec),
        holds,
    })
}

/// Exact and Stirling-form values of `log C(a(n), b(n))` for
/// `a(n) = round(x n)`, `b(n) = round(y n)`.
#[derive(Debug, Clone, Serialize)]
pub struct StirlingPoint {
    pub n: u64,
    pub log_binomial: f64,
    pub entropy_form: f64,
    /// `(log_binomial - entropy_form) / n`; tends to 0.
    pub gap_per_n: f64,
}

/// Numeric consistency check of `log C(xn, yn) ~ n [x log x - y log y - (x-y) log(x-y)]`.
pub fn stirling_consistency(x: &BigRational, y: &BigRational, ns: &[u64], prec: Precision) -> Result<Vec<StirlingPoint>> {
    if !(BigRational::zero() < *y && y < x && *x < BigRational::one()) {
        return Err(Error::domain("need 0 < y < x < 1"));
    }
    let mut ctx = Ctx::new(prec);
    let fx = ctx.rational(x);
    let fy = ctx.rational(y);
    let fxy = ctx.rational(&(x - y));
    let tx = ctx.xlogx(&fx);
    let ty = ctx.xlogx(&fy);
    let txy = ctx.xlogx(&fxy);
    let rate = ctx.sub(&ctx.sub(&tx, &ty), &txy);
    let rate = Real::new(rate, prec).to_f64();
    ns.iter()
        .map(|&n| {
            let big_n = BigRational::from_integer(BigInt::from(n));
            let a = exact::round_half_away(&(x * &big_n)).to_u64().unwrap_or(0);
            let b = exact::round_half_away(&(y * &big_n)).to_u64().unwrap_or(0);
            let binom: BigInt = binomial(a, b).into();
            if binom.is_zero() {
                return Err(Error::domain(format!("C({a}, {b}) vanishes at n = {n}")));
            }
            let fb = ctx.big_int(&binom);
            let log_binomial = Real::new(ctx.ln(&fb), prec).to_f64();
            let entropy_form = rate * n as f64;
            Ok(StirlingPoint {
                n,
                log_binomial,
                entropy_form,
                gap_per_n: (log_binomial - entropy_form) / n as f64,
            })
        })
        .collect()
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// All bound quantities for one `(d, k, c)`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub d: u64,
    pub k: u64,
    pub c: String,
    pub threshold: u64,
    pub a_guess: Real,
    pub rho: Real,
    pub delta: String,
    #[serde(serialize_with = "ser_display")]
    pub binomial: BigUint,
    #[serde(serialize_with = "ser_display")]
    pub bad_denominator: BigUint,
    #[serde(serialize_with = "ser_rational")]
    pub a_exact: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub a_floor: BigInt,
    #[serde(serialize_with = "ser_display")]
    pub a_ceil: BigInt,
    pub a_per_dim_root: Real,
    pub lower_envelope: Real,
    pub upper_envelope: Real,
    pub upper_hypothesis_holds: bool,
}

pub fn bound_report(params: &ConstructionParams, delta: &BigRational, prec: Precision) -> Result<BoundReport> {
    let d = params.d() as u64;
    let k = params.k() as u64;
    let c = params.c();
    let den = bad_denominator(d, k, c)?;
    let binom = binomial(d, k);
    let a_exact = BigRational::new(binom.clone().into(), den.clone().into());
    let upper = upper_envelope(d, c, prec)?;
    Ok(BoundReport {
        d,
        k,
        c: exact::to_decimal_string(c, 30),
        threshold: params.threshold() as u64,
        a_guess: Real::from_rational(&(c / BigRational::from_integer(5.into())), prec),
        rho: rho(prec),
        delta: exact::to_decimal_string(delta, 30),
        binomial: binom,
        bad_denominator: den,
        a_floor: exact::floor_to_int(&a_exact),
        a_ceil: exact::ceil_to_int(&a_exact),
        a_per_dim_root: per_dim_root(&a_exact, d, prec),
        lower_envelope: lower_envelope(d, c, delta, prec)?,
        upper_envelope: upper.value,
        upper_hypothesis_holds: upper.hypothesis_holds,
        a_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        exact::parse_decimal(s).unwrap()
    }

    const P: Precision = Precision::DEFAULT;

    #[test]
    fn bad_denominator_examples() {
        assert_eq!(bad_denominator(10, 2, &q("0.6")).unwrap(), BigUint::from(1u32));
        assert_eq!(bad_denominator(6, 3, &q("0.5")).unwrap(), BigUint::from(10u32));
        for d in 1..12 {
            assert_eq!(bad_denominator(d, d, &q("0.37")).unwrap(), BigUint::from(1u32));
        }
    }

    #[test]
    fn guaranteed_edges_examples() {
        assert_eq!(guaranteed_edges(4, 2, &q("0.5")).unwrap(), exact::rational(6, 5));
        assert_eq!(guaranteed_edges(6, 3, &q("0.5")).unwrap(), exact::rational(2, 1));
        assert_eq!(guaranteed_edges(9, 9, &q("0.5")).unwrap(), exact::rational(1, 1));
        assert!(guaranteed_edges(4, 5, &q("0.5")).is_err());
        assert!(guaranteed_edges(4, 2, &q("1.0")).is_err());
    }

    #[test]
    fn h_rejects_bad_domain() {
        assert!(entropy_h(&q("0"), &q("0.5"), P).is_err());
        assert!(entropy_h(&q("0.5"), &q("1.5"), P).is_err());
        assert!(entropy_h(&q("0.9"), &q("0.1"), P).is_err()); // 1 - 1.8 + 0.09 < 0
        assert!(entropy_h_db(&q("0.1"), &q("1"), P).is_err());
        assert!(entropy_h(&q("0.1"), &q("1"), P).unwrap().is_finite());
    }

    #[test]
    fn derivative_vanishes_on_the_diagonal() {
        for a in ["0.01", "0.04", "0.2", "0.29"] {
            let v = entropy_h_db(&q(a), &q(a), P).unwrap().to_f64();
            assert!(v.abs() < 1e-30, "{a}: {v}");
            assert!(entropy_h(&q(a), &q(a), P).unwrap().is_finite());
        }
        assert!(entropy_h_db(&q("0.04"), &q("0.5"), P).unwrap().to_f64() > 0.0);
    }

    #[test]
    fn rho_value() {
        let r = rho(P).to_f64();
        assert!((r - (5f64.ln() - 1.6)).abs() < 1e-15);
        assert!((r - 0.009438).abs() < 1e-6);
    }

    #[test]
    fn window_clamps_low_end() {
        assert_eq!(k_window(5, &q("0.1"), KWindow::Default), (1, 3));
        assert_eq!(choose_k(5, &q("0.1"), KWindow::Default).unwrap(), 1);
        assert_eq!(k_window(100, &q("0.2"), KWindow::Default), (1, 7));
        assert_eq!(k_window(1000, &q("0.5"), KWindow::Default), (80, 120));
        assert_eq!(k_window(2, &q("0.2"), KWindow::Default), (1, 2));
        assert_eq!(k_window(7, &q("0.5"), KWindow::Full), (1, 7));
    }

    #[test]
    fn envelope_degenerate_cases() {
        let rho_dec = q(&rho(P).to_string());
        // delta equal to rho (to 38 digits) leaves a base of ~1.
        let v = lower_envelope(50, &q("0.5"), &rho_dec, P).unwrap().to_f64();
        assert!((v - 1.0).abs() < 1e-30);
        let tiny = q("1e-30");
        assert!((lower_envelope(100, &tiny, &q("0"), P).unwrap().to_f64() - 1.0).abs() < 1e-25);
        assert!((upper_envelope(100, &tiny, P).unwrap().value.to_f64() - 1.0).abs() < 1e-25);
        let one = upper_envelope(1, &q("0.01"), P).unwrap();
        assert!((one.value.to_f64() - 1.0375).abs() < 1e-15);
        assert!(one.hypothesis_holds);
        assert!(!upper_envelope(1, &q("0.05"), P).unwrap().hypothesis_holds);
        assert!(lower_envelope(10, &q("0.2"), &q("0.01"), P).is_err());
    }

    #[test]
    fn jung_radius_is_increasing_and_bounded() {
        assert_eq!(jung_radius(1, P).unwrap().to_f64(), 0.5);
        assert!((jung_radius(3, P).unwrap().to_f64() - 0.375f64.sqrt()).abs() < 1e-16);
        let mut prev = 0.0;
        for d in 1..500 {
            let r = jung_radius_f64(d);
            assert!(r > prev && r < std::f64::consts::FRAC_1_SQRT_2);
            prev = r;
        }
    }

    #[test]
    fn cap_count_examples() {
        let b = cap_count_bound(10, &q("0.5"), P).unwrap();
        assert_eq!(b.statement_form.to_f64(), 102_400.0);
        assert_eq!(b.proof_form.to_f64(), 51_200.0);
        let tiny = cap_count_bound(10, &q("1e-40"), P).unwrap();
        assert!((tiny.statement_form.to_f64() - 100.0).abs() < 1e-30);
        assert!(cap_count_bound(1, &q("0.5"), P).is_err());
        assert!(cap_count_bound(10, &q("1"), P).is_err());
    }

    #[test]
    fn rankin_domain_and_limit() {
        let quarter_pi_minus = Real::from_f64(std::f64::consts::FRAC_PI_4 - 1e-12, P);
        assert!(rankin_asymptotic(&quarter_pi_minus, 10, P).unwrap().to_f64() < 1e-3);
        let quarter_pi = crate::angle::AngleSpec::parse("pi/4").unwrap().radians(P);
        assert!(rankin_asymptotic(&quarter_pi, 10, P).is_err());
        assert!(rankin_asymptotic(&Real::from_f64(0.3, P), 1, P).is_err());
    }

    #[test]
    fn sine_ratio_examples() {
        let s = sine_ratio_margin(&q("0.02"), P).unwrap();
        assert!(s.holds);
        assert!((s.ratio.to_f64() - 0.965_161_299_870_089).abs() < 1e-14);
        assert!((s.linear_bound.to_f64() - 0.96512).abs() < 1e-15);
        assert!(sine_ratio_margin(&q("0.023"), P).unwrap().holds);
        assert!((sine_ratio_margin(&q("1e-20"), P).unwrap().ratio.to_f64() - 1.0).abs() < 1e-18);
        assert!(sine_ratio_margin(&q("0.024"), P).is_err());
    }

    #[test]
    fn stirling_gap_shrinks() {
        let pts = stirling_consistency(&q("0.5"), &q("0.2"), &[10, 100, 1000, 10_000], P).unwrap();
        for w in pts.windows(2) {
            assert!(w[1].gap_per_n.abs() < w[0].gap_per_n.abs());
        }
        assert!(pts.last().unwrap().gap_per_n.abs() < 1e-3);
    }

    #[test]
    fn report_for_small_case() {
        let params = ConstructionParams::parse(4, 2, "0.5").unwrap();
        let r = bound_report(&params, &q("0"), P).unwrap();
        assert_eq!(r.a_exact, exact::rational(6, 5));
        assert_eq!(r.a_floor, BigInt::from(1));
        assert_eq!(r.a_ceil, BigInt::from(2));
        assert!((r.a_per_dim_root.to_f64() - 1.2f64.powf(0.25)).abs() < 1e-15);
        assert!((r.a_guess.to_f64() - 0.1).abs() < 1e-17);
    }
}
