//! Certification engine.
//!
//! Both point-set kinds are reduced to an exact matrix of squared distances
//! (integers, after clearing denominators). The angle at apex `B` of the
//! triple `A, B, C` then follows from the law of cosines:
//! `cos = (|AB|^2 + |CB|^2 - |AC|^2) / (2 |AB| |CB|)`, so every decision is
//! a comparison between an integer ratio and a rational enclosure of
//! `cos(alpha)`.

mod ball;
mod sphere;

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

pub use ball::{jung_check, smallest_enclosing_ball, smallest_enclosing_ball_f64, Ball, JungCheck};
pub use sphere::{project_to_sphere, SphereProjection};

use crate::angle::{AngleSpec, CosEnclosure, Mode};
use crate::error::{Error, Result};
use crate::exact;
use crate::points::{EuclideanPointSet, LatticePointSet, PointSet};
use crate::precision::Precision;

/// Float margins below this are re-decided exactly.
pub const BORDERLINE_TOLERANCE: f64 = 1e-9;

/// Precision ladder (bits) tried for borderline triples after the working
/// precision.
pub const ESCALATION_BITS: [usize; 2] = [256, 512];

#[derive(Debug, Clone)]
enum SqMatrix {
    Small(Vec<i128>),
    Big(Vec<BigInt>, Vec<f64>),
}

/// Exact pairwise squared distances of a point set, scaled to integers.
#[derive(Debug, Clone)]
pub struct Geometry {
    n: usize,
    sq: SqMatrix,
    /// Squared distances in original units are `sq / scale^2`.
    scale: BigInt,
}

impl Geometry {
    pub fn from_lattice(set: &LatticePointSet) -> Self {
        let n = set.len();
        let mut sq = vec![0i128; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = set.squared_distance(i, j);
                sq[i * n + j] = v;
                sq[j * n + i] = v;
            }
        }
        Geometry {
            n,
            sq: SqMatrix::Small(sq),
            scale: BigInt::from(1),
        }
    }

    pub fn from_euclidean(set: &EuclideanPointSet) -> Self {
        let n = set.len();
        let (rows, scale) = set.to_scaled_integers();
        let mut sq = vec![BigInt::zero(); n * n];
        let mut approx = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v: BigInt = rows[i]
                    .iter()
                    .zip(&rows[j])
                    .map(|(a, b)| {
                        let t = a - b;
                        &t * &t
                    })
                    .sum();
                let f = v.to_f64().unwrap_or(f64::INFINITY);
                approx[i * n + j] = f;
                approx[j * n + i] = f;
                sq[j * n + i] = v.clone();
                sq[i * n + j] = v;
            }
        }
        Geometry {
            n,
            sq: SqMatrix::Big(sq, approx),
            scale,
        }
    }

    pub fn from_point_set(set: &PointSet) -> Self {
        match set {
            PointSet::Lattice(s) => Geometry::from_lattice(s),
            PointSet::Euclidean(s) => Geometry::from_euclidean(s),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    fn sq_f64(&self, i: usize, j: usize) -> f64 {
        match &self.sq {
            SqMatrix::Small(m) => m[i * self.n + j] as f64,
            SqMatrix::Big(_, approx) => approx[i * self.n + j],
        }
    }

    fn sq_big(&self, i: usize, j: usize) -> BigInt {
        match &self.sq {
            SqMatrix::Small(m) => BigInt::from(m[i * self.n + j]),
            SqMatrix::Big(m, _) => m[i * self.n + j].clone(),
        }
    }

    fn sq_cmp(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> Ordering {
        match &self.sq {
            SqMatrix::Small(m) => m[i * self.n + j].cmp(&m[k * self.n + l]),
            SqMatrix::Big(m, _) => m[i * self.n + j].cmp(&m[k * self.n + l]),
        }
    }

    /// Squared distance in original units.
    pub fn squared_distance(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.sq_big(i, j), &self.scale * &self.scale)
    }

    /// Rejects coincident points.
    pub fn check_distinct(&self) -> Result<()> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.sq_f64(i, j) == 0.0 && self.sq_big(i, j).is_zero() {
                    return Err(Error::invalid(format!("points {i} and {j} coincide")));
                }
            }
        }
        Ok(())
    }

    /// Float cosine of the angle at `apex` between `i` and `k`.
    #[inline]
    fn cos_f64(&self, i: usize, apex: usize, k: usize) -> f64 {
        let a = self.sq_f64(i, apex);
        let b = self.sq_f64(k, apex);
        let e = self.sq_f64(i, k);
        ((a + b - e) / (2.0 * a.sqrt() * b.sqrt())).clamp(-1.0, 1.0)
    }

    /// Numerator `2 <A-B, C-B>` and squared denominator `4 |A-B|^2 |C-B|^2`.
    fn cos_exact_parts(&self, i: usize, apex: usize, k: usize) -> (BigInt, BigInt) {
        let a = self.sq_big(i, apex);
        let b = self.sq_big(k, apex);
        let e = self.sq_big(i, k);
        let num = &a + &b - e;
        let den = a * b * 4;
        (num, den)
    }

    /// Angle (radians, float) at `apex` of the triangle `i, apex, k`.
    pub fn angle(&self, i: usize, apex: usize, k: usize) -> f64 {
        self.cos_f64(i, apex, k).acos()
    }
}

/// Anything the verifier can reduce to a [`Geometry`].
pub trait AsGeometry {
    fn geometry(&self) -> Geometry;
}

impl AsGeometry for LatticePointSet {
    fn geometry(&self) -> Geometry {
        Geometry::from_lattice(self)
    }
}

impl AsGeometry for EuclideanPointSet {
    fn geometry(&self) -> Geometry {
        Geometry::from_euclidean(self)
    }
}

impl AsGeometry for PointSet {
    fn geometry(&self) -> Geometry {
        Geometry::from_point_set(self)
    }
}

impl AsGeometry for Geometry {
    fn geometry(&self) -> Geometry {
        self.clone()
    }
}

/// `cos(alpha)` enclosures at increasing precision, computed on demand.
pub struct Threshold {
    spec: AngleSpec,
    cos_f64: f64,
    ladder: Vec<usize>,
    levels: Vec<OnceLock<CosEnclosure>>,
}

/// Outcome of one exact triple decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleDecision {
    /// Decided by the float margin.
    Fast(bool),
    /// Needed the rational enclosure.
    Escalated(bool),
    /// Undecided even at the top of the precision ladder.
    Undecided,
}

impl TripleDecision {
    pub fn accepted(self) -> Option<bool> {
        match self {
            TripleDecision::Fast(v) | TripleDecision::Escalated(v) => Some(v),
            TripleDecision::Undecided => None,
        }
    }
}

impl Threshold {
    pub fn new(spec: &AngleSpec, prec: Precision) -> Self {
        let mut ladder = vec![prec.bits()];
        ladder.extend(ESCALATION_BITS.iter().copied().filter(|&b| b > prec.bits()));
        let levels = ladder.iter().map(|_| OnceLock::new()).collect();
        Threshold {
            spec: spec.clone(),
            cos_f64: spec.radians_f64().cos(),
            ladder,
            levels,
        }
    }

    pub fn spec(&self) -> &AngleSpec {
        &self.spec
    }

    fn level(&self, idx: usize) -> &CosEnclosure {
        self.levels[idx].get_or_init(|| self.spec.cos_enclosure(self.ladder[idx]))
    }

    /// Exact comparison of `cos(angle)` with `cos(alpha)` for the angle at
    /// `apex`, or `None` if no precision level separates them.
    pub fn compare_exact(&self, geo: &Geometry, i: usize, apex: usize, k: usize) -> Option<Ordering> {
        let (num, den) = geo.cos_exact_parts(i, apex, k);
        (0..self.ladder.len()).find_map(|lvl| self.level(lvl).compare(&num, &den))
    }

    pub fn decide(&self, geo: &Geometry, i: usize, apex: usize, k: usize, mode: Mode) -> TripleDecision {
        let margin = geo.cos_f64(i, apex, k) - self.cos_f64;
        if margin.abs() >= BORDERLINE_TOLERANCE {
            return TripleDecision::Fast(mode.accepts(margin.partial_cmp(&0.0).unwrap_or(Ordering::Equal)));
        }
        match self.compare_exact(geo, i, apex, k) {
            Some(ord) => TripleDecision::Escalated(mode.accepts(ord)),
            None => TripleDecision::Undecided,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

/// Result of the exhaustive angle scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleCertificate {
    pub n: usize,
    pub alpha: AngleSpec,
    pub alpha_threshold: f64,
    pub mode: Mode,
    pub max_angle: f64,
    /// `(i, j, k)` with apex `j`.
    pub argmax_triple: (usize, usize, usize),
    /// Apex-triples whose float margin was below the borderline tolerance.
    pub borderline_count: u64,
    /// Borderline triples that no precision level could decide.
    pub undecided_count: u64,
    pub violation_count: u64,
    /// First violating apex-triple in scan order.
    pub first_violation: Option<(usize, usize, usize)>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Default)]
struct ScanPartial {
    max_angle: f64,
    argmax: Option<(usize, usize, usize)>,
    borderline: u64,
    undecided: u64,
    violations: u64,
    first_violation: Option<(usize, usize, usize)>,
}

impl ScanPartial {
    fn merge(mut self, other: ScanPartial) -> ScanPartial {
        let take_other = match (self.argmax, other.argmax) {
            (None, _) => true,
            (_, None) => false,
            (Some(a), Some(b)) => match other.max_angle.partial_cmp(&self.max_angle) {
                Some(Ordering::Greater) => true,
                Some(Ordering::Equal) => b < a,
                _ => false,
            },
        };
        if take_other {
            self.max_angle = other.max_angle;
            self.argmax = other.argmax;
        }
        self.borderline += other.borderline;
        self.undecided += other.undecided;
        self.violations += other.violations;
        self.first_violation = match (self.first_violation, other.first_violation) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Scans every apex-triple and certifies `angle < alpha` (strict) or
/// `angle <= alpha` (weak).
pub fn max_angle(points: &impl AsGeometry, alpha: &AngleSpec, mode: Mode, prec: Precision) -> Result<AngleCertificate> {
    let geo = points.geometry();
    max_angle_geometry(&geo, alpha, mode, prec)
}

pub fn max_angle_geometry(geo: &Geometry, alpha: &AngleSpec, mode: Mode, prec: Precision) -> Result<AngleCertificate> {
    let n = geo.len();
    if n < 3 {
        return Err(Error::invalid(format!("angle certification needs at least 3 points, got {n}")));
    }
    geo.check_distinct()?;
    let threshold = Threshold::new(alpha, prec);
    let scan = (0..n)
        .into_par_iter()
        .map(|apex| {
            let mut part = ScanPartial::default();
            for i in 0..n {
                if i == apex {
                    continue;
                }
                for k in i + 1..n {
                    if k == apex {
                        continue;
                    }
                    let angle = geo.angle(i, apex, k);
                    let triple = (i, apex, k);
                    if part.argmax.is_none() || angle > part.max_angle {
                        part.max_angle = angle;
                        part.argmax = Some(triple);
                    }
                    let decision = threshold.decide(geo, i, apex, k, mode);
                    if matches!(decision, TripleDecision::Escalated(_) | TripleDecision::Undecided) {
                        part.borderline += 1;
                    }
                    match decision.accepted() {
                        Some(true) => {}
                        Some(false) => {
                            part.violations += 1;
                            part.first_violation.get_or_insert(triple);
                        }
                        None => part.undecided += 1,
                    }
                }
            }
            part
        })
        .reduce(ScanPartial::default, ScanPartial::merge);
    let pass = scan.violations == 0 && scan.undecided == 0;
    Ok(AngleCertificate {
        n,
        alpha: alpha.clone(),
        alpha_threshold: alpha.radians_f64(),
        mode,
        max_angle: scan.max_angle,
        argmax_triple: scan.argmax.expect("n >= 3 yields a triple"),
        borderline_count: scan.borderline,
        undecided_count: scan.undecided,
        violation_count: scan.violations,
        first_violation: scan.first_violation,
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
    })
}

fn serialize_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    if q.is_integer() {
        s.serialize_str(&q.numer().to_string())
    } else {
        s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
    }
}

/// Extreme pairwise squared distances, exact, with witnesses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceStats {
    #[serde(serialize_with = "serialize_rational")]
    pub min_sq: BigRational,
    #[serde(serialize_with = "serialize_rational")]
    pub max_sq: BigRational,
    pub argmin: (usize, usize),
    pub argmax: (usize, usize),
    /// `sqrt(min_sq / max_sq)`.
    pub ratio: f64,
}

pub fn distance_stats(points: &impl AsGeometry) -> Result<DistanceStats> {
    distance_stats_geometry(&points.geometry())
}

pub fn distance_stats_geometry(geo: &Geometry) -> Result<DistanceStats> {
    let n = geo.len();
    if n < 2 {
        return Err(Error::invalid(format!("distance statistics need at least 2 points, got {n}")));
    }
    geo.check_distinct()?;
    let mut argmin = (0, 1);
    let mut argmax = (0, 1);
    for i in 0..n {
        for j in i + 1..n {
            if geo.sq_cmp((i, j), argmin) == Ordering::Less {
                argmin = (i, j);
            }
            if geo.sq_cmp((i, j), argmax) == Ordering::Greater {
                argmax = (i, j);
            }
        }
    }
    let min_sq = geo.squared_distance(argmin.0, argmin.1);
    let max_sq = geo.squared_distance(argmax.0, argmax.1);
    let ratio = (exact::to_f64(&(&min_sq / &max_sq))).sqrt();
    Ok(DistanceStats {
        min_sq,
        max_sq,
        argmin,
        argmax,
        ratio,
    })
}

/// Largest slack for which the min/max-distance consequence is stated.
pub fn ratio_check_slack_limit() -> BigRational {
    exact::rational(24, 1000)
}

/// Consequence of the angle property for `c < 0.024`:
/// `min distance / max distance > 1 - 3.488 c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioCheck {
    pub c: String,
    pub ratio: f64,
    pub threshold: f64,
    pub margin: f64,
    pub pass: bool,
}

pub fn check_min_max_ratio(points: &impl AsGeometry, c: &BigRational) -> Result<RatioCheck> {
    let stats = distance_stats(points)?;
    check_min_max_ratio_stats(&stats, c)
}

pub fn check_min_max_ratio_stats(stats: &DistanceStats, c: &BigRational) -> Result<RatioCheck> {
    if *c <= BigRational::zero() || *c >= ratio_check_slack_limit() {
        return Err(Error::domain(format!(
            "min/max ratio check needs c in (0, 0.024), got {}",
            exact::to_decimal_string(c, 12)
        )));
    }
    let threshold = BigRational::from_integer(1.into()) - exact::rational(3488, 1000) * c;
    // threshold > 0 on the domain, so squaring preserves the comparison.
    let pass = stats.min_sq > &threshold * &threshold * &stats.max_sq;
    let threshold_f = exact::to_f64(&threshold);
    Ok(RatioCheck {
        c: exact::to_decimal_string(c, 30),
        ratio: stats.ratio,
        threshold: threshold_f,
        margin: stats.ratio - threshold_f,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(d: usize, pts: &[&[i64]]) -> LatticePointSet {
        LatticePointSet::new(d, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn tetrahedron() -> LatticePointSet {
        lattice(3, &[&[0, 0, 0], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1]])
    }

    #[test]
    fn tetrahedron_passes_just_above_sixty_degrees() {
        let alpha = AngleSpec::parse("pi/3+0.01").unwrap();
        let cert = max_angle(&tetrahedron(), &alpha, Mode::Strict, Precision::DEFAULT).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        assert!((cert.max_angle - std::f64::consts::FRAC_PI_3).abs() < 1e-15);
        assert_eq!(cert.borderline_count, 0);
    }

    #[test]
    fn tetrahedron_at_exactly_sixty_degrees() {
        let alpha = AngleSpec::parse("pi/3").unwrap();
        let weak = max_angle(&tetrahedron(), &alpha, Mode::Weak, Precision::DEFAULT).unwrap();
        let strict = max_angle(&tetrahedron(), &alpha, Mode::Strict, Precision::DEFAULT).unwrap();
        assert!(weak.verdict.is_pass());
        assert!(!strict.verdict.is_pass());
        // 4 apexes * C(3,2) pairs, every one borderline and every one decided
        assert_eq!(weak.borderline_count, 12);
        assert_eq!(weak.undecided_count, 0);
        assert_eq!(strict.violation_count, 12);
    }

    #[test]
    fn collinear_midpoint_fails() {
        let pts = lattice(1, &[&[0], &[2], &[1]]);
        let alpha = AngleSpec::parse("3.0").unwrap();
        let cert = max_angle(&pts, &alpha, Mode::Strict, Precision::DEFAULT).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
        assert_eq!(cert.max_angle, std::f64::consts::PI);
        assert_eq!(cert.argmax_triple.1, 2);
        let geo = pts.geometry();
        assert_eq!(geo.angle(1, 0, 2), 0.0);
    }

    #[test]
    fn unit_square_right_angles() {
        let sq = lattice(2, &[&[0, 0], &[1, 0], &[1, 1], &[0, 1]]);
        let alpha = AngleSpec::parse("pi/2").unwrap();
        let weak = max_angle(&sq, &alpha, Mode::Weak, Precision::DEFAULT).unwrap();
        let strict = max_angle(&sq, &alpha, Mode::Strict, Precision::DEFAULT).unwrap();
        assert!(weak.verdict.is_pass());
        assert!((weak.max_angle - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!(!strict.verdict.is_pass());
        assert_eq!(strict.violation_count, 4);
    }

    #[test]
    fn rejects_coincident_and_tiny_inputs() {
        let dup = lattice(2, &[&[0, 0], &[1, 0], &[0, 0]]);
        let alpha = AngleSpec::parse("pi/2").unwrap();
        assert!(max_angle(&dup, &alpha, Mode::Weak, Precision::DEFAULT).is_err());
        assert!(distance_stats(&dup).is_err());
        let two = lattice(2, &[&[0, 0], &[1, 0]]);
        assert!(max_angle(&two, &alpha, Mode::Weak, Precision::DEFAULT).is_err());
    }

    #[test]
    fn distance_stats_examples() {
        let two = lattice(4, &[&[1, 1, 0, 0], &[0, 0, 1, 1]]);
        let s = distance_stats(&two).unwrap();
        assert_eq!(s.min_sq, exact::rational(4, 1));
        assert_eq!(s.max_sq, exact::rational(4, 1));
        assert_eq!(s.ratio, 1.0);
        assert_eq!(distance_stats(&tetrahedron()).unwrap().ratio, 1.0);
    }

    #[test]
    fn ratio_check_examples() {
        let c = exact::rational(2, 100);
        assert!(check_min_max_ratio(&tetrahedron(), &c).unwrap().pass);
        // A thin triangle: sides 10, 10, 1 gives ratio 0.1 < 1 - 3.488 * 0.02.
        let thin = lattice(2, &[&[0, 0], &[10, 0], &[10, 1]]);
        let check = check_min_max_ratio(&thin, &c).unwrap();
        assert!(!check.pass);
        assert!(check.margin < 0.0);
        assert!(check_min_max_ratio(&thin, &exact::rational(3, 100)).is_err());
    }

    #[test]
    fn euclidean_and_lattice_agree() {
        let lat = tetrahedron();
        let euc = EuclideanPointSet::from(&lat);
        let alpha = AngleSpec::parse("pi/3").unwrap();
        let a = max_angle(&lat, &alpha, Mode::Weak, Precision::DEFAULT).unwrap();
        let b = max_angle(&euc, &alpha, Mode::Weak, Precision::DEFAULT).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn irrational_threshold_on_borderline_triangle() {
        // 45 degree corners of a right isosceles triangle against 45deg: cos^2 is
        // rational so the tie is decided exactly.
        let tri = lattice(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        let weak = max_angle(&tri, &AngleSpec::parse("90deg").unwrap(), Mode::Weak, Precision::DEFAULT).unwrap();
        assert!(weak.verdict.is_pass());
        let alpha = AngleSpec::parse("89.9999999999deg").unwrap();
        let cert = max_angle(&tri, &alpha, Mode::Weak, Precision::DEFAULT).unwrap();
        assert!(!cert.verdict.is_pass());
        assert_eq!(cert.undecided_count, 0);
        assert!(cert.borderline_count >= 1);
    }
}
