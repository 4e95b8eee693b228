use astro_float::BigFloat;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::points::EuclideanPointSet;
use crate::precision::{big_float_to_rational, Ctx, Precision};

fn to_rational(x: &BigFloat) -> BigRational {
    big_float_to_rational(x).expect("finite simplex coordinate")
}

/// The `d + 1` points `(0, .., 1/sqrt(2), .., 0)` of `R^(d+1)`: a regular
/// `d`-simplex with unit edges. `1/sqrt(2)` is rounded once, so all edges stay
/// exactly equal.
pub fn regular_simplex(d: usize, prec: Precision) -> Result<EuclideanPointSet> {
    if d == 0 {
        return Err(Error::invalid("simplex dimension must be positive"));
    }
    let ctx = Ctx::new(prec);
    let half = ctx.div(&ctx.int(1), &ctx.int(2));
    let s = to_rational(&ctx.sqrt(&half));
    let n = d + 1;
    let points = (0..n)
        .map(|i| {
            (0..n)
                .map(|m| if m == i { s.clone() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    EuclideanPointSet::new(n, points, prec)
}

/// The same simplex expressed in an orthonormal basis of its own hyperplane,
/// so it lives in `R^d`. Coordinates involve several square roots, so edge
/// lengths are equal only to the working precision.
pub fn regular_simplex_intrinsic(d: usize, prec: Precision) -> Result<EuclideanPointSet> {
    if d == 0 {
        return Err(Error::invalid("simplex dimension must be positive"));
    }
    let ctx = Ctx::new(prec);
    // Basis u_m = (1, .., 1, -m, 0, ..) / sqrt(m (m + 1)) for m = 1..=d; point i
    // is e_i / sqrt(2) minus the centroid, which is orthogonal to every u_m.
    let mut above = Vec::with_capacity(d);
    let mut on = Vec::with_capacity(d);
    for m in 1..=d as i64 {
        let den = ctx.int(2 * m * (m + 1));
        let inv = ctx.div(&ctx.int(1), &den);
        above.push(to_rational(&ctx.sqrt(&inv)));
        let q = ctx.div(&ctx.int(m), &ctx.int(2 * (m + 1)));
        on.push(-to_rational(&ctx.sqrt(&q)));
    }
    let points = (0..=d)
        .map(|i| {
            (1..=d)
                .map(|m| match i.cmp(&m) {
                    std::cmp::Ordering::Less => above[m - 1].clone(),
                    std::cmp::Ordering::Equal => on[m - 1].clone(),
                    std::cmp::Ordering::Greater => BigRational::zero(),
                })
                .collect()
        })
        .collect();
    EuclideanPointSet::new(d, points, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::distance_stats;

    #[test]
    fn edges_are_exactly_equal() {
        let s = regular_simplex(4, Precision::DEFAULT).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.d(), 5);
        let stats = distance_stats(&s).unwrap();
        assert_eq!(stats.min_sq, stats.max_sq);
        assert!((crate::exact::to_f64(&stats.max_sq) - 1.0).abs() < 1e-30);
    }

    #[test]
    fn segment() {
        let s = regular_simplex(1, Precision::DEFAULT).unwrap();
        let stats = distance_stats(&s).unwrap();
        assert!((stats.ratio - 1.0).abs() < 1e-15);
        assert!((crate::exact::to_f64(&stats.min_sq) - 1.0).abs() < 1e-30);
    }

    #[test]
    fn intrinsic_simplex_has_unit_edges() {
        let s = regular_simplex_intrinsic(6, Precision::DEFAULT).unwrap();
        assert_eq!(s.d(), 6);
        assert_eq!(s.len(), 7);
        let pts = s.to_f64();
        for i in 0..7 {
            for j in i + 1..7 {
                let d2: f64 = pts[i].iter().zip(&pts[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                assert!((d2 - 1.0).abs() < 1e-14, "{i} {j} {d2}");
            }
        }
    }
}
