//! Radial projection of a point set onto the boundary of an enclosing ball.

use serde::Serialize;

use super::ball::{distance, Ball};
use crate::error::{Error, Result};
use crate::points::EuclideanPointSet;

/// Distances below this (relative to the radius) count as "on the centre".
const CENTER_TOL: f64 = 1e-12;
/// Relative slack for treating a point as already on the sphere.
const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct SphereProjection {
    #[serde(skip)]
    pub images: EuclideanPointSet,
    /// Pairs with `|P_m P_n| > radius`.
    pub hypothesis_pairs: usize,
    /// Hypothesis pairs with both points already on the sphere, which keep
    /// their distance.
    pub boundary_pairs: usize,
    /// Hypothesis pairs whose distance strictly grew.
    pub strictly_increased: usize,
    /// Hypothesis pairs with a point inside the ball whose distance did not grow.
    pub violations: Vec<(usize, usize)>,
}

impl SphereProjection {
    pub fn consequence_holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Maps each point `P` to the intersection `Q` of the ray from the centre
/// through `P` with the ball boundary, then checks that every pair farther
/// apart than the radius, not both on the boundary, moves strictly farther
/// apart.
pub fn project_to_sphere(points: &[Vec<f64>], ball: &Ball) -> Result<SphereProjection> {
    let dim = ball.center.len();
    let r = ball.radius;
    if r.is_nan() || r <= 0.0 {
        return Err(Error::invalid("projection needs a ball of positive radius"));
    }
    let mut images = Vec::with_capacity(points.len());
    let mut on_sphere = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { left: p.len(), right: dim });
        }
        let dist = distance(p, &ball.center);
        if dist <= CENTER_TOL * r {
            return Err(Error::invalid(format!("point {i} sits on the ball centre")));
        }
        if dist > r * (1.0 + 1e-9) {
            return Err(Error::invalid(format!("point {i} lies outside the ball")));
        }
        on_sphere.push(dist >= r * (1.0 - BOUNDARY_TOL));
        let q: Vec<f64> = p
            .iter()
            .zip(&ball.center)
            .map(|(x, o)| o + (x - o) * (r / dist))
            .collect();
        images.push(q);
    }
    let mut hypothesis_pairs = 0;
    let mut boundary_pairs = 0;
    let mut strictly_increased = 0;
    let mut violations = Vec::new();
    for m in 0..points.len() {
        for n in m + 1..points.len() {
            let before = distance(&points[m], &points[n]);
            if before <= r {
                continue;
            }
            hypothesis_pairs += 1;
            if on_sphere[m] && on_sphere[n] {
                boundary_pairs += 1;
                continue;
            }
            let after = distance(&images[m], &images[n]);
            if after > before {
                strictly_increased += 1;
            } else {
                violations.push((m, n));
            }
        }
    }
    Ok(SphereProjection {
        images: EuclideanPointSet::from_f64(dim, &images)?,
        hypothesis_pairs,
        boundary_pairs,
        strictly_increased,
        violations,
    })
}
