//! Minimum enclosing ball.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::bounds::jung_radius_f64;
use crate::error::{Error, Result};
use crate::points::EuclideanPointSet;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        let dist = distance(&self.center, p);
        dist <= self.radius * (1.0 + tol) + tol
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

enum Step {
    /// Barycentric weights of the circumcentre of an affinely independent support.
    Weights(Vec<f64>),
    /// Affine dependence among the support: `sum v_i p_i = 0`, `sum v_i = 0`.
    Dependent(Vec<f64>),
}

/// Circumcentre of the support in its affine hull, as barycentric weights.
fn circumcentre(points: &[Vec<f64>], support: &[usize]) -> Step {
    let m = support.len();
    if m == 1 {
        return Step::Weights(vec![1.0]);
    }
    let dim = points[support[0]].len();
    let origin = &points[support[0]];
    let vecs: Vec<DVector<f64>> = support[1..]
        .iter()
        .map(|&i| DVector::from_iterator(dim, points[i].iter().zip(origin).map(|(a, b)| a - b)))
        .collect();
    let gram = DMatrix::from_fn(m - 1, m - 1, |r, c| vecs[r].dot(&vecs[c]));
    let svd = gram.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let (kmin, smin) = svd.singular_values.argmin();
    if m - 1 > dim || smin <= 1e-13 * smax {
        let v_t = svd.v_t.expect("svd computed with v_t");
        let beta = v_t.row(kmin);
        let mut v = Vec::with_capacity(m);
        v.push(-beta.sum());
        v.extend(beta.iter().copied());
        return Step::Dependent(v);
    }
    let rhs = DVector::from_iterator(m - 1, vecs.iter().map(|v| 0.5 * v.norm_squared()));
    let Some(beta) = gram.lu().solve(&rhs) else {
        unreachable!("non-singular gram matrix")
    };
    let mut w = Vec::with_capacity(m);
    w.push(1.0 - beta.sum());
    w.extend(beta.iter().copied());
    Step::Weights(w)
}

fn combine(points: &[Vec<f64>], support: &[usize], weights: &[f64], dim: usize) -> Vec<f64> {
    let mut c = vec![0.0; dim];
    for (&i, &w) in support.iter().zip(weights) {
        for (cj, pj) in c.iter_mut().zip(&points[i]) {
            *cj += w * pj;
        }
    }
    c
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Walks `weights` along `dir` until the first coordinate with a negative
/// component reaches zero, then drops it from the support.
fn ratio_step(support: &mut Vec<usize>, weights: &mut Vec<f64>, dir: &[f64]) {
    let mut best: Option<(usize, f64)> = None;
    for (j, (&w, &d)) in weights.iter().zip(dir).enumerate() {
        if d < 0.0 {
            let t = (w / -d).max(0.0);
            if best.is_none_or(|(_, bt)| t < bt) {
                best = Some((j, t));
            }
        }
    }
    let Some((drop, t)) = best else { return };
    for (w, d) in weights.iter_mut().zip(dir) {
        *w += t * d;
    }
    support.remove(drop);
    weights.remove(drop);
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w = w.max(0.0) / total;
    }
}

/// Smallest enclosing ball by an active-set method on the dual quadratic
/// program: maximise `sum l_i |p_i|^2 - |sum l_i p_i|^2` over the simplex.
pub fn smallest_enclosing_ball_f64(points: &[Vec<f64>]) -> Result<Ball> {
    let first = points.first().ok_or_else(|| Error::invalid("enclosing ball of an empty set"))?;
    let dim = first.len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::invalid("points have differing dimensions"));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite coordinate"));
    }
    // Centre on the centroid so the gram matrices stay well scaled.
    let n = points.len();
    let mut centroid = vec![0.0; dim];
    for p in points {
        for (c, x) in centroid.iter_mut().zip(p) {
            *c += x / n as f64;
        }
    }
    let pts: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().zip(&centroid).map(|(x, c)| x - c).collect())
        .collect();
    let far = (0..n)
        .max_by(|&a, &b| sq_dist(&pts[a], &pts[0]).total_cmp(&sq_dist(&pts[b], &pts[0])))
        .unwrap_or(0);
    let mut support = vec![far];
    let mut weights = vec![1.0];
    let max_iter = 50 * (n + dim + 1) * (dim + 2);
    let mut done = None;
    for _ in 0..max_iter {
        match circumcentre(&pts, &support) {
            Step::Weights(target) => {
                if target.iter().all(|&w| w >= 0.0) {
                    weights = target;
                    let centre = combine(&pts, &support, &weights, dim);
                    let r2 = support.iter().map(|&i| sq_dist(&centre, &pts[i])).fold(0.0, f64::max);
                    let (k, d2) = (0..n)
                        .map(|k| (k, sq_dist(&centre, &pts[k])))
                        .max_by(|a, b| a.1.total_cmp(&b.1))
                        .unwrap_or((0, 0.0));
                    if d2 <= r2 * (1.0 + 4.0 * f64::EPSILON * n as f64) || support.contains(&k) {
                        done = Some((centre, r2.max(d2)));
                        break;
                    }
                    support.push(k);
                    weights.push(0.0);
                } else {
                    let dir: Vec<f64> = target.iter().zip(&weights).map(|(t, w)| t - w).collect();
                    ratio_step(&mut support, &mut weights, &dir);
                }
            }
            Step::Dependent(mut v) => {
                // Orient towards increasing the dual objective.
                let gain: f64 = support
                    .iter()
                    .zip(&v)
                    .map(|(&i, vi)| vi * pts[i].iter().map(|x| x * x).sum::<f64>())
                    .sum();
                let gain = if gain == 0.0 { *v.last().unwrap_or(&1.0) } else { gain };
                if gain < 0.0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                ratio_step(&mut support, &mut weights, &v);
            }
        }
    }
    let (centre, r2) = done.ok_or_else(|| Error::invalid("enclosing ball iteration did not converge"))?;
    let center: Vec<f64> = centre.iter().zip(&centroid).map(|(x, c)| x + c).collect();
    let radius = points.iter().map(|p| distance(&center, p)).fold(r2.sqrt(), f64::max);
    let ball = Ball { center, radius };
    debug_assert!(points.iter().all(|p| ball.contains(p, 1e-9)));
    Ok(ball)
}

pub fn smallest_enclosing_ball(points: &EuclideanPointSet) -> Result<Ball> {
    smallest_enclosing_ball_f64(&points.to_f64())
}

/// Jung's inequality for a computed ball: `radius <= jung_radius(d) * diameter`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JungCheck {
    pub d: usize,
    pub diameter: f64,
    pub radius: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn jung_check(points: &[Vec<f64>], ball: &Ball, tol: f64) -> JungCheck {
    let d = ball.center.len().max(1);
    let mut diameter: f64 = 0.0;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            diameter = diameter.max(distance(&points[i], &points[j]));
        }
    }
    let bound = jung_radius_f64(d as u64) * diameter;
    JungCheck {
        d,
        diameter,
        radius: ball.radius,
        bound,
        holds: ball.radius <= bound + tol,
    }
}
