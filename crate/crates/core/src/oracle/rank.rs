use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::EuclideanPointSet;

/// Tolerance for the unit-length and half-inner-product preconditions.
const EQUIDISTANT_TOL: f64 = 1e-9;

/// Eigenvalues below this fraction of the largest count as zero.
const RANK_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    /// Number of difference vectors `a_i - a_base`.
    pub family_size: usize,
    pub ambient_dim: usize,
    pub rank: usize,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// Largest entry of `|G - (I + J)/2|`.
    pub max_gram_deviation: f64,
    /// The family is linearly independent, which forces `family_size <= ambient_dim`.
    pub independent: bool,
}

/// Gram-matrix certificate that an equidistant family `a_i - a_base` with
/// unit lengths and pairwise inner products `1/2` is linearly independent.
pub fn equidistant_rank_check(points: &EuclideanPointSet, base: usize) -> Result<RankReport> {
    let pts = points.to_f64();
    if base >= pts.len() {
        return Err(Error::invalid(format!("base index {base} out of range")));
    }
    if pts.len() < 2 {
        return Err(Error::invalid("need at least two points"));
    }
    let base_pt = &pts[base];
    let others: Vec<usize> = (0..pts.len()).filter(|&i| i != base).collect();
    let vecs: Vec<Vec<f64>> = others
        .iter()
        .map(|&i| pts[i].iter().zip(base_pt).map(|(a, b)| a - b).collect())
        .collect();
    let dot = |u: &[f64], v: &[f64]| -> f64 { u.iter().zip(v).map(|(a, b)| a * b).sum() };
    let m = vecs.len();
    let gram = DMatrix::from_fn(m, m, |r, c| dot(&vecs[r], &vecs[c]));
    let mut max_dev: f64 = 0.0;
    for r in 0..m {
        for c in r..m {
            let expect = if r == c { 1.0 } else { 0.5 };
            let dev = (gram[(r, c)] - expect).abs();
            if dev > EQUIDISTANT_TOL {
                let what = if r == c { "|a_i - a_base|^2" } else { "<a_i - a_base, a_j - a_base>" };
                return Err(Error::invalid(format!(
                    "points {} and {} (base {base}) violate the equidistance precondition: {what} = {}, expected {expect}",
                    others[r], others[c], gram[(r, c)]
                )));
            }
            max_dev = max_dev.max(dev);
        }
    }
    let eig = SymmetricEigen::new(gram);
    let max_eig = eig.eigenvalues.iter().copied().fold(f64::MIN, f64::max);
    let min_eig = eig.eigenvalues.iter().copied().fold(f64::MAX, f64::min);
    let rank = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > RANK_THRESHOLD * max_eig)
        .count();
    Ok(RankReport {
        family_size: m,
        ambient_dim: points.d(),
        rank,
        min_eigenvalue: min_eig,
        max_eigenvalue: max_eig,
        max_gram_deviation: max_dev,
        independent: rank == m,
    })
}
