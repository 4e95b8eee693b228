//! Point-set containers.
//!
//! Lattice sets carry machine integers, Euclidean sets carry exact rationals
//! (in practice dyadic values rounded from a multi-precision evaluation).
//! Both are exact, so every predicate downstream can be decided exactly.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact;
use crate::precision::Precision;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePointSet {
    d: usize,
    points: Vec<Vec<i64>>,
}

impl LatticePointSet {
    pub fn new(d: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::invalid(format!(
                    "point {i} has {} coordinates, expected {d}",
                    p.len()
                )));
            }
            // Keeps every squared distance comfortably inside i128.
            if p.iter().any(|x| x.unsigned_abs() > 1 << 52) {
                return Err(Error::invalid(format!("point {i} has a coordinate beyond 2^52")));
            }
        }
        Ok(LatticePointSet { d, points })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> i128 {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| {
                let t = i128::from(a - b);
                t * t
            })
            .sum()
    }

    /// Subset of the points, in the given index order.
    pub fn select(&self, indices: &[usize]) -> LatticePointSet {
        LatticePointSet {
            d: self.d,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclideanPointSet {
    d: usize,
    points: Vec<Vec<BigRational>>,
    precision: Precision,
}

impl EuclideanPointSet {
    pub fn new(d: usize, points: Vec<Vec<BigRational>>, precision: Precision) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::invalid(format!(
                    "point {i} has {} coordinates, expected {d}",
                    p.len()
                )));
            }
        }
        Ok(EuclideanPointSet { d, points, precision })
    }

    /// Exact image of `f64` coordinates. Non-finite values are rejected.
    pub fn from_f64(d: usize, points: &[Vec<f64>]) -> Result<Self> {
        let mut rows = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let row = p
                .iter()
                .map(|&x| {
                    exact::from_f64(x)
                        .ok_or_else(|| Error::invalid(format!("point {i} has a non-finite coordinate")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        EuclideanPointSet::new(d, rows, Precision::new(64)?)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<BigRational>] {
        &self.points
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.points
            .iter()
            .map(|p| p.iter().map(exact::to_f64).collect())
            .collect()
    }

    /// Scales every coordinate by the least common denominator. Returns the
    /// integer coordinates and the scale.
    pub fn to_scaled_integers(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let scale = exact::common_denominator(self.points.iter().flatten());
        let rows = self
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|q| q.numer() * (&scale / q.denom()))
                    .collect()
            })
            .collect();
        (rows, scale)
    }
}

impl From<&LatticePointSet> for EuclideanPointSet {
    fn from(set: &LatticePointSet) -> Self {
        let points = set
            .points
            .iter()
            .map(|p| p.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        EuclideanPointSet {
            d: set.d,
            points,
            precision: Precision::DEFAULT,
        }
    }
}

/// Either kind of point set, as read from a file or produced by a builder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointSet {
    Lattice(LatticePointSet),
    Euclidean(EuclideanPointSet),
}

impl PointSet {
    pub fn d(&self) -> usize {
        match self {
            PointSet::Lattice(s) => s.d(),
            PointSet::Euclidean(s) => s.d(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PointSet::Lattice(s) => s.len(),
            PointSet::Euclidean(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        match self {
            PointSet::Lattice(s) => s
                .points()
                .iter()
                .map(|p| p.iter().map(|&x| x as f64).collect())
                .collect(),
            PointSet::Euclidean(s) => s.to_f64(),
        }
    }
}

impl From<LatticePointSet> for PointSet {
    fn from(s: LatticePointSet) -> Self {
        PointSet::Lattice(s)
    }
}

impl From<EuclideanPointSet> for PointSet {
    fn from(s: EuclideanPointSet) -> Self {
        PointSet::Euclidean(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_rejects_ragged_rows() {
        assert!(LatticePointSet::new(2, vec![vec![0, 0], vec![1]]).is_err());
        assert!(LatticePointSet::new(0, vec![]).is_err());
    }

    #[test]
    fn scaled_integers_share_one_denominator() {
        let half = exact::rational(1, 2);
        let third = exact::rational(1, 3);
        let set = EuclideanPointSet::new(
            2,
            vec![vec![half.clone(), third.clone()], vec![third, half]],
            Precision::DEFAULT,
        )
        .unwrap();
        let (rows, scale) = set.to_scaled_integers();
        assert_eq!(scale, BigInt::from(6));
        assert_eq!(rows[0], vec![BigInt::from(3), BigInt::from(2)]);
        assert_eq!(rows[1], vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn from_f64_is_exact() {
        let set = EuclideanPointSet::from_f64(1, &[vec![0.1]]).unwrap();
        assert_eq!(set.to_f64()[0][0], 0.1);
        assert!(EuclideanPointSet::from_f64(1, &[vec![f64::NAN]]).is_err());
    }
}
