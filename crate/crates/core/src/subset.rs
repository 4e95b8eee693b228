//! `k`-subsets of `[d]` as word-array bit vectors, and the bounded-intersection
//! hypergraphs built from them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact;

const WORD_BITS: usize = 64;

/// A `k`-element subset of `{1, .., d}`.
///
/// Elements are 1-based in the public API; bit `m - 1` stores element `m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KSubset {
    d: usize,
    k: usize,
    words: Vec<u64>,
}

impl KSubset {
    /// Builds a subset from 1-based elements. Duplicates are rejected.
    pub fn from_elements(d: usize, elements: &[usize]) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        let mut words = vec![0u64; d.div_ceil(WORD_BITS)];
        for &m in elements {
            if m == 0 || m > d {
                return Err(Error::invalid(format!("element {m} outside 1..={d}")));
            }
            let (w, b) = ((m - 1) / WORD_BITS, (m - 1) % WORD_BITS);
            if words[w] >> b & 1 == 1 {
                return Err(Error::invalid(format!("element {m} repeated")));
            }
            words[w] |= 1 << b;
        }
        if elements.is_empty() {
            return Err(Error::invalid("subset must be non-empty"));
        }
        Ok(KSubset {
            d,
            k: elements.len(),
            words,
        })
    }

    /// Builds a subset from 0-based indices that are known to be distinct and
    /// in range (enumeration output).
    pub(crate) fn from_sorted_zero_based(d: usize, indices: &[usize]) -> Self {
        let mut words = vec![0u64; d.div_ceil(WORD_BITS)];
        for &i in indices {
            words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
        }
        KSubset {
            d,
            k: indices.len(),
            words,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, m: usize) -> bool {
        m >= 1 && m <= self.d && self.words[(m - 1) / WORD_BITS] >> ((m - 1) % WORD_BITS) & 1 == 1
    }

    /// 1-based elements in increasing order.
    pub fn elements(&self) -> Vec<usize> {
        (1..=self.d).filter(|&m| self.contains(m)).collect()
    }

    /// `|A ∩ B|`.
    pub fn intersection_size(&self, other: &KSubset) -> Result<usize> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                left: self.d,
                right: other.d,
            });
        }
        Ok(self.intersection_unchecked(other))
    }

    #[inline]
    pub(crate) fn intersection_unchecked(&self, other: &KSubset) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// The 0/1 indicator vector of length `d`.
    pub fn characteristic_vector(&self) -> Vec<i64> {
        (1..=self.d).map(|m| i64::from(self.contains(m))).collect()
    }
}

impl fmt::Debug for KSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KSubset(d={}, {:?})", self.d, self.elements())
    }
}

impl Serialize for KSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(s)
    }
}

/// Free-function form of [`KSubset::intersection_size`].
pub fn intersection_size(a: &KSubset, b: &KSubset) -> Result<usize> {
    a.intersection_size(b)
}

/// Free-function form of [`KSubset::characteristic_vector`].
pub fn characteristic_vector(f: &KSubset) -> Vec<i64> {
    f.characteristic_vector()
}

/// Parameters of one greedy run: dimension, edge size, slack `c` and the
/// intersection cutoff `ceil(c*k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    d: usize,
    k: usize,
    c: BigRational,
    threshold: usize,
}

impl ConstructionParams {
    pub fn new(d: usize, k: usize, c: BigRational) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension d must be at least 1"));
        }
        if k == 0 || k > d {
            return Err(Error::invalid(format!("edge size k={k} must lie in 1..={d}")));
        }
        check_slack(&c)?;
        let ck = &c * BigRational::from_integer(BigInt::from(k));
        let threshold = exact::ceil_to_int(&ck)
            .to_usize()
            .expect("ceil(c*k) <= k fits in usize");
        debug_assert!(threshold >= 1 && threshold <= k);
        Ok(ConstructionParams { d, k, c, threshold })
    }

    /// Parses `c` from a decimal string such as `"0.3"`.
    pub fn parse(d: usize, k: usize, c: &str) -> Result<Self> {
        Self::new(d, k, exact::parse_decimal(c)?)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    /// `ceil(c*k)`: accepted edges intersect in at most `threshold - 1` elements.
    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn max_intersection(&self) -> usize {
        self.threshold - 1
    }
}

/// Rejects `c` outside the open interval `(0, 1)`.
pub fn check_slack(c: &BigRational) -> Result<()> {
    if *c <= BigRational::zero() || *c >= BigRational::one() {
        return Err(Error::invalid(format!(
            "slack c must lie in (0, 1), got {}",
            exact::to_decimal_string(c, 12)
        )));
    }
    Ok(())
}

/// A `k`-uniform hypergraph on `[d]` whose distinct edges meet in fewer than
/// `c*k` elements. Edges keep the order in which they were accepted.
#[derive(Debug, Clone)]
pub struct BoundedIntersectionHypergraph {
    params: ConstructionParams,
    edges: Vec<KSubset>,
    complete: bool,
}

impl BoundedIntersectionHypergraph {
    /// Validates an externally supplied edge list.
    pub fn new(params: ConstructionParams, edges: Vec<KSubset>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.d() != params.d() {
                return Err(Error::DimensionMismatch {
                    left: e.d(),
                    right: params.d(),
                });
            }
            if e.k() != params.k() {
                return Err(Error::invalid(format!(
                    "edge {i} has {} elements, expected {}",
                    e.k(),
                    params.k()
                )));
            }
        }
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let meet = edges[i].intersection_unchecked(&edges[j]);
                if meet > params.max_intersection() {
                    return Err(Error::invalid(format!(
                        "edges {i} and {j} share {meet} elements, cutoff is {}",
                        params.threshold()
                    )));
                }
            }
        }
        Ok(BoundedIntersectionHypergraph {
            params,
            edges,
            complete: true,
        })
    }

    pub(crate) fn from_greedy(params: ConstructionParams, edges: Vec<KSubset>, complete: bool) -> Self {
        BoundedIntersectionHypergraph {
            params,
            edges,
            complete,
        }
    }

    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    pub fn edges(&self) -> &[KSubset] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// False when the candidate scan stopped at the enumeration budget; the
    /// lower-bound guarantee then does not apply.
    pub fn is_complete(&self) -> bool {
        self.complete
    }
}

/// Iterator over the `k`-subsets of `{0, .., d-1}` in colexicographic order,
/// as sorted index arrays.
#[derive(Debug, Clone)]
pub struct ColexCombinations {
    d: usize,
    current: Option<Vec<usize>>,
}

impl ColexCombinations {
    pub fn new(d: usize, k: usize) -> Self {
        let current = (k <= d).then(|| (0..k).collect());
        ColexCombinations { d, current }
    }
}

impl Iterator for ColexCombinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        // Smallest position that can be bumped without colliding with its
        // right neighbour (or the end of the ground set).
        let mut advanced = false;
        for i in 0..k {
            let limit = if i + 1 < k { next[i + 1] } else { self.d };
            if next[i] + 1 < limit {
                next[i] += 1;
                for (j, slot) in next.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            self.current = Some(next);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(d: usize, e: &[usize]) -> KSubset {
        KSubset::from_elements(d, e).unwrap()
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(set(4, &[1, 2]).intersection_size(&set(4, &[3, 4])).unwrap(), 0);
        assert_eq!(set(4, &[1, 2]).intersection_size(&set(4, &[1, 2])).unwrap(), 2);
        assert_eq!(set(8, &[1, 2, 5]).intersection_size(&set(8, &[2, 5, 7])).unwrap(), 2);
    }

    #[test]
    fn intersection_rejects_dimension_mismatch() {
        let err = set(4, &[1]).intersection_size(&set(5, &[1])).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { left: 4, right: 5 }));
    }

    #[test]
    fn characteristic_vector_examples() {
        assert_eq!(set(4, &[1, 2]).characteristic_vector(), vec![1, 1, 0, 0]);
        assert_eq!(set(4, &[3, 4]).characteristic_vector(), vec![0, 0, 1, 1]);
        assert_eq!(set(3, &[2]).characteristic_vector(), vec![0, 1, 0]);
    }

    #[test]
    fn wide_subsets_span_words() {
        let a = set(200, &[1, 64, 65, 128, 200]);
        let b = set(200, &[64, 65, 199, 200]);
        assert_eq!(a.intersection_size(&b).unwrap(), 3);
        assert_eq!(a.elements(), vec![1, 64, 65, 128, 200]);
        assert_eq!(a.words().len(), 4);
    }

    #[test]
    fn subset_validation() {
        assert!(KSubset::from_elements(4, &[0]).is_err());
        assert!(KSubset::from_elements(4, &[5]).is_err());
        assert!(KSubset::from_elements(4, &[2, 2]).is_err());
        assert!(KSubset::from_elements(4, &[]).is_err());
        assert!(KSubset::from_elements(0, &[1]).is_err());
    }

    #[test]
    fn params_threshold_is_exact() {
        // 0.3 * 10 = 3 exactly: cutoff 3, intersections at most 2.
        let p = ConstructionParams::parse(20, 10, "0.3").unwrap();
        assert_eq!(p.threshold(), 3);
        assert_eq!(p.max_intersection(), 2);
        let p = ConstructionParams::parse(4, 2, "0.5").unwrap();
        assert_eq!(p.threshold(), 1);
        let p = ConstructionParams::parse(6, 3, "0.5").unwrap();
        assert_eq!(p.threshold(), 2);
    }

    #[test]
    fn params_validation() {
        assert!(ConstructionParams::parse(0, 1, "0.5").is_err());
        assert!(ConstructionParams::parse(4, 0, "0.5").is_err());
        assert!(ConstructionParams::parse(4, 5, "0.5").is_err());
        assert!(ConstructionParams::parse(4, 2, "0").is_err());
        assert!(ConstructionParams::parse(4, 2, "1").is_err());
        assert!(ConstructionParams::parse(4, 2, "1.5").is_err());
    }

    #[test]
    fn colex_order_small() {
        let all: Vec<_> = ColexCombinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(ColexCombinations::new(3, 3).count(), 1);
        assert_eq!(ColexCombinations::new(3, 4).count(), 0);
        assert_eq!(ColexCombinations::new(10, 4).count(), 210);
    }

    #[test]
    fn hypergraph_validation_catches_heavy_overlap() {
        let p = ConstructionParams::parse(4, 2, "0.5").unwrap();
        let ok = BoundedIntersectionHypergraph::new(p.clone(), vec![set(4, &[1, 2]), set(4, &[3, 4])]);
        assert!(ok.is_ok());
        let bad = BoundedIntersectionHypergraph::new(p, vec![set(4, &[1, 2]), set(4, &[2, 3])]);
        assert!(bad.is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn subset_strategy(d: usize, k: usize) -> impl Strategy<Value = KSubset> {
            proptest::sample::subsequence((1..=d).collect::<Vec<_>>(), k)
                .prop_map(move |e| KSubset::from_elements(d, &e).unwrap())
        }

        proptest! {
            #[test]
            fn intersection_symmetry_and_distance_identity(
                (a, b) in (1usize..130, 1usize..9).prop_flat_map(|(d, k)| {
                    let k = k.min(d);
                    (subset_strategy(d, k), subset_strategy(d, k))
                })
            ) {
                let ab = a.intersection_size(&b).unwrap();
                prop_assert_eq!(ab, b.intersection_size(&a).unwrap());
                prop_assert_eq!(a.intersection_size(&a).unwrap(), a.k());
                let va = a.characteristic_vector();
                let vb = b.characteristic_vector();
                let sq: i64 = va.iter().zip(&vb).map(|(x, y)| (x - y) * (x - y)).sum();
                prop_assert_eq!(sq, 2 * a.k() as i64 - 2 * ab as i64);
            }
        }
    }
}
