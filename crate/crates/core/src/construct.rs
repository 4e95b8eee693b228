//! Greedy bounded-intersection hypergraph and its hypercube embedding.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{self, BoundReport, KWindow};
use crate::error::{Error, Result};
use crate::exact::binomial;
use crate::points::LatticePointSet;
use crate::precision::Precision;
use crate::subset::{check_slack, BoundedIntersectionHypergraph, ColexCombinations, ConstructionParams, KSubset};

pub const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnumerationOrder {
    #[default]
    Colex,
    /// Seeded shuffle of the colex rank order.
    Random { seed: u64 },
}

impl EnumerationOrder {
    pub fn name(&self) -> &'static str {
        match self {
            EnumerationOrder::Colex => "colex",
            EnumerationOrder::Random { .. } => "random",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            EnumerationOrder::Colex => None,
            EnumerationOrder::Random { seed } => Some(*seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreedyOptions {
    pub order: EnumerationOrder,
    /// Maximum number of candidate subsets examined.
    pub budget: u64,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions {
            order: EnumerationOrder::Colex,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Accepted edges packed as one flat word array.
struct Accepted {
    stride: usize,
    words: Vec<u64>,
}

impl Accepted {
    fn conflicts(&self, candidate: &[u64], max_meet: u32) -> bool {
        self.words.chunks_exact(self.stride).any(|edge| {
            let meet: u32 = edge.iter().zip(candidate).map(|(a, b)| (a & b).count_ones()).sum();
            meet > max_meet
        })
    }
}

/// Scans `k`-subsets of `[d]` in the requested order and keeps every subset
/// meeting all previously kept ones in at most `ceil(ck) - 1` elements.
///
/// With colex order and `C(d, k)` above the budget, the scan stops after
/// `budget` candidates and the result is flagged incomplete. A random order
/// has to materialise every candidate, so it refuses instead.
pub fn greedy_hypergraph(params: &ConstructionParams, opts: &GreedyOptions) -> Result<BoundedIntersectionHypergraph> {
    let d = params.d();
    let k = params.k();
    let total = binomial(d as u64, k as u64);
    let fits = total <= BigUint::from(opts.budget);
    let max_meet = params.max_intersection() as u32;
    let stride = d.div_ceil(64);
    let mut accepted = Accepted {
        stride,
        words: Vec::new(),
    };
    let mut edges = Vec::new();
    let mut consider = |combo: &[usize]| {
        let cand = KSubset::from_sorted_zero_based(d, combo);
        if !accepted.conflicts(cand.words(), max_meet) {
            accepted.words.extend_from_slice(cand.words());
            edges.push(cand);
        }
    };
    match opts.order {
        EnumerationOrder::Colex => {
            let limit = if fits { usize::MAX } else { opts.budget as usize };
            for combo in ColexCombinations::new(d, k).take(limit) {
                consider(&combo);
            }
        }
        EnumerationOrder::Random { seed } => {
            if !fits {
                return Err(Error::Budget {
                    what: "random-order enumeration",
                    needed: total.to_string(),
                    budget: opts.budget,
                });
            }
            let mut all: Vec<Vec<usize>> = ColexCombinations::new(d, k).collect();
            all.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            for combo in &all {
                consider(combo);
            }
        }
    }
    Ok(BoundedIntersectionHypergraph::from_greedy(params.clone(), edges, fits))
}

/// Characteristic vectors of the edges, in edge order.
pub fn embed_hypercube(graph: &BoundedIntersectionHypergraph) -> LatticePointSet {
    let points = graph.edges().iter().map(KSubset::characteristic_vector).collect();
    LatticePointSet::new(graph.params().d(), points).expect("characteristic vectors have length d")
}

#[derive(Debug, Clone)]
pub struct ConstructOptions {
    /// Fixed edge size; `None` picks it with [`bounds::choose_k`].
    pub k: Option<usize>,
    pub window: KWindow,
    pub greedy: GreedyOptions,
    /// Slack subtracted from the growth constant in the lower envelope.
    pub delta: BigRational,
    pub precision: Precision,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            k: None,
            window: KWindow::Default,
            greedy: GreedyOptions::default(),
            delta: BigRational::zero(),
            precision: Precision::DEFAULT,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub hypergraph: BoundedIntersectionHypergraph,
    pub points: LatticePointSet,
    pub report: BoundReport,
}

/// Chooses `k`, runs the greedy scan to completion and embeds the result.
/// Refuses with [`Error::Budget`] when `C(d, k)` exceeds the budget.
pub fn construct_point_set(d: usize, c: &BigRational, opts: &ConstructOptions) -> Result<Construction> {
    if d == 0 {
        return Err(Error::invalid("dimension d must be at least 1"));
    }
    check_slack(c)?;
    let k = match opts.k {
        Some(k) => k,
        None => bounds::choose_k(d as u64, c, opts.window)?
            .to_usize()
            .expect("k <= d"),
    };
    let params = ConstructionParams::new(d, k, c.clone())?;
    let total = binomial(d as u64, k as u64);
    if total > BigUint::from(opts.greedy.budget) {
        return Err(Error::Budget {
            what: "candidate enumeration",
            needed: total.to_string(),
            budget: opts.greedy.budget,
        });
    }
    let hypergraph = greedy_hypergraph(&params, &opts.greedy)?;
    let points = embed_hypercube(&hypergraph);
    let report = bounds::bound_report(&params, &opts.delta, opts.precision)?;
    Ok(Construction {
        hypergraph,
        points,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;

    fn params(d: usize, k: usize, c: &str) -> ConstructionParams {
        ConstructionParams::parse(d, k, c).unwrap()
    }

    fn naive_max_meet(g: &BoundedIntersectionHypergraph) -> usize {
        let e = g.edges();
        let mut worst = 0;
        for i in 0..e.len() {
            for j in 0..e.len() {
                if i != j {
                    let common = e[i].elements().iter().filter(|m| e[j].elements().contains(m)).count();
                    worst = worst.max(common);
                }
            }
        }
        worst
    }

    #[test]
    fn four_choose_two_disjoint_pairs() {
        let g = greedy_hypergraph(&params(4, 2, "0.5"), &GreedyOptions::default()).unwrap();
        let edges: Vec<_> = g.edges().iter().map(KSubset::elements).collect();
        assert_eq!(edges, vec![vec![1, 2], vec![3, 4]]);
        assert!(g.is_complete());
    }

    #[test]
    fn full_subset_is_the_only_edge() {
        let g = greedy_hypergraph(&params(5, 5, "0.3"), &GreedyOptions::default()).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.edges()[0].elements(), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn six_choose_three_against_naive_checker() {
        let g = greedy_hypergraph(&params(6, 3, "0.5"), &GreedyOptions::default()).unwrap();
        assert!(g.len() >= 2);
        assert!(naive_max_meet(&g) <= 1);
    }

    #[test]
    fn budget_truncates_colex_and_refuses_random() {
        let p = params(10, 3, "0.5");
        let opts = GreedyOptions {
            order: EnumerationOrder::Colex,
            budget: 5,
        };
        let g = greedy_hypergraph(&p, &opts).unwrap();
        assert!(!g.is_complete());
        let opts = GreedyOptions {
            order: EnumerationOrder::Random { seed: 1 },
            budget: 5,
        };
        assert!(matches!(greedy_hypergraph(&p, &opts), Err(Error::Budget { .. })));
    }

    #[test]
    fn random_order_is_seed_deterministic() {
        let p = params(12, 4, "0.5");
        let run = |seed| {
            let opts = GreedyOptions {
                order: EnumerationOrder::Random { seed },
                budget: DEFAULT_BUDGET,
            };
            greedy_hypergraph(&p, &opts).unwrap().edges().to_vec()
        };
        assert_eq!(run(7), run(7));
        let g = BoundedIntersectionHypergraph::new(p.clone(), run(9)).unwrap();
        assert!(naive_max_meet(&g) <= p.max_intersection());
    }

    #[test]
    fn embedding_examples() {
        let g = greedy_hypergraph(&params(4, 2, "0.5"), &GreedyOptions::default()).unwrap();
        let pts = embed_hypercube(&g);
        assert_eq!(pts.points(), &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]);
        assert_eq!(pts.squared_distance(0, 1), 4);
        let single = greedy_hypergraph(&params(3, 3, "0.5"), &GreedyOptions::default()).unwrap();
        assert_eq!(embed_hypercube(&single).len(), 1);
    }

    #[test]
    fn pipeline_unit_vectors() {
        let c = exact::parse_decimal("0.99").unwrap();
        let opts = ConstructOptions {
            k: Some(1),
            ..Default::default()
        };
        let out = construct_point_set(4, &c, &opts).unwrap();
        assert_eq!(out.points.len(), 4);
        for i in 0..4 {
            for j in i + 1..4 {
                assert_eq!(out.points.squared_distance(i, j), 2);
            }
        }
    }

    #[test]
    fn pipeline_in_dimension_one() {
        let c = exact::parse_decimal("0.5").unwrap();
        let out = construct_point_set(1, &c, &ConstructOptions::default()).unwrap();
        assert_eq!(out.points.len(), 1);
    }

    #[test]
    fn pipeline_refuses_over_budget() {
        let c = exact::parse_decimal("0.5").unwrap();
        let opts = ConstructOptions {
            k: Some(10),
            greedy: GreedyOptions {
                budget: 1000,
                ..Default::default()
            },
            ..Default::default()
        };
        assert!(matches!(construct_point_set(30, &c, &opts), Err(Error::Budget { .. })));
        assert!(construct_point_set(0, &c, &ConstructOptions::default()).is_err());
    }
}
