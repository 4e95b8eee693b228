//! Maximum subsets with every angle under a threshold, as maximum independent
//! sets of the 3-uniform conflict hypergraph of violating triples.

use serde::Serialize;

use crate::angle::{AngleSpec, Mode};
use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::verify::{AsGeometry, Geometry, Threshold};

pub const BNB_LIMIT: usize = 64;
pub const NAIVE_LIMIT: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMethod {
    /// Branch and bound with clique-cover pruning.
    Bnb,
    /// Exhaustive enumeration of all subsets.
    Naive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaxSubset {
    /// Lexicographically smallest maximum subset, sorted.
    pub indices: Vec<usize>,
    pub size: usize,
    pub violating_triples: usize,
}

/// Conflict hypergraph: `pair[i][j]` holds the third vertices completing a
/// violating triple with `i` and `j`.
struct Conflicts {
    n: usize,
    pair: Vec<u64>,
    degree: Vec<usize>,
    triples: usize,
}

impl Conflicts {
    fn build(geo: &Geometry, alpha: &AngleSpec, mode: Mode, prec: Precision) -> Result<Self> {
        let n = geo.len();
        geo.check_distinct()?;
        let threshold = Threshold::new(alpha, prec);
        let mut pair = vec![0u64; n * n];
        let mut degree = vec![0; n];
        let mut triples = 0;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut bad = false;
                    for (x, apex, y) in [(j, i, k), (i, j, k), (i, k, j)] {
                        match threshold.decide(geo, x, apex, y, mode).accepted() {
                            Some(true) => {}
                            Some(false) => bad = true,
                            None => {
                                return Err(Error::invalid(format!(
                                    "angle at {apex} in triple ({i}, {j}, {k}) cannot be decided against {alpha}"
                                )))
                            }
                        }
                    }
                    if bad {
                        triples += 1;
                        for (a, b, c) in [(i, j, k), (i, k, j), (j, k, i)] {
                            pair[a * n + b] |= 1 << c;
                            pair[b * n + a] |= 1 << c;
                        }
                        degree[i] += 1;
                        degree[j] += 1;
                        degree[k] += 1;
                    }
                }
            }
        }
        Ok(Conflicts {
            n,
            pair,
            degree,
            triples,
        })
    }

    #[inline]
    fn pair(&self, a: usize, b: usize) -> u64 {
        self.pair[a * self.n + b]
    }
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// True when `a` sorts before `b` as ascending index lists of equal length.
fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (1 << diff.trailing_zeros()) != 0
}

fn naive(conf: &Conflicts) -> u64 {
    let n = conf.n;
    let mut valid = vec![false; 1 << n];
    valid[0] = true;
    let mut best = 0u64;
    for mask in 1u64..(1 << n) {
        let top = 63 - mask.leading_zeros() as usize;
        let rest = mask & !(1 << top);
        if !valid[rest as usize] {
            continue;
        }
        if bits(rest).any(|i| conf.pair(i, top) & rest != 0) {
            continue;
        }
        valid[mask as usize] = true;
        let (size, best_size) = (mask.count_ones(), best.count_ones());
        if size > best_size || (size == best_size && lex_less(mask, best)) {
            best = mask;
        }
    }
    best
}

struct Bnb<'a> {
    conf: &'a Conflicts,
    /// Vertices by violating-triple degree, descending.
    order: Vec<usize>,
    best: u64,
    best_size: u32,
    /// Stop as soon as a set of this size is found.
    target: Option<u32>,
}

impl<'a> Bnb<'a> {
    fn new(conf: &'a Conflicts) -> Self {
        let mut order: Vec<usize> = (0..conf.n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(conf.degree[v]), v));
        Bnb {
            conf,
            order,
            best: 0,
            best_size: 0,
            target: None,
        }
    }

    /// Upper bound on the independent vertices among `cand`: groups in which
    /// every triple conflicts contribute at most two each.
    fn cover_bound(&self, cand: u64) -> u32 {
        let mut uncovered = cand;
        let mut bound = 0;
        for &v in &self.order {
            if uncovered & (1 << v) == 0 {
                continue;
            }
            uncovered &= !(1 << v);
            let mut group = vec![v];
            for &u in &self.order {
                if uncovered & (1 << u) == 0 {
                    continue;
                }
                let closes_all = group
                    .iter()
                    .enumerate()
                    .all(|(ix, &x)| group[ix + 1..].iter().all(|&y| self.conf.pair(x, y) & (1 << u) != 0));
                if closes_all {
                    group.push(u);
                    uncovered &= !(1 << u);
                }
            }
            bound += group.len().min(2) as u32;
        }
        bound
    }

    fn done(&self) -> bool {
        self.target.is_some_and(|t| self.best_size >= t)
    }

    fn search(&mut self, chosen: u64, cand: u64) {
        if self.done() {
            return;
        }
        let size = chosen.count_ones();
        if size > self.best_size {
            self.best = chosen;
            self.best_size = size;
            if self.done() {
                return;
            }
        }
        if cand == 0 {
            return;
        }
        let need = self.target.map_or(self.best_size + 1, |t| t.max(self.best_size + 1));
        if size + cand.count_ones() < need || size + self.cover_bound(cand) < need {
            return;
        }
        let v = *self
            .order
            .iter()
            .find(|&&v| cand & (1 << v) != 0)
            .expect("cand is non-empty");
        let rest = cand & !(1 << v);
        let blocked = bits(chosen).fold(0u64, |acc, w| acc | self.conf.pair(v, w));
        self.search(chosen | (1 << v), rest & !blocked);
        self.search(chosen, rest);
    }

    /// Size of a maximum independent set among `cand` extending `chosen`.
    fn maximum(conf: &'a Conflicts) -> u32 {
        let mut bnb = Bnb::new(conf);
        let all = if conf.n == 64 { u64::MAX } else { (1u64 << conf.n) - 1 };
        bnb.search(0, all);
        bnb.best_size
    }

    fn feasible(conf: &'a Conflicts, chosen: u64, cand: u64, target: u32) -> bool {
        let mut bnb = Bnb::new(conf);
        bnb.target = Some(target);
        bnb.best = chosen;
        bnb.best_size = chosen.count_ones();
        bnb.search(chosen, cand);
        bnb.best_size >= target
    }

    /// Lexicographically smallest independent set of size `target`.
    fn canonical(conf: &'a Conflicts, target: u32) -> u64 {
        let n = conf.n;
        let mut chosen = 0u64;
        let mut cand = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for i in 0..n {
            if chosen.count_ones() == target {
                break;
            }
            if cand & (1 << i) == 0 {
                continue;
            }
            cand &= !(1 << i);
            let blocked = bits(chosen).fold(0u64, |acc, w| acc | conf.pair(i, w));
            let with_i = chosen | (1 << i);
            let cand_with = cand & !blocked;
            if Bnb::feasible(conf, with_i, cand_with, target) {
                chosen = with_i;
                cand = cand_with;
            }
        }
        chosen
    }
}

/// Largest subset of `candidates` whose every angle satisfies `alpha` in the
/// given mode. Both methods return the lexicographically smallest maximum
/// subset, so their outputs are directly comparable.
pub fn brute_force_max_subset(
    candidates: &impl AsGeometry,
    alpha: &AngleSpec,
    mode: Mode,
    method: SearchMethod,
    prec: Precision,
) -> Result<MaxSubset> {
    let geo = candidates.geometry();
    let n = geo.len();
    let limit = match method {
        SearchMethod::Bnb => BNB_LIMIT,
        SearchMethod::Naive => NAIVE_LIMIT,
    };
    if n > limit {
        return Err(Error::Budget {
            what: match method {
                SearchMethod::Bnb => "branch-and-bound candidates",
                SearchMethod::Naive => "naive enumeration candidates",
            },
            needed: n.to_string(),
            budget: limit as u64,
        });
    }
    if n == 0 {
        return Ok(MaxSubset {
            indices: vec![],
            size: 0,
            violating_triples: 0,
        });
    }
    let conf = Conflicts::build(&geo, alpha, mode, prec)?;
    let mask = match method {
        SearchMethod::Naive => naive(&conf),
        SearchMethod::Bnb => {
            let size = Bnb::maximum(&conf);
            Bnb::canonical(&conf, size)
        }
    };
    let indices: Vec<usize> = bits(mask).collect();
    Ok(MaxSubset {
        size: indices.len(),
        indices,
        violating_triples: conf.triples,
    })
}
