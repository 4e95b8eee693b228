//! Ground truth for small instances: the regular simplex, the Gram-rank
//! certificate for equidistant families, exhaustive maximum angle-constrained
//! subsets and a randomized check of the isosceles-triangle lemma.

mod lemma;
mod rank;
mod search;
mod simplex;

pub use lemma::{isosceles_lemma_check, isosceles_lemma_check_with, ApexSampling, LemmaCounterexample, LemmaReport};
pub use rank::{equidistant_rank_check, RankReport};
pub use search::{brute_force_max_subset, MaxSubset, SearchMethod, BNB_LIMIT, NAIVE_LIMIT};
pub use simplex::{regular_simplex, regular_simplex_intrinsic};
