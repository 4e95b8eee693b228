//! Randomized check of the isosceles-triangle lemma: if `|CA| = |CB|`, `M`
//! lies strictly inside `CA`, `N` strictly inside `CB` and `|MN| > |CA|`, then
//! `|AB| > |MN|`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Counterexamples kept in a report.
const MAX_COUNTEREXAMPLES: usize = 16;

/// How the apex angle at `C` is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ApexSampling {
    /// Uniform in `(0, pi)`.
    Uniform,
    /// Fixed apex angle in radians.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaCounterexample {
    pub apex: f64,
    pub s: f64,
    pub t: f64,
    pub ab: f64,
    pub mn: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub trials: u64,
    /// Samples meeting `|MN| > |CA|`.
    pub valid_samples: u64,
    pub counterexamples: Vec<LemmaCounterexample>,
    pub counterexample_count: u64,
    pub pass: bool,
}

pub fn isosceles_lemma_check(trials: u64, seed: u64) -> LemmaReport {
    isosceles_lemma_check_with(trials, seed, ApexSampling::Uniform)
}

/// `C = (0,0)`, `A = (1,0)`, `B = (cos g, sin g)`, `M = sA`, `N = tB` with
/// `s, t` drawn from the open interval `(0, 1)`.
pub fn isosceles_lemma_check_with(trials: u64, seed: u64, apex: ApexSampling) -> LemmaReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LemmaReport {
        trials,
        valid_samples: 0,
        counterexamples: Vec::new(),
        counterexample_count: 0,
        pass: true,
    };
    for _ in 0..trials {
        let g = match apex {
            ApexSampling::Uniform => open_unit(&mut rng) * std::f64::consts::PI,
            ApexSampling::Fixed(g) => g,
        };
        let s = open_unit(&mut rng);
        let t = open_unit(&mut rng);
        let cos_g = g.cos();
        let mn_sq = s * s + t * t - 2.0 * s * t * cos_g;
        if mn_sq <= 1.0 {
            continue;
        }
        report.valid_samples += 1;
        let ab_sq = 2.0 - 2.0 * cos_g;
        if ab_sq <= mn_sq {
            report.counterexample_count += 1;
            report.pass = false;
            if report.counterexamples.len() < MAX_COUNTEREXAMPLES {
                report.counterexamples.push(LemmaCounterexample {
                    apex: g,
                    s,
                    t,
                    ab: ab_sq.sqrt(),
                    mn: mn_sq.sqrt(),
                });
            }
        }
    }
    report
}

fn open_unit(rng: &mut impl Rng) -> f64 {
    loop {
        let x: f64 = rng.gen();
        if x > 0.0 {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_counterexamples() {
        let r = isosceles_lemma_check(20_000, 7);
        assert!(r.pass);
        assert!(r.valid_samples > 1000);
    }

    #[test]
    fn narrow_apex_never_qualifies() {
        // |MN| <= max(s, t) < 1 once the apex is at most pi/3
        let r = isosceles_lemma_check_with(5_000, 1, ApexSampling::Fixed(std::f64::consts::FRAC_PI_3));
        assert_eq!(r.valid_samples, 0);
    }

    #[test]
    fn seeded_runs_repeat() {
        assert_eq!(isosceles_lemma_check(1000, 3), isosceles_lemma_check(1000, 3));
    }
}
