//! Randomised search for weight sets passing both the non-vanishing
//! condition and the Gaussian-fit check.

use num_rational::Rational64;
use rand::seq::index;
use rand::Rng;

use super::condition::check_nonzero_condition;
use super::shaping::{assignment_for, gaussian_fit_check};
use crate::error::{Error, Result};
use crate::rng::{substream, Purpose};
use crate::weights::WeightSet;

/// Where candidate weights come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateFamily {
    /// Reciprocals of distinct primes; the first candidate uses the `f`
    /// smallest primes.
    ReciprocalPrimes,
    /// Distinct ratios `p/q` with `1 ≤ p ≤ q ≤ 32`.
    RandomRational,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Candidates tried before giving up.
    pub budget: usize,
    /// Monte Carlo samples per Gaussian-fit check.
    pub n_samples: u64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 64,
            n_samples: 1_000_000,
            seed: 0,
        }
    }
}

const PRIMES: [i64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
const MAX_DENOM: i64 = 32;

fn propose<R: Rng + ?Sized>(
    family: CandidateFamily,
    f: usize,
    attempt: usize,
    rng: &mut R,
) -> Result<WeightSet> {
    let values: Vec<Rational64> = match family {
        CandidateFamily::ReciprocalPrimes => {
            if f > PRIMES.len() {
                return Err(Error::InvalidConfiguration(format!(
                    "at most {} reciprocal primes",
                    PRIMES.len()
                )));
            }
            let mut picks: Vec<usize> = if attempt == 0 {
                (0..f).collect()
            } else {
                index::sample(rng, PRIMES.len(), f).into_vec()
            };
            picks.sort_unstable();
            picks
                .iter()
                .map(|&i| Rational64::new(1, PRIMES[i]))
                .collect()
        }
        CandidateFamily::RandomRational => {
            let mut v: Vec<Rational64> = Vec::with_capacity(f);
            while v.len() < f {
                let q = rng.random_range(1..=MAX_DENOM);
                let r = Rational64::new(rng.random_range(1..=q), q);
                if !v.contains(&r) {
                    v.push(r);
                }
            }
            v
        }
    };
    WeightSet::from_rationals(values)
}

/// Proposes up to `cfg.budget` candidate sets of size `f` and returns the
/// first that passes both checks for rows of degree `d`. Deterministic in
/// `cfg.seed`.
pub fn search_weight_set(
    f: usize,
    d: usize,
    delta: f64,
    eps: f64,
    family: CandidateFamily,
    cfg: &SearchConfig,
) -> Result<WeightSet> {
    if f == 0 || d == 0 {
        return Err(Error::InvalidConfiguration(
            "f and d must be positive".into(),
        ));
    }
    let mut rng = substream(cfg.seed, Purpose::Search, 0);
    for attempt in 0..cfg.budget {
        let ws = propose(family, f, attempt, &mut rng)?;
        if !check_nonzero_condition(&ws, d, assignment_for(&ws, d))?.holds {
            continue;
        }
        let seed = cfg.seed.wrapping_add(attempt as u64 + 1);
        if gaussian_fit_check(&ws, d, delta, eps, cfg.n_samples, seed)?.satisfied {
            return Ok(ws);
        }
    }
    Err(Error::NoSolutionFound(cfg.budget))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_reciprocal_primes_first() {
        let cfg = SearchConfig {
            budget: 1,
            n_samples: 500_000,
            seed: 3,
        };
        let ws =
            search_weight_set(8, 8, 0.2, 1e-4, CandidateFamily::ReciprocalPrimes, &cfg).unwrap();
        assert_eq!(ws, WeightSet::reciprocal_primes());
    }

    #[test]
    fn single_weight_fails() {
        let cfg = SearchConfig {
            budget: 4,
            n_samples: 20_000,
            seed: 3,
        };
        let r = search_weight_set(1, 1, 0.2, 1e-4, CandidateFamily::ReciprocalPrimes, &cfg);
        assert!(matches!(r, Err(Error::NoSolutionFound(4))));
    }

    #[test]
    fn deterministic_under_seed() {
        let cfg = SearchConfig {
            budget: 16,
            n_samples: 100_000,
            seed: 9,
        };
        let a = search_weight_set(8, 8, 0.2, 1e-3, CandidateFamily::RandomRational, &cfg);
        let b = search_weight_set(8, 8, 0.2, 1e-3, CandidateFamily::RandomRational, &cfg);
        match (a, b) {
            (Ok(x), Ok(y)) => assert_eq!(x, y),
            (Err(x), Err(y)) => assert_eq!(x.to_string(), y.to_string()),
            _ => panic!("outcomes differ"),
        }
    }
}
