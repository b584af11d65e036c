//! Unique-solution probability of a binary equation `Σ b_j w_j = u`.
//!
//! `e_l` is the probability that an equation with `l` weights lacks a unique
//! `±1` solution. The recursion adds one weight drawn from the weight set at
//! each step: `e_{l+1} = 1 − (1 − E)(1 − e_l)`.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};

use super::condition::FLOAT_ZERO_TOL;
use super::exact::{signed_sums, to_integers};
use crate::error::{Error, Result};
use crate::weights::WeightSet;

/// Largest equation size the enumerating routines accept.
pub const MAX_EQUATION_SIZE: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct UniqueSolutionReport {
    /// Equation size reached.
    pub l: usize,
    pub e_l: f64,
    /// `e_2, e_3, ..., e_l`.
    pub e_trace: Vec<f64>,
    /// `E` used for each step `e_j → e_{j+1}`, `j = 2..l`.
    pub big_e_trace: Vec<f64>,
    /// Exact `e_l` when every weight is rational.
    pub e_l_exact: Option<BigRational>,
}

fn check_size(l: usize) -> Result<()> {
    if l > MAX_EQUATION_SIZE {
        return Err(Error::TooManyVariables(l, MAX_EQUATION_SIZE));
    }
    Ok(())
}

fn big(r: &Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact `E` for fixed weights `w_1..w_l` against the rational set `ws`.
pub fn lemma1_e_exact(weights: &[Rational64], ws: &WeightSet) -> Result<BigRational> {
    let l = weights.len();
    if l < 2 {
        return Err(Error::InvalidConfiguration(
            "equation size must be at least 2".into(),
        ));
    }
    check_size(l)?;
    let exact = ws.exact().ok_or_else(|| {
        Error::InvalidConfiguration("exact evaluation needs a rational weight set".into())
    })?;
    let mut all = weights.to_vec();
    all.extend_from_slice(&exact.values);
    let (ints, _) = to_integers(&all)?;
    let (w, a) = ints.split_at(l);
    let sums = signed_sums(w);
    let total = sums.len() as u64;
    let zeros = sums.iter().filter(|&&s| s == 0).count() as u64;
    if zeros == total {
        return Err(Error::DegenerateEquation);
    }
    let mut acc = BigRational::zero();
    for (&ai, qi) in a.iter().zip(&exact.probs) {
        let hits = sums.iter().filter(|&&s| s.abs() == ai).count() as u64;
        acc += big(qi) * ratio(hits, total);
    }
    Ok(acc * ratio(total, 2 * (total - zeros)))
}

/// `E` in floating point, with equality judged to [`FLOAT_ZERO_TOL`] relative
/// to the largest weight.
pub fn lemma1_e(weights: &[f64], ws: &WeightSet) -> Result<f64> {
    let l = weights.len();
    if l < 2 {
        return Err(Error::InvalidConfiguration(
            "equation size must be at least 2".into(),
        ));
    }
    check_size(l)?;
    let tol = FLOAT_ZERO_TOL
        * weights
            .iter()
            .chain(ws.values())
            .fold(0.0f64, |m, v| m.max(v.abs()));
    let sums = float_sums(weights);
    let total = sums.len() as f64;
    let zeros = sums.iter().filter(|s| s.abs() <= tol).count() as f64;
    if zeros == total {
        return Err(Error::DegenerateEquation);
    }
    let acc: f64 = ws
        .values()
        .iter()
        .zip(ws.probs())
        .map(|(&ai, &qi)| {
            qi * sums.iter().filter(|s| (s.abs() - ai).abs() <= tol).count() as f64 / total
        })
        .sum();
    Ok(0.5 * acc / (1.0 - zeros / total))
}

fn float_sums(w: &[f64]) -> Vec<f64> {
    (0..1usize << w.len())
        .map(|x| {
            w.iter()
                .enumerate()
                .map(|(j, &v)| if x >> j & 1 == 1 { v } else { -v })
                .sum()
        })
        .collect()
}

/// Runs the recursion from `e_2 = ½·p(w_1 = w_2)` up to `e_{l_max}`, using the
/// first `j` weights for the step `e_j → e_{j+1}`.
///
/// Exact arithmetic is used when `ws` and the weights are all rational; pass
/// `exact_weights` to enable it.
pub fn e_recursion(
    ws: &WeightSet,
    weights: &[f64],
    exact_weights: Option<&[Rational64]>,
    l_max: usize,
) -> Result<UniqueSolutionReport> {
    if l_max < 2 {
        return Err(Error::InvalidConfiguration(
            "l_max must be at least 2".into(),
        ));
    }
    if weights.len() < l_max - 1 || weights.len() < 2 {
        return Err(Error::LengthMismatch {
            expected: l_max.max(2) - 1,
            actual: weights.len(),
        });
    }
    if let Some(ex) = exact_weights {
        if ex.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: weights.len(),
                actual: ex.len(),
            });
        }
    }
    let exact = exact_weights.filter(|_| ws.exact().is_some());
    let mut e_trace = Vec::with_capacity(l_max - 1);
    let mut big_e_trace = Vec::with_capacity(l_max - 2);
    match exact {
        Some(ex) => {
            let half = ratio(1, 2);
            let mut e = if ex[0] == ex[1] {
                half
            } else {
                BigRational::zero()
            };
            e_trace.push(e.to_f64().unwrap_or(f64::NAN));
            for j in 2..l_max {
                let big_e = lemma1_e_exact(&ex[..j], ws)?;
                big_e_trace.push(big_e.to_f64().unwrap_or(f64::NAN));
                e = BigRational::one() - (BigRational::one() - big_e) * (BigRational::one() - e);
                e_trace.push(e.to_f64().unwrap_or(f64::NAN));
            }
            Ok(UniqueSolutionReport {
                l: l_max,
                e_l: *e_trace.last().unwrap(),
                e_trace,
                big_e_trace,
                e_l_exact: Some(e),
            })
        }
        None => {
            let tol = FLOAT_ZERO_TOL * weights[0].abs().max(weights[1].abs());
            let mut e = if (weights[0] - weights[1]).abs() <= tol {
                0.5
            } else {
                0.0
            };
            e_trace.push(e);
            for j in 2..l_max {
                let big_e = lemma1_e(&weights[..j], ws)?;
                big_e_trace.push(big_e);
                e = 1.0 - (1.0 - big_e) * (1.0 - e);
                e_trace.push(e);
            }
            Ok(UniqueSolutionReport {
                l: l_max,
                e_l: e,
                e_trace,
                big_e_trace,
                e_l_exact: None,
            })
        }
    }
}

/// Number of `b ∈ {−1, +1}^l` with `Σ b_j w_j = u`, in exact arithmetic.
pub fn unique_solution_oracle_exact(weights: &[Rational64], u: Rational64) -> Result<usize> {
    check_size(weights.len())?;
    let mut all = weights.to_vec();
    all.push(u);
    let (ints, _) = to_integers(&all)?;
    let (w, target) = ints.split_at(weights.len());
    Ok(signed_sums(w)
        .into_iter()
        .filter(|&s| s == target[0])
        .count())
}

/// Number of `b ∈ {−1, +1}^l` with `Σ b_j w_j = u`, equality judged to
/// [`FLOAT_ZERO_TOL`] relative to the largest weight.
pub fn unique_solution_oracle(weights: &[f64], u: f64) -> Result<usize> {
    check_size(weights.len())?;
    let tol = FLOAT_ZERO_TOL * weights.iter().fold(u.abs(), |m, v| m.max(v.abs()));
    Ok(float_sums(weights)
        .into_iter()
        .filter(|s| (s - u).abs() <= tol)
        .count())
}

/// Exact fraction of sign vectors whose sum `u` is reached by no other sign
/// vector.
pub fn unique_fraction(weights: &[Rational64]) -> Result<BigRational> {
    check_size(weights.len())?;
    let (ints, _) = to_integers(weights)?;
    let mut sums = signed_sums(&ints);
    let total = sums.len() as u64;
    sums.sort_unstable();
    let mut unique = 0u64;
    let mut i = 0;
    while i < sums.len() {
        let j = sums[i..]
            .iter()
            .position(|&s| s != sums[i])
            .map_or(sums.len(), |p| i + p);
        if j - i == 1 {
            unique += 1;
        }
        i = j;
    }
    Ok(ratio(unique, total))
}
