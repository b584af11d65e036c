//! The non-vanishing condition `Σ (−1)^{n_i} I_i w_i ≠ 0`.
//!
//! A weight selection passes when no non-trivial signed subset of its
//! weights sums to zero. With rational weights the check is exact; otherwise
//! sums within [`FLOAT_ZERO_TOL`] (relative to the largest weight) count as
//! zero.

use num_traits::ToPrimitive;

use super::exact::to_integers;
use crate::error::{Error, Result};
use crate::graph::WeightAssignment;
use crate::weights::WeightSet;

pub const FLOAT_ZERO_TOL: f64 = 1e-12;

/// Largest number of coefficient vectors the exhaustive check will visit.
pub const ENUMERATION_CAP: u128 = 100_000_000;

/// A zero signed combination: `Σ coeffs[i] · weights[i] = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub weights: Vec<f64>,
    pub coeffs: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub holds: bool,
    pub witness: Option<Witness>,
    /// Coefficient vectors examined.
    pub cases: u128,
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Visits every vector in `{−1, 0, +1}^n` whose support size lies in
/// `1..=max_support`, largest support first and, within a support size, with
/// `+1` preferred over `−1` in lexicographic order. Stops when `visit`
/// returns `true`.
fn for_each_coefficients(
    n: usize,
    max_support: usize,
    mut visit: impl FnMut(&[i8]) -> bool,
) -> u128 {
    let mut coeffs = vec![0i8; n];
    let mut visited = 0u128;
    for support in (1..=max_support.min(n)).rev() {
        // Subsets of size `support` in lexicographic order.
        let mut idx: Vec<usize> = (0..support).collect();
        loop {
            for signs in 0..1u32 << support {
                coeffs.iter_mut().for_each(|c| *c = 0);
                for (t, &i) in idx.iter().enumerate() {
                    coeffs[i] = if signs >> (support - 1 - t) & 1 == 1 {
                        -1
                    } else {
                        1
                    };
                }
                visited += 1;
                if visit(&coeffs) {
                    return visited;
                }
            }
            let Some(p) = (0..support).rev().find(|&p| idx[p] != p + n - support) else {
                break;
            };
            idx[p] += 1;
            for q in p + 1..support {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    visited
}

fn search(values: &[f64], exact: Option<Vec<i128>>, max_support: usize) -> ConditionReport {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut witness = None;
    let cases = for_each_coefficients(values.len(), max_support, |c| {
        let zero = match &exact {
            Some(ints) => {
                c.iter()
                    .zip(ints)
                    .map(|(&c, &n)| c as i128 * n)
                    .sum::<i128>()
                    == 0
            }
            None => {
                c.iter()
                    .zip(values)
                    .map(|(&c, &w)| c as f64 * w)
                    .sum::<f64>()
                    .abs()
                    <= FLOAT_ZERO_TOL * scale
            }
        };
        if zero {
            let used: Vec<usize> = (0..c.len()).filter(|&i| c[i] != 0).collect();
            witness = Some(Witness {
                weights: used.iter().map(|&i| values[i]).collect(),
                coeffs: used.iter().map(|&i| c[i]).collect(),
            });
        }
        zero
    });
    ConditionReport {
        holds: witness.is_none(),
        witness,
        cases,
    }
}

/// Checks every signed combination of up to `d` weights that one coded symbol
/// can carry under `assignment`.
///
/// With replacement and `d ≥ 2` a weight may appear twice, so `w − w = 0`
/// is always a witness.
pub fn check_nonzero_condition(
    ws: &WeightSet,
    d: usize,
    assignment: WeightAssignment,
) -> Result<ConditionReport> {
    if d == 0 {
        return Err(Error::InvalidConfiguration(
            "degree must be at least 1".into(),
        ));
    }
    let f = ws.len();
    match assignment {
        WeightAssignment::WithReplacement if d >= 2 => {
            let w = ws.values()[0];
            return Ok(ConditionReport {
                holds: false,
                witness: Some(Witness {
                    weights: vec![w, w],
                    coeffs: vec![1, -1],
                }),
                cases: 1,
            });
        }
        WeightAssignment::PermutationOfSet if d != f => {
            return Err(Error::InvalidConfiguration(format!(
                "permutation assignment needs d = f = {f}"
            )));
        }
        WeightAssignment::WithoutReplacement if d > f => {
            return Err(Error::InvalidConfiguration(format!(
                "d = {d} exceeds the {f} available weights"
            )));
        }
        _ => {}
    }
    let max_support = d.min(f);
    let total: u128 = (1..=max_support as u128)
        .map(|s| binomial(f as u128, s) << s)
        .sum();
    if total > ENUMERATION_CAP {
        return Err(Error::EnumerationCap(total, ENUMERATION_CAP));
    }
    let exact = match ws.exact() {
        Some(e) => Some(to_integers(&e.values)?.0),
        None => None,
    };
    Ok(search(ws.values(), exact, max_support))
}

/// Checks a fixed signed row (a multiset of weights, e.g. the seamless
/// template) against every non-trivial coefficient vector.
pub fn check_signed_row(row: &[f64]) -> ConditionReport {
    // Small-integer rows are checked exactly.
    let exact = row
        .iter()
        .all(|w| w.fract() == 0.0 && w.abs() < 1e15)
        .then(|| {
            row.iter()
                .map(|w| w.to_i64().unwrap_or(0) as i128)
                .collect()
        });
    search(row, exact, row.len())
}
