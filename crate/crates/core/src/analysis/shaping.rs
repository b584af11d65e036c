//! Bin-wise comparison of the coded-symbol law against the standard normal.
//!
//! The sum `Σ b_j w_j` is standardised by `sqrt(d·σ_s²)` and binned on
//! `[(i−1)δ, iδ)` for `i = 1, 2, ...` while the Gaussian bin mass is at least
//! [`MIN_BIN_MASS`]. A bin passes when `|p̂ − q| ≤ √ε + 3·sqrt(q(1−q)/n)`.

use std::io::Write;

use rand::{Rng, RngCore};
use rayon::prelude::*;

use super::qfunc::q_function;
use crate::error::{Error, Result};
use crate::graph::{draw_weights, WeightAssignment};
use crate::rng::{substream, Purpose};
use crate::weights::{DegreeDistribution, WeightSet};

pub const DEFAULT_SAMPLES: u64 = 10_000_000;

/// Bins with Gaussian mass below this are not evaluated.
pub const MIN_BIN_MASS: f64 = 1e-6;

const CHUNK: u64 = 1 << 18;

#[derive(Debug, Clone, PartialEq)]
pub struct ShapingBin {
    /// 1-based bin index.
    pub index: usize,
    pub p: f64,
    pub q: f64,
    pub gap2: f64,
    /// Largest `|p − q|` accepted for this bin.
    pub allowance: f64,
}

impl ShapingBin {
    pub fn passes(&self) -> bool {
        self.gap2.sqrt() <= self.allowance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapingReport {
    pub delta: f64,
    pub eps: f64,
    pub n_samples: u64,
    pub bins: Vec<ShapingBin>,
    /// Every bin within its allowance.
    pub satisfied: bool,
    /// Every bin with `gap² ≤ ε` before the sampling allowance.
    pub within_eps: bool,
}

impl ShapingReport {
    /// Writes `bin,p,q,gap2,allowance,pass` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["bin", "p", "q", "gap2", "allowance", "pass"])?;
        for b in &self.bins {
            w.write_record([
                b.index.to_string(),
                format!("{:e}", b.p),
                format!("{:e}", b.q),
                format!("{:e}", b.gap2),
                format!("{:e}", b.allowance),
                b.passes().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Default encoder assignment for rows of degree `d`.
pub(crate) fn assignment_for(ws: &WeightSet, d: usize) -> WeightAssignment {
    let f = ws.len();
    if d == f {
        WeightAssignment::PermutationOfSet
    } else if d < f {
        WeightAssignment::WithoutReplacement
    } else {
        WeightAssignment::WithReplacement
    }
}

/// Monte Carlo check of `Σ b_j w_j` for `d` edge weights drawn i.i.d. from
/// `ws` with uniform signs. Deterministic in `seed`.
pub fn gaussian_fit_check(
    ws: &WeightSet,
    d: usize,
    delta: f64,
    eps: f64,
    n_samples: u64,
    seed: u64,
) -> Result<ShapingReport> {
    gaussian_fit_check_with(
        ws,
        d,
        WeightAssignment::WithReplacement,
        delta,
        eps,
        n_samples,
        seed,
    )
}

/// As [`gaussian_fit_check`], with the edge weights of a row drawn per
/// `assignment`.
pub fn gaussian_fit_check_with(
    ws: &WeightSet,
    d: usize,
    assignment: WeightAssignment,
    delta: f64,
    eps: f64,
    n_samples: u64,
    seed: u64,
) -> Result<ShapingReport> {
    if !(delta > 0.0 && eps > 0.0) {
        return Err(Error::InvalidConfiguration(
            "delta and eps must be positive".into(),
        ));
    }
    if d == 0 || n_samples == 0 {
        return Err(Error::InvalidConfiguration(
            "d and n_samples must be positive".into(),
        ));
    }
    DegreeDistribution::fixed(d)?;
    let f = ws.len();
    match assignment {
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
    let bin_mass = |i: usize| q_function(i as f64 * delta) - q_function((i + 1) as f64 * delta);
    let n_bins = (0..).take_while(|&i| bin_mass(i) >= MIN_BIN_MASS).count();
    let scale = 1.0 / (d as f64 * ws.second_moment()).sqrt();

    // Signed sums for every sign pattern when the weight multiset is fixed.
    let table: Option<Vec<f64>> = (assignment == WeightAssignment::PermutationOfSet && d <= 16)
        .then(|| {
            (0..1usize << d)
                .map(|x| {
                    ws.values()
                        .iter()
                        .enumerate()
                        .map(|(j, &a)| if x >> j & 1 == 1 { -a } else { a })
                        .sum::<f64>()
                        * scale
                })
                .collect()
        });

    let n_chunks = n_samples.div_ceil(CHUNK);
    let counts = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = substream(seed, Purpose::Analysis, c);
            let len = CHUNK.min(n_samples - c * CHUNK);
            let mut counts = vec![0u64; n_bins];
            let mut bump = |s: f64| {
                if s >= 0.0 {
                    let i = (s / delta) as usize;
                    if i < n_bins {
                        counts[i] += 1;
                    }
                }
            };
            match &table {
                Some(t) => {
                    let mask = (1u64 << d) - 1;
                    for _ in 0..len {
                        bump(t[(rng.next_u64() & mask) as usize]);
                    }
                }
                None => {
                    let mut w = Vec::with_capacity(d);
                    for _ in 0..len {
                        draw_weights(d, ws, assignment, &mut rng, &mut w);
                        let s: f64 = w
                            .iter()
                            .map(|&a| if rng.random::<bool>() { a } else { -a })
                            .sum();
                        bump(s * scale);
                    }
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; n_bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let n = n_samples as f64;
    let bins: Vec<ShapingBin> = (0..n_bins)
        .map(|i| {
            let q = bin_mass(i);
            let p = counts[i] as f64 / n;
            ShapingBin {
                index: i + 1,
                p,
                q,
                gap2: (p - q).powi(2),
                allowance: eps.sqrt() + 3.0 * (q * (1.0 - q) / n).sqrt(),
            }
        })
        .collect();
    let satisfied = bins.iter().all(ShapingBin::passes);
    let within_eps = bins.iter().all(|b| b.gap2 <= eps);
    Ok(ShapingReport {
        delta,
        eps,
        n_samples,
        bins,
        satisfied,
        within_eps,
    })
}
