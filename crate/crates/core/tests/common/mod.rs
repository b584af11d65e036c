#![allow(dead_code)]

use afc_core::channel::snr_to_sigma;
use afc_core::encoder::{encode, power_scale};
use afc_core::graph::FactorGraph;
use afc_core::weights::{DegreeDistribution, WeightSet};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

/// Noise variance seen by the decoder on unnormalised sums for a unit-power
/// channel at `snr_db` with degree-8 reciprocal-prime rows.
pub fn decoder_sigma2(snr_db: f64) -> f64 {
    let scale = power_scale(
        &DegreeDistribution::fixed(8).unwrap(),
        &WeightSet::reciprocal_primes(),
    );
    snr_to_sigma(snr_db) / (scale * scale)
}

pub fn random_bpsk<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    (0..k)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

pub fn observe<R: Rng>(g: &FactorGraph, b: &[f64], sigma2: f64, rng: &mut R) -> Vec<f64> {
    let s = sigma2.sqrt();
    encode(g, b)
        .unwrap()
        .into_iter()
        .map(|c| c + s * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Cycle-free graph: every row after the first touches exactly one variable
/// already covered, plus fresh ones; weights are distinct reciprocal primes.
pub fn tree_graph<R: Rng>(k: usize, rng: &mut R) -> FactorGraph {
    FactorGraph::from_rows(k, &tree_rows(k, rng)).unwrap()
}

/// [`tree_graph`] plus one single-variable row per variable, so the sign
/// vector is determined by the noiseless sums. Leaves keep it cycle-free.
pub fn observed_tree_graph<R: Rng>(k: usize, rng: &mut R) -> FactorGraph {
    let ws = WeightSet::reciprocal_primes();
    let mut rows = tree_rows(k, rng);
    for j in 0..k {
        rows.push(vec![(j, ws.values()[rng.random_range(0..ws.len())])]);
    }
    FactorGraph::from_rows(k, &rows).unwrap()
}

fn tree_rows<R: Rng>(k: usize, rng: &mut R) -> Vec<Vec<(usize, f64)>> {
    let ws = WeightSet::reciprocal_primes();
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    let mut covered: Vec<usize> = Vec::new();
    let mut next = 0;
    let mut rows = Vec::new();
    while next < k {
        let mut weights = ws.values().to_vec();
        weights.shuffle(rng);
        let mut vars = Vec::new();
        if let Some(&anchor) = covered.get(rng.random_range(0..covered.len().max(1))) {
            vars.push(anchor);
        }
        let fresh = rng.random_range(1..=7).min(k - next);
        vars.extend_from_slice(&order[next..next + fresh]);
        next += fresh;
        covered.extend_from_slice(&vars[vars.len() - fresh..]);
        rows.push(vars.into_iter().zip(weights).collect::<Vec<_>>());
    }
    rows
}

/// `ln P(b_j = +1 | u) − ln P(b_j = −1 | u)` by summing over all `2^k`
/// sign vectors.
pub fn exact_marginals(g: &FactorGraph, u: &[f64], sigma2: f64) -> Vec<f64> {
    let k = g.k();
    let mut logp = Vec::with_capacity(1 << k);
    let mut b = vec![0.0; k];
    for x in 0..1usize << k {
        for (j, bj) in b.iter_mut().enumerate() {
            *bj = if x >> j & 1 == 1 { -1.0 } else { 1.0 };
        }
        let c = encode(g, &b).unwrap();
        let d2: f64 = c.iter().zip(u).map(|(c, u)| (u - c) * (u - c)).sum();
        logp.push(-d2 / (2.0 * sigma2));
    }
    let max = logp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (0..k)
        .map(|j| {
            let (mut pos, mut neg) = (0.0, 0.0);
            for (x, &l) in logp.iter().enumerate() {
                let w = (l - max).exp();
                if x >> j & 1 == 1 {
                    neg += w;
                } else {
                    pos += w;
                }
            }
            pos.ln() - neg.ln()
        })
        .collect()
}
