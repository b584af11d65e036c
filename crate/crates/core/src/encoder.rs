//! Linear real-valued encoder `c = G b`.

use crate::error::{Error, Result};
use crate::graph::FactorGraph;
use crate::weights::{DegreeDistribution, WeightSet};

/// Maps bit 0 to +1 and bit 1 to −1.
pub fn bits_to_bpsk(bits: &[u8]) -> Vec<f64> {
    bits.iter()
        .map(|&b| if b == 0 { 1.0 } else { -1.0 })
        .collect()
}

pub fn bpsk_to_bits(bpsk: &[f64]) -> Vec<u8> {
    bpsk.iter().map(|&s| u8::from(s < 0.0)).collect()
}

/// `c[i] = Σ_j g_ij b_j`, summed in row order.
pub fn encode(graph: &FactorGraph, input: &[f64]) -> Result<Vec<f64>> {
    if input.len() != graph.k() {
        return Err(Error::LengthMismatch {
            expected: graph.k(),
            actual: input.len(),
        });
    }
    Ok(graph
        .rows()
        .map(|(vars, weights)| vars.iter().zip(weights).map(|(&v, &g)| g * input[v]).sum())
        .collect())
}

/// Factor `1 / sqrt(μ σ_s²)` that brings the average coded-symbol power to 1.
pub fn power_scale(dist: &DegreeDistribution, ws: &WeightSet) -> f64 {
    1.0 / (dist.mu() * ws.second_moment()).sqrt()
}

pub fn normalize_power(coded: &[f64], dist: &DegreeDistribution, ws: &WeightSet) -> Vec<f64> {
    let s = power_scale(dist, ws);
    coded.iter().map(|c| c * s).collect()
}

/// One transmitted block at each stage of the link.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolBlock {
    pub message_bits: Vec<u8>,
    pub bpsk: Vec<f64>,
    pub coded: Vec<f64>,
    pub observed: Vec<f64>,
}
