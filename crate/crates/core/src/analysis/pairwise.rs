use super::q_function;
use crate::error::{Error, Result};
use crate::graph::FactorGraph;

/// Probability that the competitor differing from `b` in `flip_set` is closer
/// to the observation than `b` itself:
/// `Q( (1/σ) · sqrt( Σ_i (Σ_{j ∈ flip} b_j g_ij)² ) )`.
pub fn pairwise_error_prob(
    graph: &FactorGraph,
    b: &[f64],
    flip_set: &[usize],
    sigma: f64,
) -> Result<f64> {
    if b.len() != graph.k() {
        return Err(Error::LengthMismatch {
            expected: graph.k(),
            actual: b.len(),
        });
    }
    if flip_set.is_empty() {
        return Err(Error::InvalidConfiguration("flip set is empty".into()));
    }
    let mut flipped = vec![false; graph.k()];
    for &j in flip_set {
        if j >= graph.k() {
            return Err(Error::InvalidConfiguration(format!(
                "flip index {j} out of range"
            )));
        }
        flipped[j] = true;
    }
    let energy: f64 = graph
        .rows()
        .map(|(vars, weights)| {
            let s: f64 = vars
                .iter()
                .zip(weights)
                .filter(|(v, _)| flipped[**v])
                .map(|(&v, &g)| g * b[v])
                .sum();
            s * s
        })
        .sum();
    Ok(q_function(energy.sqrt() / sigma))
}
