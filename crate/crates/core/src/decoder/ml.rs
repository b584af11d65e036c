//! Exhaustive maximum-likelihood decoding, `argmin_b ||u − G b||²`.

use crate::error::{Error, Result};
use crate::graph::FactorGraph;

/// Largest `k` accepted by [`ml_decode_bruteforce`].
pub const MAX_ML_VARIABLES: usize = 20;

/// Exact minimiser of the Euclidean distance over `b ∈ {±1}^k`.
///
/// Candidates are scanned in lexicographic order with `+1` before `−1`
/// (variable 0 most significant); the first minimiser wins ties.
pub fn ml_decode_bruteforce(graph: &FactorGraph, u: &[f64]) -> Result<Vec<f64>> {
    let k = graph.k();
    if k > MAX_ML_VARIABLES {
        return Err(Error::TooManyVariables(k, MAX_ML_VARIABLES));
    }
    if u.len() != graph.n_rows() {
        return Err(Error::LengthMismatch {
            expected: graph.n_rows(),
            actual: u.len(),
        });
    }
    let mut best = f64::INFINITY;
    let mut best_x = 0usize;
    let mut b = vec![0.0; k];
    for x in 0..1usize << k {
        for (j, bj) in b.iter_mut().enumerate() {
            *bj = if x >> (k - 1 - j) & 1 == 1 { -1.0 } else { 1.0 };
        }
        let mut dist = 0.0;
        for ((vars, weights), &ui) in graph.rows().zip(u) {
            let s: f64 = vars.iter().zip(weights).map(|(&v, &g)| g * b[v]).sum();
            dist += (ui - s) * (ui - s);
            if dist >= best {
                break;
            }
        }
        if dist < best {
            best = dist;
            best_x = x;
        }
    }
    Ok((0..k)
        .map(|j| {
            if best_x >> (k - 1 - j) & 1 == 1 {
                -1.0
            } else {
                1.0
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_row_two_variables() {
        let g = FactorGraph::from_rows(2, &[vec![(0, 0.5), (1, 1.0 / 3.0)]]).unwrap();
        assert_eq!(
            ml_decode_bruteforce(&g, &[5.0 / 6.0]).unwrap(),
            vec![1.0, 1.0]
        );
        assert_eq!(
            ml_decode_bruteforce(&g, &[0.5 - 1.0 / 3.0]).unwrap(),
            vec![1.0, -1.0]
        );
    }

    #[test]
    fn no_rows_ties_to_all_plus() {
        let g = FactorGraph::empty(5);
        assert_eq!(ml_decode_bruteforce(&g, &[]).unwrap(), vec![1.0; 5]);
    }

    #[test]
    fn refuses_large_k() {
        let g = FactorGraph::empty(MAX_ML_VARIABLES + 1);
        assert!(matches!(
            ml_decode_bruteforce(&g, &[]),
            Err(Error::TooManyVariables(..))
        ));
    }
}
