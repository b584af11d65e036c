//! Tanh-rule sum-product decoding over the parity-check graph.

use super::LdpcCode;
use crate::decoder::LlrVector;

/// Input LLRs are clamped to this magnitude, which also absorbs infinities.
const INPUT_CLAMP: f64 = 60.0;
/// Largest `|tanh(x/2)|` fed to `atanh`.
const TANH_LIMIT: f64 = 1.0 - 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct LdpcDecodeOutput {
    /// Hard-decided systematic message bits.
    pub message: Vec<u8>,
    pub codeword: Vec<u8>,
    /// Syndrome satisfied with no undecided (zero-LLR) bit.
    pub converged: bool,
    pub iterations: usize,
    /// Posterior LLR per code bit.
    pub posterior: Vec<f64>,
}

fn hard(llr: &[f64]) -> Vec<u8> {
    llr.iter().map(|&l| u8::from(l < 0.0)).collect()
}

impl LdpcCode {
    fn settled(&self, posterior: &[f64], bits: &[u8]) -> bool {
        posterior.iter().all(|&l| l != 0.0) && self.is_codeword(bits)
    }

    /// Sum-product decoding for at most `max_iters` iterations.
    ///
    /// LLRs follow `ln p(bit = 0) / p(bit = 1)`. Decoding stops as soon as the
    /// hard decisions form a codeword with no zero-LLR bit.
    pub fn decode(&self, llr: &[f64], max_iters: usize) -> LdpcDecodeOutput {
        assert_eq!(llr.len(), self.n, "LLR length must equal the code length");
        let channel: Vec<f64> = llr
            .iter()
            .map(|l| l.clamp(-INPUT_CLAMP, INPUT_CLAMP))
            .collect();
        let mut posterior = channel.clone();
        let mut bits = hard(&posterior);
        let finish = |bits: Vec<u8>, posterior: Vec<f64>, converged, iterations| LdpcDecodeOutput {
            message: bits[..self.k_msg].to_vec(),
            codeword: bits,
            converged,
            iterations,
            posterior,
        };
        if self.settled(&posterior, &bits) {
            return finish(bits, posterior, true, 0);
        }

        // Edge storage follows check-row order.
        let mut offsets = Vec::with_capacity(self.checks.len() + 1);
        offsets.push(0);
        for row in &self.checks {
            offsets.push(offsets.last().unwrap() + row.len());
        }
        let n_edges = *offsets.last().unwrap();
        let mut c2v = vec![0.0f64; n_edges];
        let mut t = vec![0.0f64; n_edges];
        let mut suffix = Vec::new();

        for iter in 1..=max_iters {
            for (ci, row) in self.checks.iter().enumerate() {
                let base = offsets[ci];
                let d = row.len();
                for (j, &v) in row.iter().enumerate() {
                    t[base + j] = (0.5 * (posterior[v] - c2v[base + j])).tanh();
                }
                suffix.clear();
                suffix.resize(d + 1, 1.0);
                for j in (0..d).rev() {
                    suffix[j] = suffix[j + 1] * t[base + j];
                }
                let mut prefix = 1.0;
                for j in 0..d {
                    let p = (prefix * suffix[j + 1]).clamp(-TANH_LIMIT, TANH_LIMIT);
                    c2v[base + j] = 2.0 * p.atanh();
                    prefix *= t[base + j];
                }
            }
            posterior.copy_from_slice(&channel);
            for (ci, row) in self.checks.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    posterior[v] += c2v[offsets[ci] + j];
                }
            }
            bits = hard(&posterior);
            if self.settled(&posterior, &bits) {
                return finish(bits, posterior, true, iter);
            }
        }
        finish(bits, posterior, false, max_iters)
    }
}

/// Returns the hard-decided message bits and whether the decoder converged.
pub fn ldpc_decode(code: &LdpcCode, llr: &LlrVector, max_iters: usize) -> (Vec<u8>, bool) {
    let out = code.decode(&llr.llr, max_iters);
    (out.message, out.converged)
}
