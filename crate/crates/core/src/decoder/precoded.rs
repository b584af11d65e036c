//! AFC belief propagation followed by LDPC decoding of the precode.

use super::bp::{BpDecoder, DecoderConfig};
use crate::error::{Error, Result};
use crate::graph::FactorGraph;
use crate::precoder::LdpcCode;

/// Precode attached to a decode call.
#[derive(Debug, Clone, Copy)]
pub struct PrecodeContext<'a> {
    pub code: &'a LdpcCode,
    /// Sum-product iterations per LDPC pass.
    pub max_iters: usize,
    /// Extra AFC/LDPC rounds after the first pass; each feeds the LDPC
    /// extrinsic back to the AFC decoder as priors. Zero means a single
    /// pipelined pass.
    pub joint_rounds: usize,
}

impl<'a> PrecodeContext<'a> {
    pub fn new(code: &'a LdpcCode) -> Self {
        PrecodeContext {
            code,
            max_iters: 50,
            joint_rounds: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecodedOutcome {
    pub message: Vec<u8>,
    pub converged: bool,
    pub afc_iterations: usize,
    pub ldpc_iterations: usize,
}

/// Decodes the AFC layer over the precode codeword, then the LDPC layer,
/// returning the `k_msg` message bits.
pub fn decode_with_precode(
    graph: &FactorGraph,
    u: &[f64],
    sigma2: f64,
    cfg: &DecoderConfig,
    precode: &PrecodeContext<'_>,
) -> Result<PrecodedOutcome> {
    let code = precode.code;
    if graph.k() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            actual: graph.k(),
        });
    }
    let mut afc = BpDecoder::new(graph)?;
    let mut bits = vec![0u8; code.n()];
    let mut syndrome_ok = |llr: &[f64]| {
        for (b, &l) in bits.iter_mut().zip(llr) {
            *b = u8::from(l < 0.0);
        }
        llr.iter().all(|&l| l != 0.0) && code.is_codeword(&bits)
    };
    let stop: Option<&mut dyn FnMut(&[f64]) -> bool> = if cfg.stop_on_precode_valid {
        Some(&mut syndrome_ok)
    } else {
        None
    };
    let first = afc.run(u, sigma2, None, cfg, stop)?;
    let mut afc_iterations = first.iterations;
    let mut ldpc = code.decode(&first.posterior.llr, precode.max_iters);
    let mut ldpc_iterations = ldpc.iterations;
    let mut afc_extrinsic = first.extrinsic;

    for _ in 0..precode.joint_rounds {
        if ldpc.converged {
            break;
        }
        let prior: Vec<f64> = ldpc
            .posterior
            .iter()
            .zip(&afc_extrinsic)
            .map(|(p, a)| p - a)
            .collect();
        let mut bits = vec![0u8; code.n()];
        let mut syndrome_ok = |llr: &[f64]| {
            for (b, &l) in bits.iter_mut().zip(llr) {
                *b = u8::from(l < 0.0);
            }
            llr.iter().all(|&l| l != 0.0) && code.is_codeword(&bits)
        };
        let stop: Option<&mut dyn FnMut(&[f64]) -> bool> = if cfg.stop_on_precode_valid {
            Some(&mut syndrome_ok)
        } else {
            None
        };
        let out = afc.run(u, sigma2, Some(&prior), cfg, stop)?;
        afc_iterations += out.iterations;
        afc_extrinsic = out.extrinsic;
        ldpc = code.decode(&afc_extrinsic, precode.max_iters);
        ldpc_iterations += ldpc.iterations;
    }
    Ok(PrecodedOutcome {
        message: ldpc.message,
        converged: ldpc.converged,
        afc_iterations,
        ldpc_iterations,
    })
}
