//! Flooding belief propagation over the weighted factor graph.
//!
//! Check nodes marginalise exactly: for a row of degree `d` every one of the
//! `2^d` sign configurations of its neighbours is scored with the Gaussian
//! log-likelihood of the observation plus the incoming priors, and the
//! per-edge log-ratios are read off with a single log-sum-exp pass.
//! Configurations are visited in complementary pairs `(c, !c)`, so negating
//! the observations and priors negates every output bit for bit.

use crate::error::{Error, Result};
use crate::graph::FactorGraph;

/// Largest row degree the enumeration kernel accepts.
pub const MAX_ENUM_DEGREE: usize = 20;

/// Magnitude bound on every message and output LLR.
pub const LLR_CLAMP: f64 = 40.0;

/// Per-variable log-likelihood ratios `ln p(b=+1|·) / p(b=−1|·)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector {
    pub llr: Vec<f64>,
}

impl LlrVector {
    pub fn new(llr: Vec<f64>) -> Self {
        LlrVector { llr }
    }

    pub fn len(&self) -> usize {
        self.llr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llr.is_empty()
    }

    /// Hard decisions in `{−1, +1}`; a zero LLR decodes to `+1`.
    pub fn hard(&self) -> Vec<f64> {
        self.llr
            .iter()
            .map(|&l| if l >= 0.0 { 1.0 } else { -1.0 })
            .collect()
    }

    /// Hard decisions as bits (`+1 → 0`).
    pub fn hard_bits(&self) -> Vec<u8> {
        self.llr.iter().map(|&l| u8::from(l < 0.0)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderConfig {
    pub max_iters: usize,
    /// Weight of the previous check message in the update, in `[0, 1)`.
    pub damping: f64,
    /// Stop once no posterior LLR moves by more than this.
    pub convergence_eps: f64,
    /// Stop as soon as the precode syndrome is satisfied.
    pub stop_on_precode_valid: bool,
    /// Stop after this many consecutive iterations without a hard-decision change.
    pub stable_iters: usize,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            max_iters: 60,
            damping: 0.0,
            convergence_eps: 1e-9,
            stop_on_precode_valid: true,
            stable_iters: 2,
        }
    }
}

fn clamp_llr(x: f64) -> f64 {
    x.clamp(-LLR_CLAMP, LLR_CLAMP)
}

/// Reusable buffers for the enumeration kernel.
#[derive(Debug, Default, Clone)]
pub struct CheckKernel {
    lo_sum: Vec<f64>,
    hi_sum: Vec<f64>,
    lo_prior: Vec<f64>,
    hi_prior: Vec<f64>,
    score: Vec<f64>,
    pos: Vec<f64>,
    neg: Vec<f64>,
    half: Vec<f64>,
}

fn half_tables(weights: &[f64], half_llr: &[f64], sum: &mut Vec<f64>, prior: &mut Vec<f64>) {
    let n = 1usize << weights.len();
    sum.clear();
    prior.clear();
    for x in 0..n {
        let mut s = 0.0;
        let mut p = 0.0;
        for (j, (&w, &l)) in weights.iter().zip(half_llr).enumerate() {
            if x >> j & 1 == 1 {
                s += w;
                p += l;
            } else {
                s -= w;
                p -= l;
            }
        }
        sum.push(s);
        prior.push(p);
    }
}

impl CheckKernel {
    /// Writes the extrinsic LLR for every edge of one check into `out`.
    ///
    /// `incoming[j]` is the variable-to-check LLR on edge `j`; `weights[j]`
    /// the edge weight; `u` the observation; `sigma2` the noise variance.
    pub fn run(
        &mut self,
        weights: &[f64],
        u: f64,
        sigma2: f64,
        incoming: &[f64],
        out: &mut [f64],
    ) -> Result<()> {
        let d = weights.len();
        if d > MAX_ENUM_DEGREE {
            return Err(Error::UnsupportedDegree {
                degree: d,
                bound: MAX_ENUM_DEGREE,
            });
        }
        if incoming.len() != d || out.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                actual: incoming.len().min(out.len()),
            });
        }
        if d == 0 {
            return Ok(());
        }
        let h = d / 2;
        self.half.clear();
        self.half.extend(incoming.iter().map(|l| 0.5 * l));
        half_tables(
            &weights[..h],
            &self.half[..h],
            &mut self.lo_sum,
            &mut self.lo_prior,
        );
        half_tables(
            &weights[h..],
            &self.half[h..],
            &mut self.hi_sum,
            &mut self.hi_prior,
        );

        let n = 1usize << d;
        let lo_mask = (1usize << h) - 1;
        let inv = 0.5 / sigma2;
        self.score.clear();
        let mut max = f64::NEG_INFINITY;
        for c in 0..n {
            let (x, y) = (c & lo_mask, c >> h);
            let r = u - (self.lo_sum[x] + self.hi_sum[y]);
            let s = (self.lo_prior[x] + self.hi_prior[y]) - r * r * inv;
            max = max.max(s);
            self.score.push(s);
        }

        self.pos.clear();
        self.pos.resize(d, 0.0);
        self.neg.clear();
        self.neg.resize(d, 0.0);
        let mask = n - 1;
        for p in 0..n / 2 {
            let q = !p & mask;
            let ep = (self.score[p] - max).exp();
            let eq = (self.score[q] - max).exp();
            for j in 0..d {
                let set = p >> j & 1 == 1;
                self.pos[j] += if set { ep } else { eq };
                self.neg[j] += if set { eq } else { ep };
            }
        }
        for j in 0..d {
            out[j] = clamp_llr((self.pos[j].ln() - self.neg[j].ln()) - incoming[j]);
        }
        Ok(())
    }
}

/// Extrinsic check-to-variable LLRs for one row, by exact enumeration.
pub fn check_to_var_messages(
    weights: &[f64],
    u: f64,
    sigma2: f64,
    incoming: &[f64],
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; weights.len()];
    CheckKernel::default().run(weights, u, sigma2, incoming, &mut out)?;
    Ok(out)
}

/// Result of one [`BpDecoder::run`].
#[derive(Debug, Clone, PartialEq)]
pub struct BpOutcome {
    /// Posterior LLRs (prior plus all check messages).
    pub posterior: LlrVector,
    /// Check contribution only, i.e. posterior minus prior.
    pub extrinsic: Vec<f64>,
    pub iterations: usize,
    pub stopped_early: bool,
}

/// Message state for one graph; [`BpDecoder::run`] can be called repeatedly
/// and continues from the current messages.
#[derive(Debug, Clone)]
pub struct BpDecoder<'g> {
    graph: &'g FactorGraph,
    var_start: Vec<usize>,
    var_edges: Vec<usize>,
    c2v: Vec<f64>,
    v2c: Vec<f64>,
    kernel: CheckKernel,
}

impl<'g> BpDecoder<'g> {
    pub fn new(graph: &'g FactorGraph) -> Result<Self> {
        let max_d = graph.max_row_degree();
        if max_d > MAX_ENUM_DEGREE {
            return Err(Error::UnsupportedDegree {
                degree: max_d,
                bound: MAX_ENUM_DEGREE,
            });
        }
        let k = graph.k();
        let mut var_start = vec![0usize; k + 1];
        for &v in graph.edge_vars() {
            var_start[v + 1] += 1;
        }
        for v in 0..k {
            var_start[v + 1] += var_start[v];
        }
        let mut fill = var_start.clone();
        let mut var_edges = vec![0usize; graph.n_edges()];
        for (e, &v) in graph.edge_vars().iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        let m = graph.n_edges();
        Ok(BpDecoder {
            graph,
            var_start,
            var_edges,
            c2v: vec![0.0; m],
            v2c: vec![0.0; m],
            kernel: CheckKernel::default(),
        })
    }

    pub fn reset(&mut self) {
        self.c2v.iter_mut().for_each(|m| *m = 0.0);
    }

    fn posterior_into(&self, prior: &[f64], out: &mut [f64]) {
        for v in 0..self.graph.k() {
            let mut t = prior[v];
            for &e in &self.var_edges[self.var_start[v]..self.var_start[v + 1]] {
                t += self.c2v[e];
            }
            out[v] = t;
        }
    }

    /// Runs up to `cfg.max_iters` flooding iterations.
    ///
    /// `prior` holds per-variable prior LLRs (zeros when `None`). `stop` is
    /// called with the posterior after every iteration; returning `true` ends
    /// decoding.
    pub fn run(
        &mut self,
        u: &[f64],
        sigma2: f64,
        prior: Option<&[f64]>,
        cfg: &DecoderConfig,
        mut stop: Option<&mut dyn FnMut(&[f64]) -> bool>,
    ) -> Result<BpOutcome> {
        let g = self.graph;
        let k = g.k();
        if u.len() != g.n_rows() {
            return Err(Error::LengthMismatch {
                expected: g.n_rows(),
                actual: u.len(),
            });
        }
        if let Some(i) = u.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFiniteObservation(i));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidConfiguration(format!(
                "noise variance {sigma2} must be positive"
            )));
        }
        if let Some(p) = prior {
            if p.len() != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    actual: p.len(),
                });
            }
        }
        let zeros;
        let prior = match prior {
            Some(p) => p,
            None => {
                zeros = vec![0.0; k];
                &zeros
            }
        };

        let mut posterior = vec![0.0; k];
        self.posterior_into(prior, &mut posterior);
        let mut hard: Vec<bool> = posterior.iter().map(|&l| l >= 0.0).collect();
        let mut stable = 0usize;
        let mut iterations = 0usize;
        let mut stopped_early = false;
        let mut out = vec![0.0; g.max_row_degree()];

        while iterations < cfg.max_iters {
            iterations += 1;
            for v in 0..k {
                for &e in &self.var_edges[self.var_start[v]..self.var_start[v + 1]] {
                    self.v2c[e] = clamp_llr(posterior[v] - self.c2v[e]);
                }
            }
            for i in 0..g.n_rows() {
                let r = g.row_range(i);
                let d = r.len();
                self.kernel.run(
                    &g.edge_weights()[r.clone()],
                    u[i],
                    sigma2,
                    &self.v2c[r.clone()],
                    &mut out[..d],
                )?;
                if cfg.damping > 0.0 {
                    for (m, o) in self.c2v[r].iter_mut().zip(&out[..d]) {
                        *m = cfg.damping * *m + (1.0 - cfg.damping) * o;
                    }
                } else {
                    self.c2v[r].copy_from_slice(&out[..d]);
                }
            }

            let previous = std::mem::replace(&mut posterior, vec![0.0; k]);
            self.posterior_into(prior, &mut posterior);
            let delta = posterior
                .iter()
                .zip(&previous)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let mut changed = false;
            for (h, &l) in hard.iter_mut().zip(&posterior) {
                let nh = l >= 0.0;
                changed |= nh != *h;
                *h = nh;
            }
            stable = if changed { 0 } else { stable + 1 };
            if let Some(f) = stop.as_mut() {
                if f(&posterior) {
                    stopped_early = true;
                    break;
                }
            }
            if stable >= cfg.stable_iters || delta <= cfg.convergence_eps {
                stopped_early = iterations < cfg.max_iters;
                break;
            }
        }
        let extrinsic = posterior.iter().zip(prior).map(|(p, q)| p - q).collect();
        Ok(BpOutcome {
            posterior: LlrVector::new(posterior),
            extrinsic,
            iterations,
            stopped_early,
        })
    }
}

/// Decodes `u` from scratch with zero priors.
pub fn bp_decode(
    graph: &FactorGraph,
    u: &[f64],
    sigma2: f64,
    cfg: &DecoderConfig,
) -> Result<LlrVector> {
    Ok(BpDecoder::new(graph)?
        .run(u, sigma2, None, cfg, None)?
        .posterior)
}
