//! Monte Carlo BER and throughput sweeps.

use rand::Rng as _;
use rayon::prelude::*;

use super::config::{ExperimentConfig, LOW_BER};
use crate::channel::{capacity_bits_per_cu, rate_bits_per_cu, transmit, ChannelParams};
use crate::decoder::{decode_with_precode, BpDecoder, DecoderConfig, PrecodeContext};
use crate::encoder::{bits_to_bpsk, encode, power_scale};
use crate::error::{Error, Result};
use crate::graph::{build_graph, EncoderPolicy};
use crate::precoder::{ldpc_generate, LdpcCode};
use crate::rng::{substream, substream2, Purpose};
use crate::weights::{DegreeDistribution, WeightSet};

/// Noise variance the decoder assumes on a noiseless channel.
pub const NOISELESS_SIGMA2: f64 = 1e-20;

/// Frames simulated between stopping checks.
const BATCH: u64 = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub n_symbols: usize,
    pub rate_bits_per_cu: f64,
    pub ber: f64,
    pub fer: f64,
    pub trials: u64,
    pub seed: u64,
    pub bit_errors: u64,
    pub avg_iterations: f64,
    /// BER below the low-BER threshold with fewer error events than wanted.
    pub low_confidence: bool,
    /// Throughput sweeps: whether the target BER was met.
    pub reached: bool,
    pub capacity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Variant name, or the scheme for throughput sweeps.
    pub label: String,
    pub points: Vec<SweepPoint>,
}

/// Everything fixed across the frames of one sweep point.
pub struct LinkSetup {
    pub k: usize,
    pub dist: DegreeDistribution,
    pub ws: WeightSet,
    pub policy: EncoderPolicy,
    pub code: Option<LdpcCode>,
    pub decoder: DecoderConfig,
    pub ldpc_iters: usize,
    pub joint_rounds: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FrameOutcome {
    pub bit_errors: u64,
    pub frame_error: bool,
    pub iterations: usize,
}

impl LinkSetup {
    /// Message bits per frame.
    pub fn info_bits(&self) -> usize {
        self.code.as_ref().map_or(self.k, LdpcCode::k_msg)
    }

    /// Simulates frame `trial` with `n_symbols` coded symbols. Graph, message
    /// and noise come from substreams keyed by `(seed, n_symbols, trial)`, so
    /// different variants and SNRs see the same draws.
    pub fn simulate_frame(
        &self,
        n_symbols: usize,
        channel: &ChannelParams,
        trial: u64,
    ) -> Result<FrameOutcome> {
        let point = n_symbols as u64;
        let graph = build_graph(
            self.k,
            n_symbols,
            &self.dist,
            &self.ws,
            self.policy,
            &mut substream2(self.seed, Purpose::Graph, point, trial),
        )?;
        let mut msg_rng = substream2(self.seed, Purpose::Message, point, trial);
        let message: Vec<u8> = (0..self.info_bits())
            .map(|_| msg_rng.random_range(0..2u8))
            .collect();
        let codeword = match &self.code {
            Some(code) => code.encode(&message)?,
            None => message.clone(),
        };
        let coded = encode(&graph, &bits_to_bpsk(&codeword))?;
        // Unit power on the channel; the decoder works on the unscaled sums.
        let scale = power_scale(&self.dist, &self.ws);
        let tx: Vec<f64> = coded.iter().map(|c| c * scale).collect();
        let rx = transmit(
            &tx,
            channel,
            &mut substream2(self.seed, Purpose::Noise, point, trial),
        );
        let u: Vec<f64> = rx.iter().map(|y| y / scale).collect();
        let sigma2 = if channel.noiseless {
            NOISELESS_SIGMA2
        } else {
            channel.sigma2 / (scale * scale)
        };

        let (decoded, iterations) = match &self.code {
            Some(code) => {
                let ctx = PrecodeContext {
                    code,
                    max_iters: self.ldpc_iters,
                    joint_rounds: self.joint_rounds,
                };
                let out = decode_with_precode(&graph, &u, sigma2, &self.decoder, &ctx)?;
                (out.message, out.afc_iterations)
            }
            None => {
                let out = BpDecoder::new(&graph)?.run(&u, sigma2, None, &self.decoder, None)?;
                (out.posterior.hard_bits(), out.iterations)
            }
        };
        let bit_errors = decoded.iter().zip(&message).filter(|(a, b)| a != b).count() as u64;
        Ok(FrameOutcome {
            bit_errors,
            frame_error: bit_errors > 0,
            iterations,
        })
    }
}

/// Tally over a run of frames.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PointTally {
    pub trials: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub iterations: u64,
}

impl PointTally {
    pub fn ber(&self, info_bits: usize) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.bit_errors as f64 / (self.trials as f64 * info_bits as f64)
    }

    fn add(&mut self, o: &FrameOutcome) {
        self.trials += 1;
        self.bit_errors += o.bit_errors;
        self.frame_errors += u64::from(o.frame_error);
        self.iterations += o.iterations as u64;
    }
}

/// Frame counts for one point.
#[derive(Debug, Clone, Copy)]
pub struct TrialPlan {
    pub trials: u64,
    pub max_trials: u64,
    pub min_error_events: u64,
    /// Stop once the BER over `max_trials` frames can no longer reach this.
    pub abort_above: Option<f64>,
}

/// Runs frames `0..trials`, then extends while the BER is below
/// [`LOW_BER`] with fewer than `min_error_events` errors, up to `max_trials`.
/// Frames run in parallel and are tallied in index order.
pub fn measure_point(
    setup: &LinkSetup,
    n_symbols: usize,
    channel: &ChannelParams,
    plan: &TrialPlan,
) -> Result<PointTally> {
    let info = setup.info_bits() as f64;
    let mut tally = PointTally::default();
    let abort_budget = plan.abort_above.map(|t| t * plan.max_trials as f64 * info);
    loop {
        let want = if tally.trials < plan.trials {
            plan.trials
        } else {
            let ber = tally.ber(setup.info_bits());
            if ber >= LOW_BER
                || tally.bit_errors >= plan.min_error_events
                || tally.trials >= plan.max_trials
            {
                break;
            }
            plan.max_trials
        };
        let end = (tally.trials + BATCH).min(want);
        let outcomes: Vec<FrameOutcome> = (tally.trials..end)
            .into_par_iter()
            .map(|t| setup.simulate_frame(n_symbols, channel, t))
            .collect::<Result<_>>()?;
        outcomes.iter().for_each(|o| tally.add(o));
        if abort_budget.is_some_and(|b| tally.bit_errors as f64 > b) {
            break;
        }
    }
    Ok(tally)
}

fn channel_for(cfg: &ExperimentConfig, snr_db: f64) -> ChannelParams {
    let ch = ChannelParams::with_convention(snr_db, cfg.convention());
    if cfg.noiseless {
        ch.noiseless()
    } else {
        ch
    }
}

fn precode_for(cfg: &ExperimentConfig) -> Result<LdpcCode> {
    ldpc_generate(
        cfg.block_len(),
        cfg.precode_rate,
        cfg.precode_var_degree,
        &mut substream(cfg.seed, Purpose::Precode, 0),
    )
}

fn setup_for(
    cfg: &ExperimentConfig,
    policy: EncoderPolicy,
    code: Option<LdpcCode>,
) -> Result<LinkSetup> {
    Ok(LinkSetup {
        k: cfg.block_len(),
        dist: cfg.degree_distribution()?,
        ws: cfg.weights()?,
        policy,
        code,
        decoder: cfg.decoder_config(),
        ldpc_iters: cfg.decoder.ldpc_iters,
        joint_rounds: cfg.decoder.joint_rounds,
        seed: cfg.seed,
    })
}

fn point_record(
    cfg: &ExperimentConfig,
    setup: &LinkSetup,
    channel: &ChannelParams,
    n_symbols: usize,
    tally: &PointTally,
    reached: bool,
) -> SweepPoint {
    let ber = tally.ber(setup.info_bits());
    SweepPoint {
        snr_db: channel.snr_db,
        n_symbols,
        rate_bits_per_cu: rate_bits_per_cu(setup.info_bits(), n_symbols),
        ber,
        fer: tally.frame_errors as f64 / tally.trials.max(1) as f64,
        trials: tally.trials,
        seed: cfg.seed,
        bit_errors: tally.bit_errors,
        avg_iterations: tally.iterations as f64 / tally.trials.max(1) as f64,
        low_confidence: ber < LOW_BER && tally.bit_errors < cfg.min_error_events,
        reached,
        capacity: capacity_bits_per_cu(channel.sigma2),
    }
}

fn check_output(cfg: &ExperimentConfig) -> Result<()> {
    for path in cfg.out.iter().chain(cfg.gnuplot.iter()) {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
        if dir.is_some_and(|d| !d.is_dir()) {
            return Err(Error::Config(format!(
                "output directory for {} does not exist",
                path.display()
            )));
        }
    }
    Ok(())
}

/// BER at every grid point and SNR for each configured variant. Precoded
/// and uncoded variants share the AFC block length, so a grid point has the
/// same `N` for all variants while each reports its own rate.
pub fn run_ber_sweep(cfg: &ExperimentConfig) -> Result<Vec<SweepResult>> {
    cfg.validate()?;
    check_output(cfg)?;
    let dist = cfg.degree_distribution()?;
    let ws = cfg.weights()?;
    let code = if cfg.variants.iter().any(|v| v.precoded()) {
        Some(precode_for(cfg)?)
    } else {
        None
    };
    let plan = TrialPlan {
        trials: cfg.trials,
        max_trials: cfg.max_trials,
        min_error_events: cfg.min_error_events,
        abort_above: None,
    };
    let grid = cfg.symbol_grid();
    let mut results = Vec::with_capacity(cfg.variants.len());
    for &variant in &cfg.variants {
        let policy = EncoderPolicy::default_for(&dist, &ws).with_selection(variant.selection());
        let setup = setup_for(cfg, policy, code.clone().filter(|_| variant.precoded()))?;
        let mut points = Vec::new();
        for &snr in &cfg.snr_db {
            let channel = channel_for(cfg, snr);
            for &n in &grid {
                let tally = measure_point(&setup, n, &channel, &plan)?;
                points.push(point_record(cfg, &setup, &channel, n, &tally, true));
            }
        }
        results.push(SweepResult {
            label: variant.name().to_string(),
            points,
        });
    }
    Ok(results)
}

/// For each SNR, finds the fewest symbols `N` whose measured BER is at most
/// `target_ber`: doubling from half capacity, then bisection down to the
/// configured relative resolution. Points where even `min_rate` misses the
/// target are flagged unreached and report that lowest-rate measurement.
pub fn run_throughput_sweep(cfg: &ExperimentConfig, target_ber: f64) -> Result<SweepResult> {
    cfg.validate()?;
    check_output(cfg)?;
    if !(target_ber > 0.0 && target_ber < 1.0) {
        return Err(Error::Config("target_ber must lie in (0, 1)".into()));
    }
    let code = if cfg.precoded() {
        Some(precode_for(cfg)?)
    } else {
        None
    };
    let setup = setup_for(cfg, cfg.throughput_policy()?, code)?;
    let info = setup.info_bits() as f64;
    let plan = TrialPlan {
        trials: cfg.trials,
        max_trials: cfg.max_trials,
        min_error_events: cfg.min_error_events,
        abort_above: Some(target_ber),
    };
    let mut points = Vec::with_capacity(cfg.snr_db.len());
    for &snr in &cfg.snr_db {
        let channel = channel_for(cfg, snr);
        let eval = |n: usize| -> Result<(PointTally, bool)> {
            let t = measure_point(&setup, n, &channel, &plan)?;
            Ok((t, t.ber(setup.info_bits()) <= target_ber))
        };
        // Rates at or above capacity are never tested. The search starts at
        // half capacity and doubles `N` until the target is met.
        let cap = capacity_bits_per_cu(channel.sigma2);
        let mut lo = if channel.noiseless {
            2
        } else {
            2 * (info / cap).floor() as usize
        };
        let n_max = 2 * (info / cfg.min_rate).ceil() as usize;
        let mut hi = (2 * (2.0 * info / cap).ceil() as usize).clamp(lo + 1, n_max.max(lo + 1));
        let (mut best, mut ok) = eval(hi)?;
        while !ok && hi < n_max {
            lo = hi;
            hi = (2 * hi).min(n_max);
            (best, ok) = eval(hi)?;
        }
        if !ok {
            points.push(point_record(cfg, &setup, &channel, hi, &best, false));
            continue;
        }
        while hi - lo > 1 && (hi - lo) as f64 > cfg.resolution * hi as f64 {
            let mid = lo + (hi - lo) / 2;
            let (t, ok) = eval(mid)?;
            if ok {
                hi = mid;
                best = t;
            } else {
                lo = mid;
            }
        }
        points.push(point_record(cfg, &setup, &channel, hi, &best, true));
    }
    let label = if cfg.precoded() {
        "precoded"
    } else {
        "uncoded"
    };
    Ok(SweepResult {
        label: label.to_string(),
        points,
    })
}
