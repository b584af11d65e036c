//! `afc`: simulation sweeps and weight-set analysis for analog fountain codes.

use std::path::{Path, PathBuf};

use afc_core::analysis::{
    check_nonzero_condition, check_signed_row, e_recursion, gaussian_fit_check,
    pairwise_error_prob, search_weight_set, shaping::DEFAULT_SAMPLES, CandidateFamily,
    SearchConfig,
};
use afc_core::graph::{build_graph, EncoderPolicy, WeightAssignment, SEAMLESS_ROW};
use afc_core::harness::{
    emit_csv, emit_gnuplot, parse_weight_set, run_ber_sweep, run_throughput_sweep,
    ExperimentConfig, SweepResult,
};
use afc_core::rng::{substream, Purpose};
use afc_core::weights::DegreeDistribution;
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index;
use rand::Rng;

#[derive(Parser)]
#[command(
    name = "afc",
    version,
    about = "Analog fountain code simulation and analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// BER against rate for each encoder variant at fixed SNR.
    BerSweep(SweepArgs),
    /// Highest rate meeting a target BER, per SNR.
    ThroughputSweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        target_ber: Option<f64>,
    },
    /// Weight-set checks and search.
    #[command(subcommand)]
    Weights(WeightsCommand),
    /// Analytical tools: unique-solution recursion, pairwise error, shaping.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
}

#[derive(Args)]
struct SweepArgs {
    /// TOML experiment configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output path. A BER sweep over several variants writes one file per
    /// variant with the variant name appended to the file stem.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    max_trials: Option<u64>,
    #[arg(long)]
    noiseless: bool,
    /// Also write a gnuplot data file.
    #[arg(long)]
    gnuplot: Option<PathBuf>,
    #[arg(long)]
    k_msg: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    snr_db: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    rates: Option<Vec<f64>>,
}

impl SweepArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)
                .with_context(|| format!("loading {}", path.display()))?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.out {
            cfg.out = Some(v.clone());
        }
        if let Some(v) = self.trials {
            cfg.trials = v;
            cfg.max_trials = cfg.max_trials.max(v);
        }
        if let Some(v) = self.max_trials {
            cfg.max_trials = v;
        }
        if self.noiseless {
            cfg.noiseless = true;
        }
        if let Some(v) = &self.gnuplot {
            cfg.gnuplot = Some(v.clone());
        }
        if let Some(v) = self.k_msg {
            cfg.k_msg = v;
        }
        if let Some(v) = &self.snr_db {
            cfg.snr_db = v.clone();
        }
        if let Some(v) = &self.rates {
            cfg.rates = v.clone();
            cfg.n_symbols.clear();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum WeightsCommand {
    /// Exhaustive non-vanishing check for a weight set.
    Check {
        /// `reciprocal-primes`, `rationals:1/2,1/3,...` or `seamless`.
        #[arg(long, default_value = "reciprocal-primes")]
        set: String,
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = AssignmentArg::Default)]
        assignment: AssignmentArg,
    },
    /// Randomised search for a weight set passing both checks.
    Search {
        #[arg(long, default_value_t = 8)]
        f: usize,
        #[arg(long, default_value_t = 8)]
        d: usize,
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = FamilyArg::ReciprocalPrimes)]
        family: FamilyArg,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Unique-solution recursion for a weight tuple.
    Lemma1 {
        /// Comma-separated ratios, e.g. `1/2,1/3,1/5`.
        #[arg(long)]
        weights: String,
        /// Weight set the recursion draws from; defaults to the tuple itself.
        #[arg(long)]
        set: Option<String>,
        #[arg(long)]
        l_max: Option<usize>,
    },
    /// Pairwise error probability on a random reciprocal-prime graph.
    Pairwise {
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        flips: usize,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Bin-wise Gaussian fit of the coded-symbol law.
    Shaping {
        #[arg(long, default_value = "reciprocal-primes")]
        set: String,
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long, default_value_t = 0.2)]
        delta: f64,
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the per-bin table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AssignmentArg {
    Default,
    WithReplacement,
    WithoutReplacement,
    Permutation,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    ReciprocalPrimes,
    RandomRational,
}

fn variant_path(base: &Path, label: &str) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("sweep");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}-{label}.{ext}"),
        None => format!("{stem}-{label}"),
    };
    base.with_file_name(name)
}

fn print_results(results: &[SweepResult]) {
    for r in results {
        println!("# {}", r.label);
        println!("snr_db  n_symbols  rate     ber        fer     trials  note");
        for p in &r.points {
            let note = match (p.reached, p.low_confidence) {
                (false, _) => "unreached",
                (true, true) => "low-confidence",
                _ => "",
            };
            println!(
                "{:<7} {:<10} {:<8.4} {:<10.3e} {:<7.4} {:<7} {note}",
                p.snr_db, p.n_symbols, p.rate_bits_per_cu, p.ber, p.fer, p.trials
            );
        }
    }
}

fn ber_sweep(args: &SweepArgs) -> Result<()> {
    let cfg = args.config()?;
    let results = run_ber_sweep(&cfg)?;
    print_results(&results);
    if let Some(out) = &cfg.out {
        if results.len() == 1 {
            emit_csv(&results[0], out)?;
        } else {
            for r in &results {
                emit_csv(r, &variant_path(out, &r.label))?;
            }
        }
    }
    if let Some(path) = &cfg.gnuplot {
        emit_gnuplot(&results, path)?;
    }
    Ok(())
}

fn throughput_sweep(args: &SweepArgs, target: Option<f64>) -> Result<()> {
    let cfg = args.config()?;
    let result = run_throughput_sweep(&cfg, target.unwrap_or(cfg.target_ber))?;
    print_results(std::slice::from_ref(&result));
    for p in &result.points {
        println!(
            "snr {} dB: rate {:.4} capacity {:.4}",
            p.snr_db, p.rate_bits_per_cu, p.capacity
        );
    }
    if let Some(out) = &cfg.out {
        emit_csv(&result, out)?;
    }
    if let Some(path) = &cfg.gnuplot {
        emit_gnuplot(std::slice::from_ref(&result), path)?;
    }
    Ok(())
}

fn weights(cmd: &WeightsCommand) -> Result<()> {
    match cmd {
        WeightsCommand::Check {
            set,
            degree,
            assignment,
        } => {
            let report = if set == "seamless" {
                check_signed_row(&SEAMLESS_ROW)
            } else {
                let ws = parse_weight_set(set)?;
                let assignment = match assignment {
                    AssignmentArg::Default => {
                        EncoderPolicy::default_for(&DegreeDistribution::fixed(*degree)?, &ws)
                            .weight_assignment
                    }
                    AssignmentArg::WithReplacement => WeightAssignment::WithReplacement,
                    AssignmentArg::WithoutReplacement => WeightAssignment::WithoutReplacement,
                    AssignmentArg::Permutation => WeightAssignment::PermutationOfSet,
                };
                check_nonzero_condition(&ws, *degree, assignment)?
            };
            println!(
                "holds: {} ({} coefficient vectors)",
                report.holds, report.cases
            );
            if let Some(w) = report.witness {
                let terms: Vec<String> = w
                    .weights
                    .iter()
                    .zip(&w.coeffs)
                    .map(|(w, c)| format!("{c:+}*{w}"))
                    .collect();
                println!("witness: {} = 0", terms.join(" "));
            }
        }
        WeightsCommand::Search {
            f,
            d,
            delta,
            eps,
            family,
            budget,
            samples,
            seed,
        } => {
            let family = match family {
                FamilyArg::ReciprocalPrimes => CandidateFamily::ReciprocalPrimes,
                FamilyArg::RandomRational => CandidateFamily::RandomRational,
            };
            let cfg = SearchConfig {
                budget: *budget,
                n_samples: *samples,
                seed: *seed,
            };
            let ws = search_weight_set(*f, *d, *delta, *eps, family, &cfg)?;
            let values: Vec<String> = match ws.exact() {
                Some(e) => e.values.iter().map(|r| r.to_string()).collect(),
                None => ws.values().iter().map(|v| v.to_string()).collect(),
            };
            println!("found: {}", values.join(","));
        }
    }
    Ok(())
}

fn analyze(cmd: &AnalyzeCommand) -> Result<()> {
    match cmd {
        AnalyzeCommand::Lemma1 {
            weights,
            set,
            l_max,
        } => {
            let tuple = parse_weight_set(&format!("rationals:{weights}"))
                .or_else(|_| bail!("weights must be distinct positive ratios"))?;
            let exact = tuple.exact().map(|e| e.values.clone()).unwrap_or_default();
            let ws = match set {
                Some(id) => parse_weight_set(id)?,
                None => tuple.clone(),
            };
            let l = l_max.unwrap_or(tuple.len());
            let report = e_recursion(&ws, tuple.values(), Some(&exact), l)?;
            for (j, e) in report.e_trace.iter().enumerate() {
                println!("e_{} = {e}", j + 2);
            }
            if let Some(e) = report.e_l_exact {
                println!("exact e_{} = {e}", report.l);
            }
            if l == tuple.len() {
                let fraction = afc_core::analysis::unique_fraction(&exact)?;
                println!("exhaustive unique-solution fraction = {fraction}");
            }
        }
        AnalyzeCommand::Pairwise {
            k,
            m,
            flips,
            sigma,
            seed,
        } => {
            let ws = afc_core::weights::WeightSet::reciprocal_primes();
            let dist = DegreeDistribution::fixed(8)?;
            let mut rng = substream(*seed, Purpose::Analysis, 0);
            let g = build_graph(
                *k,
                *m,
                &dist,
                &ws,
                EncoderPolicy::default_for(&dist, &ws),
                &mut rng,
            )?;
            let b: Vec<f64> = (0..*k)
                .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                .collect();
            if *flips == 0 || flips > k {
                bail!("flips must lie in 1..={k}");
            }
            let flip = index::sample(&mut rng, *k, *flips).into_vec();
            let p = pairwise_error_prob(&g, &b, &flip, *sigma)?;
            println!("flip set {flip:?}: pairwise error probability {p:e}");
        }
        AnalyzeCommand::Shaping {
            set,
            degree,
            delta,
            eps,
            samples,
            seed,
            out,
        } => {
            let ws = parse_weight_set(set)?;
            let report = gaussian_fit_check(&ws, *degree, *delta, *eps, *samples, *seed)?;
            println!("bin  p            q            gap2         pass");
            for b in &report.bins {
                println!(
                    "{:<4} {:<12.6e} {:<12.6e} {:<12.4e} {}",
                    b.index,
                    b.p,
                    b.q,
                    b.gap2,
                    b.passes()
                );
            }
            println!(
                "satisfied: {} (raw gap2 <= eps everywhere: {})",
                report.satisfied, report.within_eps
            );
            if let Some(path) = out {
                report.write_csv(std::fs::File::create(path)?)?;
            }
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::BerSweep(args) => ber_sweep(args),
        Command::ThroughputSweep { sweep, target_ber } => throughput_sweep(sweep, *target_ber),
        Command::Weights(cmd) => weights(cmd),
        Command::Analyze(cmd) => analyze(cmd),
    }
}
