//! Experiment configuration loaded from TOML.

use std::path::{Path, PathBuf};

use num_rational::Rational64;
use serde::Deserialize;

use crate::channel::SnrConvention;
use crate::decoder::DecoderConfig;
use crate::error::{Error, Result};
use crate::graph::{EncoderPolicy, Selection};
use crate::weights::{DegreeDistribution, WeightSet};

/// One encoder/decoder combination in a BER sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Uniform,
    MinDegree,
    MinDegreePrecode,
}

impl Variant {
    pub const ALL: [Variant; 3] = [
        Variant::Uniform,
        Variant::MinDegree,
        Variant::MinDegreePrecode,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Uniform => "uniform",
            Variant::MinDegree => "min-degree",
            Variant::MinDegreePrecode => "min-degree-precode",
        }
    }

    pub fn selection(self) -> Selection {
        match self {
            Variant::Uniform => Selection::UniformRandom,
            Variant::MinDegree | Variant::MinDegreePrecode => Selection::MinDegreeFirst,
        }
    }

    pub fn precoded(self) -> bool {
        self == Variant::MinDegreePrecode
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown variant `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionName {
    Uniform,
    MinDegree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SnrConventionName {
    #[default]
    PerComplexUse,
    PerRealSymbol,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecoderSettings {
    pub max_iters: usize,
    pub stable_iters: usize,
    pub damping: f64,
    pub ldpc_iters: usize,
    /// Extra AFC/LDPC exchange rounds after the first pass.
    pub joint_rounds: usize,
}

impl Default for DecoderSettings {
    fn default() -> Self {
        let d = DecoderConfig::default();
        DecoderSettings {
            max_iters: d.max_iters,
            stable_iters: d.stable_iters,
            damping: d.damping,
            ldpc_iters: 50,
            joint_rounds: 0,
        }
    }
}

/// Sweep parameters. Every field has a default; a TOML file overrides
/// defaults and command-line flags override the file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Message bits per frame. With a precode the AFC block length is
    /// `round(k_msg / precode_rate)`.
    pub k_msg: usize,
    /// Outer LDPC rate; `1.0` disables the precode.
    pub precode_rate: f64,
    pub precode_var_degree: usize,
    /// Fixed row degree, used when `degree_dist` is empty.
    pub degree: usize,
    /// `Ω_1, Ω_2, ...`.
    pub degree_dist: Vec<f64>,
    /// `reciprocal-primes` or `rationals:1/2,1/3,...`.
    pub weight_set: String,
    /// Neighbour selection for the throughput sweep.
    pub selection: SelectionName,
    pub snr_convention: SnrConventionName,
    pub snr_db: Vec<f64>,
    /// BER sweep grid in bits per complex use, strictly increasing. Converted
    /// to symbol counts against the AFC block length.
    pub rates: Vec<f64>,
    /// BER sweep grid as symbol counts; used instead of `rates` when set.
    pub n_symbols: Vec<usize>,
    pub variants: Vec<Variant>,
    pub target_ber: f64,
    /// Lowest rate the throughput bisection considers.
    pub min_rate: f64,
    /// Relative resolution of the throughput bisection on `N`.
    pub resolution: f64,
    pub trials: u64,
    /// Cap for adaptive extension.
    pub max_trials: u64,
    /// Bit-error events wanted per point with BER below [`LOW_BER`].
    pub min_error_events: u64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub gnuplot: Option<PathBuf>,
    pub noiseless: bool,
    pub decoder: DecoderSettings,
}

/// Points below this BER need [`ExperimentConfig::min_error_events`] errors.
pub const LOW_BER: f64 = 1e-3;

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            k_msg: 950,
            precode_rate: 0.95,
            precode_var_degree: 3,
            degree: 8,
            degree_dist: Vec::new(),
            weight_set: "reciprocal-primes".into(),
            selection: SelectionName::MinDegree,
            snr_convention: SnrConventionName::PerComplexUse,
            snr_db: vec![15.0],
            rates: vec![1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0],
            n_symbols: Vec::new(),
            variants: Variant::ALL.to_vec(),
            target_ber: 1e-4,
            min_rate: 0.25,
            resolution: 0.02,
            trials: 100,
            max_trials: 1000,
            min_error_events: 50,
            seed: 1,
            out: None,
            gnuplot: None,
            noiseless: false,
            decoder: DecoderSettings::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        if self.k_msg == 0 {
            return bad("k_msg must be positive");
        }
        if !(self.precode_rate > 0.0 && self.precode_rate <= 1.0) {
            return bad("precode_rate must lie in (0, 1]");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.max_trials < self.trials {
            return bad("max_trials must be at least trials");
        }
        if !(self.target_ber > 0.0 && self.target_ber < 1.0) {
            return bad("target_ber must lie in (0, 1)");
        }
        if !(self.resolution > 0.0 && self.resolution < 1.0) || !(self.min_rate > 0.0) {
            return bad("resolution must lie in (0, 1) and min_rate must be positive");
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return bad("snr_db values must be finite");
        }
        if self.rates.iter().any(|r| !(*r > 0.0)) || self.rates.windows(2).any(|w| w[0] >= w[1]) {
            return bad("rate grid must be positive and strictly increasing");
        }
        if self.n_symbols.contains(&0) || self.n_symbols.windows(2).any(|w| w[0] <= w[1]) {
            return bad(
                "n_symbols grid must be positive and strictly decreasing (increasing rate)",
            );
        }
        if self.variants.is_empty() {
            return bad("at least one variant is required");
        }
        self.degree_distribution()?;
        self.weights()?;
        Ok(())
    }

    pub fn degree_distribution(&self) -> Result<DegreeDistribution> {
        if self.degree_dist.is_empty() {
            DegreeDistribution::fixed(self.degree)
        } else {
            DegreeDistribution::new(self.degree_dist.clone())
        }
    }

    pub fn weights(&self) -> Result<WeightSet> {
        parse_weight_set(&self.weight_set)
    }

    pub fn convention(&self) -> SnrConvention {
        match self.snr_convention {
            SnrConventionName::PerComplexUse => SnrConvention::PerComplexUse,
            SnrConventionName::PerRealSymbol => SnrConvention::PerRealSymbol,
        }
    }

    pub fn decoder_config(&self) -> DecoderConfig {
        DecoderConfig {
            max_iters: self.decoder.max_iters,
            stable_iters: self.decoder.stable_iters,
            damping: self.decoder.damping,
            ..DecoderConfig::default()
        }
    }

    pub fn throughput_policy(&self) -> Result<EncoderPolicy> {
        let selection = match self.selection {
            SelectionName::Uniform => Selection::UniformRandom,
            SelectionName::MinDegree => Selection::MinDegreeFirst,
        };
        Ok(
            EncoderPolicy::default_for(&self.degree_distribution()?, &self.weights()?)
                .with_selection(selection),
        )
    }

    pub fn precoded(&self) -> bool {
        self.precode_rate < 1.0
    }

    /// AFC input length: the precode length, or `k_msg` without a precode.
    pub fn block_len(&self) -> usize {
        if self.precoded() {
            (self.k_msg as f64 / self.precode_rate).round() as usize
        } else {
            self.k_msg
        }
    }

    /// BER sweep grid as symbol counts, in order of increasing rate.
    pub fn symbol_grid(&self) -> Vec<usize> {
        if !self.n_symbols.is_empty() {
            return self.n_symbols.clone();
        }
        let n = self.block_len() as f64;
        self.rates
            .iter()
            .map(|r| 2 * (n / r).ceil() as usize)
            .collect()
    }
}

/// Parses a weight-set id.
pub fn parse_weight_set(id: &str) -> Result<WeightSet> {
    if id == "reciprocal-primes" {
        return Ok(WeightSet::reciprocal_primes());
    }
    let Some(list) = id.strip_prefix("rationals:") else {
        return Err(Error::Config(format!("unknown weight set `{id}`")));
    };
    let values = list
        .split(',')
        .map(|t| {
            let t = t.trim();
            let (num, den) = t.split_once('/').unwrap_or((t, "1"));
            match (num.trim().parse::<i64>(), den.trim().parse::<i64>()) {
                (Ok(n), Ok(d)) if d != 0 => Ok(Rational64::new(n, d)),
                _ => Err(Error::Config(format!("bad ratio `{t}`"))),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    WeightSet::from_rationals(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ExperimentConfig::default().validate().unwrap();
        assert_eq!(ExperimentConfig::default().block_len(), 1000);
    }

    #[test]
    fn parses_toml() {
        let cfg = ExperimentConfig::from_toml_str(
            r#"
            k_msg = 9500
            snr_db = [5.0, 15.0]
            variants = ["uniform", "min-degree-precode"]
            weight_set = "rationals:1/2, 1/3, 1/5"
            degree = 3
            seed = 42

            [decoder]
            max_iters = 30
            "#,
        )
        .unwrap();
        assert_eq!(cfg.block_len(), 10000);
        assert_eq!(
            cfg.variants,
            vec![Variant::Uniform, Variant::MinDegreePrecode]
        );
        assert_eq!(cfg.weights().unwrap().len(), 3);
        assert_eq!(cfg.decoder.max_iters, 30);
        assert_eq!(cfg.decoder.ldpc_iters, 50);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(ExperimentConfig::from_toml_str("rates = [2.0, 1.0]").is_err());
        assert!(ExperimentConfig::from_toml_str("trials = 0").is_err());
        assert!(ExperimentConfig::from_toml_str("n_symbols = [100, 200]").is_err());
        assert!(ExperimentConfig::from_toml_str("unknown_key = 1").is_err());
        assert!(ExperimentConfig::from_toml_str("weight_set = \"rationals:1/0\"").is_err());
    }

    #[test]
    fn symbol_grid_from_rates() {
        let cfg = ExperimentConfig {
            rates: vec![2.0, 4.0],
            ..Default::default()
        };
        assert_eq!(cfg.symbol_grid(), vec![1000, 500]);
    }
}
