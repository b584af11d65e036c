//! Real AWGN channel, SNR bookkeeping and complex-use accounting.
//!
//! Coded symbols are normalised to unit power per real dimension. Two
//! consecutive real symbols share one complex channel use, so noise is added
//! independently per real symbol.

use rand::Rng;
use rand_distr::StandardNormal;

/// How an SNR in dB maps onto the per-real-dimension noise variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnrConvention {
    /// `Es/N0` per complex use with unit power per real dimension:
    /// `σ² = 10^(−SNR/10)`.
    #[default]
    PerComplexUse,
    /// `Es/N0` per real symbol with `N0 = 2σ²`: `σ² = 10^(−SNR/10) / 2`.
    PerRealSymbol,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub snr_db: f64,
    /// Noise variance per real dimension.
    pub sigma2: f64,
    /// Pass symbols through untouched.
    pub noiseless: bool,
}

impl ChannelParams {
    pub fn from_snr_db(snr_db: f64) -> Self {
        Self::with_convention(snr_db, SnrConvention::PerComplexUse)
    }

    pub fn with_convention(snr_db: f64, convention: SnrConvention) -> Self {
        let sigma2 = match convention {
            SnrConvention::PerComplexUse => snr_to_sigma(snr_db),
            SnrConvention::PerRealSymbol => snr_to_sigma(snr_db) / 2.0,
        };
        ChannelParams {
            snr_db,
            sigma2,
            noiseless: false,
        }
    }

    pub fn noiseless(mut self) -> Self {
        self.noiseless = true;
        self
    }

    /// `log2(1 + 1/σ²)` bits per complex use.
    pub fn capacity(&self) -> f64 {
        capacity_bits_per_cu(self.sigma2)
    }
}

/// `σ² = 10^(−SNR/10)`.
pub fn snr_to_sigma(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

pub fn capacity_bits_per_cu(sigma2: f64) -> f64 {
    (1.0 + 1.0 / sigma2).log2()
}

/// Number of complex channel uses occupied by `n` real symbols.
pub fn pair_complex(n: usize) -> usize {
    n.div_ceil(2)
}

/// Message bits per complex channel use.
pub fn rate_bits_per_cu(k_msg: usize, n_symbols: usize) -> f64 {
    k_msg as f64 / pair_complex(n_symbols) as f64
}

/// `u[i] = c[i] + n_i`, `n_i ~ N(0, σ²)` i.i.d.
pub fn transmit<R: Rng + ?Sized>(coded: &[f64], params: &ChannelParams, rng: &mut R) -> Vec<f64> {
    if params.noiseless {
        return coded.to_vec();
    }
    let sigma = params.sigma2.sqrt();
    coded
        .iter()
        .map(|c| {
            let n: f64 = rng.sample(StandardNormal);
            c + sigma * n
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Purpose};

    #[test]
    fn snr_conversions() {
        assert_eq!(snr_to_sigma(0.0), 1.0);
        assert!((snr_to_sigma(10.0) - 0.1).abs() < 1e-15);
        assert!((snr_to_sigma(15.0) - 0.031_622_776_601_683_79).abs() < 1e-15);
        let p = ChannelParams::with_convention(10.0, SnrConvention::PerRealSymbol);
        assert!((p.sigma2 - 0.05).abs() < 1e-15);
    }

    #[test]
    fn pairing_counts() {
        assert_eq!(pair_complex(10), 5);
        assert_eq!(pair_complex(11), 6);
        assert_eq!(pair_complex(0), 0);
        assert_eq!(rate_bits_per_cu(9500, 10_000), 1.9);
    }

    #[test]
    fn noiseless_passthrough() {
        let c = vec![0.25, -1.5, 3.0];
        let mut rng = substream(0, Purpose::Noise, 0);
        assert_eq!(
            transmit(&c, &ChannelParams::from_snr_db(0.0).noiseless(), &mut rng),
            c
        );
    }

    #[test]
    fn noise_variance_and_determinism() {
        let params = ChannelParams::from_snr_db(3.0);
        let zeros = vec![0.0; 1_000_000];
        let u = transmit(&zeros, &params, &mut substream(4, Purpose::Noise, 0));
        let mean = u.iter().sum::<f64>() / u.len() as f64;
        let var = u.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (u.len() - 1) as f64;
        assert!((var / params.sigma2 - 1.0).abs() < 0.01, "variance {var}");
        let again = transmit(&zeros[..100], &params, &mut substream(4, Purpose::Noise, 0));
        assert_eq!(&u[..100], &again[..]);
    }
}
