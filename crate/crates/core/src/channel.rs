//! Seeded AWGN channel, `y = x + n`.
//!
//! Noise for a stream comes from one `ChaCha8Rng` seeded with `cfg.seed`.
//! Symbols are visited in order and each takes two standard normal draws
//! (`rand_distr::StandardNormal`), in-phase first, scaled by
//! `sqrt(sigma2_per_dim)`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Result};
use crate::rng::rng_from_seed;
use crate::symbol::SymbolStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    /// Noise variance on each real dimension.
    pub sigma2_per_dim: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(sigma2_per_dim: f64, seed: u64) -> Result<Self> {
        if !(sigma2_per_dim >= 0.0) || !sigma2_per_dim.is_finite() {
            return Err(domain(format!(
                "noise variance must be finite and non-negative, got {sigma2_per_dim}"
            )));
        }
        Ok(Self {
            sigma2_per_dim,
            seed,
        })
    }

    /// From the total complex noise power `sigma_n2` (half of it per dimension).
    pub fn from_noise_power(sigma_n2: f64, seed: u64) -> Result<Self> {
        Self::new(sigma_n2 / 2.0, seed)
    }

    /// Noise level giving `gamma = 2·alpha² / sigma_n2`.
    pub fn from_snr(alpha: f64, gamma: f64, seed: u64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(domain(format!(
                "SNR must be positive to define a noise level, got {gamma}"
            )));
        }
        Self::new(alpha * alpha / gamma, seed)
    }

    /// Same variance, different seed.
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// Adds independent Gaussian noise to each dimension of every symbol.
pub fn apply(stream: &SymbolStream, cfg: &ChannelConfig) -> Result<SymbolStream> {
    let cfg = ChannelConfig::new(cfg.sigma2_per_dim, cfg.seed)?;
    if stream
        .iter()
        .any(|s| !s.in_phase.is_finite() || !s.quadrature.is_finite())
    {
        return Err(domain("channel input contains non-finite symbols"));
    }
    if cfg.sigma2_per_dim == 0.0 {
        return Ok(stream.clone());
    }
    let sigma = cfg.sigma2_per_dim.sqrt();
    let mut rng = rng_from_seed(cfg.seed);
    let noisy = stream
        .iter()
        .map(|s| {
            let ni: f64 = rng.sample(StandardNormal);
            let nq: f64 = rng.sample(StandardNormal);
            let mut out = *s;
            out.in_phase += sigma * ni;
            out.quadrature += sigma * nq;
            out
        })
        .collect();
    Ok(noisy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{Symbol, SymbolTag};

    fn zeros(n: usize) -> SymbolStream {
        (0..n)
            .map(|_| Symbol::new(0.0, 0.0, SymbolTag::Step2))
            .collect()
    }

    #[test]
    fn zero_variance_is_identity() {
        let s: SymbolStream = (0..10)
            .map(|i| Symbol::new(i as f64, -(i as f64), SymbolTag::Parity0))
            .collect();
        let out = apply(&s, &ChannelConfig::new(0.0, 9).unwrap()).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn deterministic_per_seed() {
        let s = zeros(100);
        let cfg = ChannelConfig::new(0.5, 11).unwrap();
        assert_eq!(apply(&s, &cfg).unwrap(), apply(&s, &cfg).unwrap());
        assert_ne!(
            apply(&s, &cfg).unwrap(),
            apply(&s, &cfg.with_seed(12)).unwrap()
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(ChannelConfig::new(-1.0, 0).is_err());
        assert!(ChannelConfig::new(f64::NAN, 0).is_err());
        let bad: SymbolStream = vec![Symbol::new(f64::INFINITY, 0.0, SymbolTag::Step2)]
            .into_iter()
            .collect();
        assert!(apply(&bad, &ChannelConfig::new(1.0, 0).unwrap()).is_err());
        assert!(ChannelConfig::from_snr(1.0, 0.0, 0).is_err());
    }

    #[test]
    fn tags_survive() {
        let s: SymbolStream = vec![Symbol::new(1.0, 0.0, SymbolTag::Pad)]
            .into_iter()
            .collect();
        let out = apply(&s, &ChannelConfig::new(1.0, 3).unwrap()).unwrap();
        assert_eq!(out.as_slice()[0].tag, SymbolTag::Pad);
    }

    #[test]
    fn conversions() {
        assert_eq!(
            ChannelConfig::from_noise_power(2.0, 1)
                .unwrap()
                .sigma2_per_dim,
            1.0
        );
        assert_eq!(
            ChannelConfig::from_snr(2.0, 4.0, 1).unwrap().sigma2_per_dim,
            1.0
        );
    }
}
