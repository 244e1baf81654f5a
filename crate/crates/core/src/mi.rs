//! Mutual information of finite alphabets over the AWGN channel.
//!
//! SNR convention: for a symbol of energy `E`, `rho = E / sigma_n2`, where
//! `sigma_n2` is the total noise power of a complex (2-D) sample. Each real
//! dimension therefore sees noise of variance `sigma_n2 / 2`. With this
//! convention `qpsk_mi(2ρ) = 2·bpsk_mi(ρ)` and both curves leave the origin
//! with slope `log2(e)`.
//!
//! Two independent routes are provided: deterministic Gauss–Hermite
//! quadrature (tensor product in 2-D) and a seeded Monte Carlo estimator
//! that reports its own standard error. All results are in bits.

use std::f64::consts::{E, LN_2, LOG2_E, PI};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, validation, Result};
use crate::quadrature::{default_rule, StandardNormalRule};
use crate::rng::{derive_seed, rng_from_seed};

/// Gauss–Hermite nodes per real dimension.
pub const DEFAULT_QUADRATURE_ORDER: usize = 128;

/// Probe used by [`low_snr_slope`] when the caller has no preference.
pub const DEFAULT_SLOPE_PROBE: f64 = 1e-4;

/// Smallest Monte Carlo run accepted by [`mi_monte_carlo`].
pub const MIN_MONTE_CARLO_TRIALS: u64 = 10_000;

const MC_CHUNK: u64 = 1 << 16;

/// Linear signal-to-noise ratio `E / sigma_n2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SnrValue(f64);

impl SnrValue {
    pub fn new(rho: f64) -> Result<Self> {
        if !rho.is_finite() || rho < 0.0 {
            return Err(domain(format!(
                "SNR must be finite and non-negative, got {rho}"
            )));
        }
        Ok(Self(rho))
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Self::new(10f64.powf(db / 10.0))
    }

    pub fn linear(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        10.0 * self.0.log10()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiMethod {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    /// Bits per channel use.
    pub value: f64,
    /// Zero for quadrature.
    pub std_error: f64,
    pub method: MiMethod,
}

impl MiEstimate {
    fn quadrature(value: f64) -> Self {
        Self {
            value,
            std_error: 0.0,
            method: MiMethod::Quadrature,
        }
    }
}

/// A finite set of 2-D signal points with priors and distinct labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<[f64; 2]>,
    priors: Vec<f64>,
    labels: Vec<u32>,
}

impl Constellation {
    pub fn new(points: Vec<[f64; 2]>, priors: Vec<f64>, labels: Vec<u32>) -> Result<Self> {
        if points.len() < 2 {
            return Err(validation("a constellation needs at least 2 points"));
        }
        if priors.len() != points.len() || labels.len() != points.len() {
            return Err(validation(format!(
                "{} points but {} priors and {} labels",
                points.len(),
                priors.len(),
                labels.len()
            )));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(validation("constellation coordinates must be finite"));
        }
        if priors.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(validation("priors must be finite and non-negative"));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(validation(format!("priors sum to {total}, not 1")));
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(validation("constellation labels must be distinct"));
        }
        Ok(Self {
            points,
            priors,
            labels,
        })
    }

    /// Equiprobable points labelled `0..M`.
    pub fn uniform(points: Vec<[f64; 2]>) -> Result<Self> {
        let m = points.len();
        let priors = vec![1.0 / m as f64; m];
        let labels = (0..m as u32).collect();
        Self::new(points, priors, labels)
    }

    pub fn bpsk(amplitude: f64) -> Result<Self> {
        Self::uniform(vec![[amplitude, 0.0], [-amplitude, 0.0]])
    }

    /// `(±alpha, ±alpha)`, labelled by the Gray pair (in-phase bit, quadrature bit).
    pub fn qpsk(alpha: f64) -> Result<Self> {
        Self::new(
            vec![
                [alpha, alpha],
                [alpha, -alpha],
                [-alpha, alpha],
                [-alpha, -alpha],
            ],
            vec![0.25; 4],
            vec![0b00, 0b01, 0b10, 0b11],
        )
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Prior-weighted mean of `|x|²`.
    pub fn mean_energy(&self) -> f64 {
        self.points
            .iter()
            .zip(&self.priors)
            .map(|(p, w)| w * (p[0] * p[0] + p[1] * p[1]))
            .sum()
    }

    /// Entropy of the input distribution, the ceiling on any MI value.
    pub fn input_entropy(&self) -> f64 {
        self.priors
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|p| -p * p.log2())
            .sum()
    }

    fn differences(&self) -> Vec<Vec<Diff>> {
        self.points
            .iter()
            .map(|xi| {
                self.points
                    .iter()
                    .zip(&self.priors)
                    .filter(|(_, &p)| p > 0.0)
                    .map(|(xj, &p)| {
                        let d = [xi[0] - xj[0], xi[1] - xj[1]];
                        Diff {
                            d,
                            norm2: d[0] * d[0] + d[1] * d[1],
                            ln_prior: p.ln(),
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Diff {
    d: [f64; 2],
    norm2: f64,
    ln_prior: f64,
}

/// `-log2 Σ_j p_j exp(-(|d_ij|² + 2⟨d_ij, n⟩) / (2σ²))` for per-dimension noise `n`.
fn information_density(diffs: &[Diff], n: [f64; 2], inv_two_var: f64) -> f64 {
    let exponent = |df: &Diff| {
        df.ln_prior - (df.norm2 + 2.0 * (df.d[0] * n[0] + df.d[1] * n[1])) * inv_two_var
    };
    let max = diffs.iter().map(exponent).fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = diffs.iter().map(|df| (exponent(df) - max).exp()).sum();
    -(max + sum.ln()) * LOG2_E
}

/// Differential entropy in bits of a real Gaussian with variance `sigma2`.
pub fn gaussian_entropy(sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0) || !sigma2.is_finite() {
        return Err(domain(format!(
            "noise variance must be positive and finite, got {sigma2}"
        )));
    }
    Ok(0.5 * (2.0 * PI * E * sigma2).log2())
}

/// `ln(1 + e^u)` without overflow.
fn softplus(u: f64) -> f64 {
    if u > 0.0 {
        u + (-u).exp().ln_1p()
    } else {
        u.exp().ln_1p()
    }
}

/// `1 - bpsk_mi(rho)`, evaluated directly so it keeps full relative
/// precision at high SNR where the MI itself rounds to 1.
pub fn bpsk_deficit(rho: f64) -> Result<f64> {
    let rho = SnrValue::new(rho)?.linear();
    if rho == 0.0 {
        return Ok(1.0);
    }
    Ok(bpsk_deficit_with(default_rule(), rho))
}

pub(crate) fn bpsk_deficit_with(rule: &StandardNormalRule, rho: f64) -> f64 {
    // Per-dimension SNR a²/σ² with σ² = a² / (2ρ).
    let s = 2.0 * rho;
    let root = s.sqrt();
    let d = rule.expect(|z| softplus(-2.0 * s - 2.0 * root * z)) / LN_2;
    d.clamp(0.0, 1.0)
}

/// MI of equiprobable `{+a, -a}` at `rho = a² / sigma_n2`.
pub fn bpsk_mi(rho: f64) -> Result<MiEstimate> {
    let deficit = bpsk_deficit(rho)?;
    Ok(MiEstimate::quadrature(1.0 - deficit))
}

/// MI of QPSK at `rho = E_s / sigma_n2`; the two quadrature branches are
/// independent BPSK channels, each carrying half the energy.
pub fn qpsk_mi(rho: f64) -> Result<MiEstimate> {
    let branch = bpsk_mi(SnrValue::new(rho)?.linear() / 2.0)?;
    Ok(MiEstimate::quadrature(2.0 * branch.value))
}

fn check_noise_power(sigma_n2: f64) -> Result<()> {
    if !(sigma_n2 > 0.0) || !sigma_n2.is_finite() {
        return Err(domain(format!(
            "noise power must be positive and finite, got {sigma_n2}"
        )));
    }
    Ok(())
}

/// MI `H(Y) - H(N)` of an arbitrary constellation with total complex
/// noise power `sigma_n2`, by tensor-product Gauss–Hermite quadrature.
pub fn constellation_mi(c: &Constellation, sigma_n2: f64) -> Result<MiEstimate> {
    check_noise_power(sigma_n2)?;
    Ok(MiEstimate::quadrature(constellation_mi_with(
        default_rule(),
        c,
        sigma_n2,
    )))
}

pub(crate) fn constellation_mi_with(
    rule: &StandardNormalRule,
    c: &Constellation,
    sigma_n2: f64,
) -> f64 {
    let var = sigma_n2 / 2.0;
    let sigma = var.sqrt();
    let inv_two_var = 0.5 / var;
    let diffs = c.differences();
    let mut total = 0.0;
    for (diff_row, &prior) in diffs.iter().zip(c.priors()) {
        if prior == 0.0 {
            continue;
        }
        let mut acc = 0.0;
        for (&za, &pa) in rule.points.iter().zip(&rule.probs) {
            let mut inner = 0.0;
            for (&zb, &pb) in rule.points.iter().zip(&rule.probs) {
                inner += pb * information_density(diff_row, [sigma * za, sigma * zb], inv_two_var);
            }
            acc += pa * inner;
        }
        total += prior * acc;
    }
    total.clamp(0.0, c.input_entropy())
}

/// Entropy of the channel output `H(Y) = I(X;Y) + H(N)` in bits.
pub fn output_entropy(c: &Constellation, sigma_n2: f64) -> Result<f64> {
    let mi = constellation_mi(c, sigma_n2)?.value;
    Ok(mi + 2.0 * gaussian_entropy(sigma_n2 / 2.0)?)
}

/// Monte Carlo estimate of the same quantity as [`constellation_mi`].
///
/// Trials are split into chunks of 65 536; chunk `k` draws from
/// `derive_seed(seed, k)`, so the result depends only on the inputs.
pub fn mi_monte_carlo(
    c: &Constellation,
    sigma_n2: f64,
    n_trials: u64,
    seed: u64,
) -> Result<MiEstimate> {
    check_noise_power(sigma_n2)?;
    if n_trials < MIN_MONTE_CARLO_TRIALS {
        return Err(validation(format!(
            "Monte Carlo needs at least {MIN_MONTE_CARLO_TRIALS} trials, got {n_trials}"
        )));
    }
    let var = sigma_n2 / 2.0;
    let sigma = var.sqrt();
    let inv_two_var = 0.5 / var;
    let diffs = c.differences();
    let cumulative: Vec<f64> = c
        .priors()
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();

    let mut stats = RunningStats::default();
    let chunks = n_trials.div_ceil(MC_CHUNK);
    for k in 0..chunks {
        let count = MC_CHUNK.min(n_trials - k * MC_CHUNK);
        let mut rng = rng_from_seed(derive_seed(seed, k));
        let mut chunk = RunningStats::default();
        for _ in 0..count {
            let u: f64 = rng.random();
            let i = cumulative
                .iter()
                .position(|&cp| u < cp)
                .unwrap_or(cumulative.len() - 1);
            let za: f64 = rng.sample(StandardNormal);
            let zb: f64 = rng.sample(StandardNormal);
            chunk.push(information_density(
                &diffs[i],
                [sigma * za, sigma * zb],
                inv_two_var,
            ));
        }
        stats.merge(&chunk);
    }
    Ok(MiEstimate {
        value: stats.mean,
        std_error: stats.std_error(),
        method: MiMethod::MonteCarlo,
    })
}

/// Welford accumulator with Chan's pairwise merge.
#[derive(Debug, Default, Clone, Copy)]
struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(&mut self, other: &Self) {
        if other.n == 0 {
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    fn std_error(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let var = self.m2 / (self.n - 1) as f64;
        (var.max(0.0) / self.n as f64).sqrt()
    }
}

/// First-order coefficient `mi_fn(probe) / probe`, in bits per unit SNR.
pub fn low_snr_slope<F>(mi_fn: F, probe_rho: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(probe_rho > 0.0) || !probe_rho.is_finite() {
        return Err(domain(format!(
            "slope probe must be positive, got {probe_rho}"
        )));
    }
    let at_zero = mi_fn(0.0)?;
    if at_zero.abs() > 1e-12 {
        return Err(domain(format!("slope needs mi(0) = 0, got {at_zero}")));
    }
    Ok(mi_fn(probe_rho)? / probe_rho)
}

/// Slope at `probe` and `probe / 2`, plus the Richardson extrapolation
/// `2·s(h/2) - s(h)` which removes the linear error term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    pub probe: f64,
    pub slope: f64,
    pub half_probe_slope: f64,
    pub extrapolated: f64,
}

pub fn low_snr_slope_estimate<F>(mi_fn: F, probe_rho: f64) -> Result<SlopeEstimate>
where
    F: Fn(f64) -> Result<f64>,
{
    let slope = low_snr_slope(&mi_fn, probe_rho)?;
    let half_probe_slope = low_snr_slope(&mi_fn, probe_rho / 2.0)?;
    Ok(SlopeEstimate {
        probe: probe_rho,
        slope,
        half_probe_slope,
        extrapolated: 2.0 * half_probe_slope - slope,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubadditivityReport {
    pub rho: f64,
    pub split_fraction: f64,
    /// `bpsk_mi(rho)`
    pub lhs: f64,
    /// `bpsk_mi(f·rho) + bpsk_mi((1-f)·rho)`
    pub rhs: f64,
    /// Strict `lhs < rhs`.
    pub holds: bool,
}

/// Compares one BPSK channel at `rho` against two at an energy split of it.
pub fn subadditivity_audit(rho: f64, split_fraction: f64) -> Result<SubadditivityReport> {
    let rho = SnrValue::new(rho)?.linear();
    if !(split_fraction > 0.0 && split_fraction < 1.0) {
        return Err(domain(format!(
            "split fraction must lie in (0, 1), got {split_fraction}"
        )));
    }
    let lhs = bpsk_mi(rho)?.value;
    let rhs = bpsk_mi(split_fraction * rho)?.value + bpsk_mi((1.0 - split_fraction) * rho)?.value;
    Ok(SubadditivityReport {
        rho,
        split_fraction,
        lhs,
        rhs,
        holds: lhs < rhs,
    })
}
