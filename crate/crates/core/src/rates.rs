//! Reliable-bit-rate accounting for the CISC scheme against plain QPSK.
//!
//! `gamma = 2α² / σ_N²` throughout. Over `N_T = N + N/4` symbol durations
//! the two coded streams `c1`, `c2` are credited with `(4/5)·I_q(γ)` and the
//! vertical stream `c3` with `(2/5)·I_b(3γ/2)`, the latter because the
//! vertical points have amplitude `√3α`.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{validation, Error, Result};
use crate::format::format_significant;
use crate::mi::{
    bpsk_deficit, bpsk_mi, constellation_mi, mi_monte_carlo, qpsk_mi, MiEstimate, SnrValue,
};
use crate::modem::RhombicConstellation;

/// Share of `N_T` spent on step 1 (`N / N_T`) and on vertical slots
/// (`|m′| / N_T`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateWeights {
    pub step1: f64,
    pub vertical: f64,
}

impl RateWeights {
    /// `N_T = 5N/4`, `|m′| = N/2`.
    pub const NOMINAL: RateWeights = RateWeights {
        step1: 0.8,
        vertical: 0.4,
    };

    /// Weights measured from actual frame lengths.
    pub fn from_counts(n: usize, n_total: usize, mprime: usize) -> Result<Self> {
        if n == 0 || n_total < n || mprime > n {
            return Err(validation(format!(
                "inconsistent frame counts N={n}, N_T={n_total}, |m'|={mprime}"
            )));
        }
        Ok(Self {
            step1: n as f64 / n_total as f64,
            vertical: mprime as f64 / n_total as f64,
        })
    }
}

impl Default for RateWeights {
    fn default() -> Self {
        Self::NOMINAL
    }
}

fn check_gamma(gamma: f64) -> Result<f64> {
    Ok(SnrValue::new(gamma)?.linear())
}

/// `(4/5)·I_q(γ)`
pub fn rate_q_contrib(gamma: f64) -> Result<f64> {
    rate_q_contrib_weighted(gamma, RateWeights::NOMINAL)
}

/// `(2/5)·I_b(3γ/2)`
pub fn rate_b_contrib(gamma: f64) -> Result<f64> {
    rate_b_contrib_weighted(gamma, RateWeights::NOMINAL)
}

pub fn rate_total(gamma: f64) -> Result<f64> {
    Ok(rate_q_contrib(gamma)? + rate_b_contrib(gamma)?)
}

/// `rate_total(γ) - I_q(γ)`.
///
/// Written as `(2/5)·(d(γ/2) - d(3γ/2))` with `d = 1 - I_b`, which is the
/// same quantity without the cancellation between two numbers near 2.
pub fn rate_delta(gamma: f64) -> Result<f64> {
    let gamma = check_gamma(gamma)?;
    if gamma == 0.0 {
        return Ok(0.0);
    }
    Ok(0.4 * (bpsk_deficit(gamma / 2.0)? - bpsk_deficit(1.5 * gamma)?))
}

pub fn rate_q_contrib_weighted(gamma: f64, w: RateWeights) -> Result<f64> {
    Ok(w.step1 * qpsk_mi(check_gamma(gamma)?)?.value)
}

pub fn rate_b_contrib_weighted(gamma: f64, w: RateWeights) -> Result<f64> {
    Ok(w.vertical * bpsk_mi(1.5 * check_gamma(gamma)?)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub gamma: f64,
    pub gamma_db: f64,
    /// `I_q(γ)`, the QPSK reference.
    pub r_qpsk_input: f64,
    pub r_q_contrib: f64,
    pub r_b_contrib: f64,
    pub r_total: f64,
    pub delta: f64,
}

impl RatePoint {
    pub fn at(gamma: f64) -> Result<Self> {
        Self::weighted(gamma, RateWeights::NOMINAL)
    }

    pub fn weighted(gamma: f64, w: RateWeights) -> Result<Self> {
        let gamma = check_gamma(gamma)?;
        let r_qpsk_input = qpsk_mi(gamma)?.value;
        let r_q_contrib = rate_q_contrib_weighted(gamma, w)?;
        let r_b_contrib = rate_b_contrib_weighted(gamma, w)?;
        let r_total = r_q_contrib + r_b_contrib;
        let delta = if w == RateWeights::NOMINAL {
            rate_delta(gamma)?
        } else {
            r_total - r_qpsk_input
        };
        Ok(Self {
            gamma,
            gamma_db: 10.0 * gamma.log10(),
            r_qpsk_input,
            r_q_contrib,
            r_b_contrib,
            r_total,
            delta,
        })
    }
}

/// SNR grid description, as accepted on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    /// `lin:lo:hi:n`, `n` evenly spaced linear values.
    Linear { lo: f64, hi: f64, n: usize },
    /// `db:lo:hi:step`, dB values from `lo` up to `hi` inclusive.
    Db { lo: f64, hi: f64, step: f64 },
    /// `log:lo:hi:n`, `n` log-spaced linear values.
    Log { lo: f64, hi: f64, n: usize },
    /// `list:v1,v2,...` explicit linear values.
    List(Vec<f64>),
}

impl GridSpec {
    /// Linear `[0, 40]` in steps of 0.5.
    pub fn default_linear() -> Self {
        GridSpec::Linear {
            lo: 0.0,
            hi: 40.0,
            n: 81,
        }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        let values = match *self {
            GridSpec::Linear { lo, hi, n } => {
                if n == 0 || (n == 1 && lo != hi) {
                    return Err(validation(
                        "linear grid needs n >= 2, or n = 1 with lo = hi",
                    ));
                }
                if n == 1 {
                    vec![lo]
                } else {
                    let step = (hi - lo) / (n - 1) as f64;
                    (0..n)
                        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                        .collect()
                }
            }
            GridSpec::Db { lo, hi, step } => {
                if !(step > 0.0) || !(hi >= lo) {
                    return Err(validation("dB grid needs step > 0 and hi >= lo"));
                }
                let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
                (0..count)
                    .map(|i| 10f64.powf((lo + step * i as f64) / 10.0))
                    .collect()
            }
            GridSpec::Log { lo, hi, n } => {
                if !(lo > 0.0) || n < 2 {
                    return Err(validation("log grid needs lo > 0 and n >= 2"));
                }
                let (a, b) = (lo.log10(), hi.log10());
                (0..n)
                    .map(|i| {
                        if i == n - 1 {
                            hi
                        } else {
                            10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64)
                        }
                    })
                    .collect()
            }
            GridSpec::List(ref v) => v.clone(),
        };
        if values.is_empty() {
            return Err(validation("grid is empty"));
        }
        if values.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(validation("grid values must be finite and non-negative"));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(validation("grid must be strictly increasing"));
        }
        Ok(values)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            validation(format!("invalid grid {s:?}; expected lin:lo:hi:n, db:lo:hi:step, log:lo:hi:n or list:v1,v2,..."))
        };
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        if kind == "list" {
            let v = rest
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(GridSpec::List(v));
        }
        let parts: Vec<&str> = rest.split(':').collect();
        let [lo, hi, last] = parts[..] else {
            return Err(bad());
        };
        let lo: f64 = lo.parse().map_err(|_| bad())?;
        let hi: f64 = hi.parse().map_err(|_| bad())?;
        match kind {
            "lin" => Ok(GridSpec::Linear {
                lo,
                hi,
                n: last.parse().map_err(|_| bad())?,
            }),
            "log" => Ok(GridSpec::Log {
                lo,
                hi,
                n: last.parse().map_err(|_| bad())?,
            }),
            "db" => Ok(GridSpec::Db {
                lo,
                hi,
                step: last.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridSpec::Linear { lo, hi, n } => write!(f, "lin:{lo}:{hi}:{n}"),
            GridSpec::Db { lo, hi, step } => write!(f, "db:{lo}:{hi}:{step}"),
            GridSpec::Log { lo, hi, n } => write!(f, "log:{lo}:{hi}:{n}"),
            GridSpec::List(v) => {
                let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "list:{}", items.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    pub grid: GridSpec,
    pub points: Vec<RatePoint>,
}

pub const RATE_CSV_HEADER: &str = "gamma,gamma_db,mi_qpsk,r_q_contrib,r_b_contrib,r_total,delta";

impl RateCurve {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{RATE_CSV_HEADER}")?;
        for p in &self.points {
            let cells = [
                p.gamma,
                p.gamma_db,
                p.r_qpsk_input,
                p.r_q_contrib,
                p.r_b_contrib,
                p.r_total,
                p.delta,
            ]
            .map(|x| format_significant(x, 12));
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn delta_range(&self) -> (f64, f64) {
        self.points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.delta), hi.max(p.delta))
            })
    }
}

pub fn sweep(grid: &GridSpec) -> Result<RateCurve> {
    sweep_weighted(grid, RateWeights::NOMINAL)
}

pub fn sweep_weighted(grid: &GridSpec, weights: RateWeights) -> Result<RateCurve> {
    let points = grid
        .values()?
        .into_iter()
        .map(|g| RatePoint::weighted(g, weights))
        .collect::<Result<_>>()?;
    Ok(RateCurve {
        grid: grid.clone(),
        points,
    })
}

pub const DECOMPOSITION_NOTE: &str = "nominal_total credits (4/5)I_q to c1,c2 and (2/5)I_b(3γ/2) to c3; \
rhombic_mi_plus_step2 is the mutual information actually available from the rhombic alphabet over 4/5 of the \
durations plus QPSK over the remaining 1/5. No reference value exists; compare by inspection.";

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionAudit {
    pub gamma: f64,
    /// `rate_total(γ)`
    pub nominal_total: f64,
    /// MI of the equiprobable rhombic alphabet at `γ`.
    pub rhombic_mi: f64,
    /// `I_q(γ)` for the step-2 symbols.
    pub step2_mi: f64,
    /// `(4/5)·rhombic_mi + (1/5)·step2_mi`
    pub rhombic_mi_plus_step2: f64,
    pub note: &'static str,
}

/// Noise power `σ_N²` for `γ = 2α²/σ_N²`.
fn noise_power(alpha: f64, gamma: f64) -> f64 {
    2.0 * alpha * alpha / gamma
}

pub fn audit_decomposition(gamma: f64) -> Result<DecompositionAudit> {
    let gamma = check_gamma(gamma)?;
    let (rhombic_mi, step2_mi) = if gamma == 0.0 {
        (0.0, 0.0)
    } else {
        let rh = RhombicConstellation::new(1.0)?.as_constellation();
        (
            constellation_mi(&rh, noise_power(1.0, gamma))?.value,
            qpsk_mi(gamma)?.value,
        )
    };
    Ok(DecompositionAudit {
        gamma,
        nominal_total: rate_total(gamma)?,
        rhombic_mi,
        step2_mi,
        rhombic_mi_plus_step2: 0.8 * rhombic_mi + 0.2 * step2_mi,
        note: DECOMPOSITION_NOTE,
    })
}

/// Monte Carlo cross-check of [`DecompositionAudit::rhombic_mi`].
pub fn rhombic_mi_monte_carlo(gamma: f64, n_trials: u64, seed: u64) -> Result<MiEstimate> {
    let gamma = check_gamma(gamma)?;
    if gamma == 0.0 {
        return Err(validation("Monte Carlo rhombic MI needs gamma > 0"));
    }
    let rh = RhombicConstellation::new(1.0)?.as_constellation();
    mi_monte_carlo(&rh, noise_power(1.0, gamma), n_trials, seed)
}
