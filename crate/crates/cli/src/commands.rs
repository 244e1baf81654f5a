//! Subcommand bodies. Each returns the list of failed checks; an empty list
//! means success.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use cisc_core::format::format_significant;
use cisc_core::mi::{bpsk_mi, low_snr_slope_estimate, qpsk_mi, subadditivity_audit};
use cisc_core::rates::{
    audit_decomposition, rate_total, rhombic_mi_monte_carlo, sweep, sweep_weighted, RateWeights,
};
use cisc_core::sim::{run_frame, simulate as run_simulation, ModeKind, SimConfig};

use crate::{AuditArgs, CurvesArgs, Mode, SimulateArgs, SlopeArgs};

pub type Failures = Vec<String>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Invalid(_) => "validation",
            CliError::Io { .. } => "io",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<cisc_core::Error> for CliError {
    fn from(e: cisc_core::Error) -> Self {
        match e {
            cisc_core::Error::Io(source) => CliError::Io {
                path: "<output>".into(),
                source,
            },
            other => CliError::Invalid(other.to_string()),
        }
    }
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Genie => "genie",
        Mode::Hard => "hard",
    }
}

fn g(x: f64) -> String {
    format_significant(x, 10)
}

/// Writes `body` to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, body),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn write_file(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn curves(a: &CurvesArgs) -> Result<Failures, CliError> {
    let curve = if a.measured_weights {
        let cfg = SimConfig {
            code12: a.code.code12.clone(),
            code3: a.code.code3.clone(),
            blocks: a.blocks,
            frames: a.frames,
            seed: a.seed,
            ..Default::default()
        };
        let r = run_simulation(&cfg)?;
        let w = RateWeights::from_counts(
            r.n_sum as usize,
            r.n_total_sum as usize,
            r.mprime_sum as usize,
        )?;
        eprintln!(
            "cisc: measured weights step1={} vertical={}",
            g(w.step1),
            g(w.vertical)
        );
        sweep_weighted(&a.grid, w)?
    } else {
        sweep(&a.grid)?
    };
    emit(a.out.as_deref(), &curve.to_csv())?;

    let n = curve.points.len();
    let interior = n.saturating_sub(2);
    let positive = if n > 2 {
        curve.points[1..n - 1]
            .iter()
            .filter(|p| p.delta > 0.0)
            .count()
    } else {
        0
    };
    let (lo, hi) = curve.delta_range();
    let summary = format!(
        "grid={} points={n} delta_min={} delta_max={} interior_positive={positive}/{interior}",
        a.grid,
        g(lo),
        g(hi)
    );
    // Keep stdout pure CSV when it carries the curve.
    if a.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("cisc: {summary}");
    }
    Ok(Vec::new())
}

pub fn simulate(a: &SimulateArgs) -> Result<Failures, CliError> {
    let sigma2 = match a.gamma {
        Some(gamma) if gamma > 0.0 && gamma.is_finite() => 2.0 * a.alpha * a.alpha / gamma,
        Some(gamma) => {
            return Err(CliError::Invalid(format!(
                "gamma must be positive and finite, got {gamma}"
            )))
        }
        None => a.sigma2,
    };
    if !(sigma2 >= 0.0 && sigma2.is_finite()) {
        return Err(CliError::Invalid(format!(
            "sigma2 must be non-negative and finite, got {sigma2}"
        )));
    }
    let cfg = SimConfig {
        code12: a.code.code12.clone(),
        code3: a.code.code3.clone(),
        alpha: a.alpha,
        sigma2_per_dim: sigma2 / 2.0,
        blocks: a.blocks,
        frames: a.frames,
        mode: match a.mode {
            Mode::Genie => ModeKind::Genie,
            Mode::Hard => ModeKind::Hard,
        },
        seed: a.seed,
    };
    // Validates codes, alpha and sizes before any frame runs.
    let codec = cfg.codec()?;
    if let Some(path) = &a.dump_frame {
        let run = run_frame(&codec, &cfg, 0)?;
        let mut buf = Vec::new();
        run.write_received_csv(&mut buf)?;
        write_file(path, &String::from_utf8_lossy(&buf))?;
    }
    let r = run_simulation(&cfg)?;

    let mut s = String::new();
    let gamma = if sigma2 > 0.0 {
        2.0 * cfg.alpha * cfg.alpha / sigma2
    } else {
        f64::INFINITY
    };
    let _ = writeln!(
        s,
        "code12={} code3={} mode={}",
        cfg.code12,
        cfg.code3,
        mode_name(a.mode)
    );
    let _ = writeln!(
        s,
        "alpha={} sigma2={} sigma2_per_dim={} gamma={} gamma_db={}",
        g(cfg.alpha),
        g(sigma2),
        g(cfg.sigma2_per_dim),
        g(gamma),
        g(10.0 * gamma.log10())
    );
    let _ = writeln!(
        s,
        "frames={} blocks={} seed={}",
        r.frames, cfg.blocks, cfg.seed
    );
    for (name, e) in [("c1", &r.c1), ("c2", &r.c2), ("c3", &r.c3)] {
        let _ = writeln!(
            s,
            "{name}_bits={} {name}_bit_errors={} {name}_ber={}",
            e.bits,
            e.errors,
            g(e.rate())
        );
    }
    let _ = writeln!(
        s,
        "step1_symbols={} step1_symbol_errors={}",
        r.step1_symbols, r.step1_symbol_errors
    );
    let _ = writeln!(
        s,
        "step2_branches={} step2_branch_errors={}",
        r.step2_branches, r.step2_branch_errors
    );
    let _ = writeln!(
        s,
        "n_sum={} n_total_sum={} mprime_sum={} length_ratio={}",
        r.n_sum,
        r.n_total_sum,
        r.mprime_sum,
        g(r.length_ratio())
    );
    let _ = writeln!(
        s,
        "framing_mismatches={} blocks_corrected={}",
        r.framing_mismatches, r.blocks_corrected
    );
    emit(a.out.as_deref(), &s)?;

    let mut failures = Vec::new();
    let zero_expected = a.require_zero_errors || a.mode == Mode::Genie || sigma2 == 0.0;
    if zero_expected && r.total_bit_errors() != 0 {
        failures.push(format!(
            "check=zero_errors c1={} c2={} c3={}",
            r.c1.errors, r.c2.errors, r.c3.errors
        ));
    }
    Ok(failures)
}

pub fn audit(a: &AuditArgs) -> Result<Failures, CliError> {
    for &f in &a.split {
        if !(f > 0.0 && f < 1.0) {
            return Err(CliError::Invalid(format!(
                "split fractions must lie in (0, 1), got {f}"
            )));
        }
    }
    let gammas = a.grid.values()?;
    let mut s = String::new();
    let mut failures = Vec::new();

    let _ = writeln!(
        s,
        "# subadditivity: bpsk_mi(gamma) < bpsk_mi(f*gamma) + bpsk_mi((1-f)*gamma)"
    );
    let _ = writeln!(
        s,
        "{:>14} {:>6} {:>14} {:>14} {:>6}",
        "gamma", "f", "whole", "split_sum", "holds"
    );
    for &gamma in &gammas {
        for &f in &a.split {
            let r = subadditivity_audit(gamma, f)?;
            let _ = writeln!(
                s,
                "{:>14} {:>6} {:>14} {:>14} {:>6}",
                g(gamma),
                g(f),
                g(r.lhs),
                g(r.rhs),
                r.holds
            );
            if gamma > 0.0 && !r.holds {
                failures.push(format!("check=subadditivity gamma={} f={}", g(gamma), g(f)));
            }
        }
    }

    let _ = writeln!(
        s,
        "\n# decomposition: nominal total vs rhombic-alphabet mutual information"
    );
    let _ = write!(
        s,
        "{:>14} {:>14} {:>14} {:>14} {:>14}",
        "gamma", "nominal_total", "rhombic_mi", "step2_mi", "rhombic_mix"
    );
    if a.trials > 0 {
        let _ = write!(s, " {:>14} {:>12}", "rhombic_mc", "mc_se");
    }
    s.push('\n');
    for (i, &gamma) in gammas.iter().enumerate() {
        let d = audit_decomposition(gamma)?;
        let _ = write!(
            s,
            "{:>14} {:>14} {:>14} {:>14} {:>14}",
            g(gamma),
            g(d.nominal_total),
            g(d.rhombic_mi),
            g(d.step2_mi),
            g(d.rhombic_mi_plus_step2)
        );
        if a.trials > 0 {
            if gamma > 0.0 {
                let seed = cisc_core::rng::derive_seed(a.seed, i as u64);
                let mc = rhombic_mi_monte_carlo(gamma, a.trials, seed)?;
                let _ = write!(s, " {:>14} {:>12}", g(mc.value), g(mc.std_error));
            } else {
                let _ = write!(s, " {:>14} {:>12}", "0", "0");
            }
        }
        s.push('\n');
    }
    let _ = writeln!(s, "# {}", cisc_core::rates::DECOMPOSITION_NOTE);
    emit(a.out.as_deref(), &s)?;
    Ok(failures)
}

/// Slope tolerance for qpsk and the total rate.
const SLOPE_TOLERANCE: f64 = 0.01;

pub fn slope(a: &SlopeArgs) -> Result<Failures, CliError> {
    use std::f64::consts::LOG2_E;
    type MiFn = fn(f64) -> cisc_core::Result<f64>;
    let rows: [(&str, MiFn, f64); 3] = [
        ("bpsk_mi", |r| Ok(bpsk_mi(r)?.value), LOG2_E),
        ("qpsk_mi", |r| Ok(qpsk_mi(r)?.value), LOG2_E),
        ("rate_total", rate_total, 1.4 * LOG2_E),
    ];
    let mut s = String::new();
    let mut failures = Vec::new();
    let _ = writeln!(
        s,
        "{:>10} {:>14} {:>14} {:>12} {:>14} {:>12} {:>14}",
        "function", "slope", "target", "rel_err", "half_probe", "half_rel_err", "extrapolated"
    );
    for (name, f, target) in rows {
        let est = low_snr_slope_estimate(f, a.probe)?;
        let err = (est.slope / target - 1.0).abs();
        let half_err = (est.half_probe_slope / target - 1.0).abs();
        let _ = writeln!(
            s,
            "{name:>10} {:>14} {:>14} {:>12} {:>14} {:>12} {:>14}",
            g(est.slope),
            g(target),
            g(err),
            g(est.half_probe_slope),
            g(half_err),
            g(est.extrapolated)
        );
        if err >= SLOPE_TOLERANCE {
            failures.push(format!(
                "check=slope function={name} rel_err={} limit={SLOPE_TOLERANCE}",
                g(err)
            ));
        }
        // Allow float noise when both errors are already at rounding level.
        if half_err > 2.0 * err + 1e-9 {
            failures.push(format!(
                "check=slope_convergence function={name} rel_err={} half_rel_err={}",
                g(err),
                g(half_err)
            ));
        }
    }
    let _ = writeln!(s, "probe={}", g(a.probe));
    emit(a.out.as_deref(), &s)?;
    Ok(failures)
}
