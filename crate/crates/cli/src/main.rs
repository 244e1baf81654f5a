//! `cisc`: rate curves, end-to-end simulation, audits and low-SNR slopes.
//!
//! Results go to `--out` or stdout; failures are summarised on stderr as
//! `key=value` lines. Exit codes: 0 success, 1 check failure, 2 usage or
//! validation error, 3 I/O error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use cisc_core::mi::DEFAULT_SLOPE_PROBE;
use cisc_core::GridSpec;
use clap::{Args, Parser, Subcommand, ValueEnum};

const DEFAULT_GRID: &str = "lin:0:40:81";
const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "cisc",
    version,
    about = "Cocktail intra-symbol-code modem: rate curves, simulation and audits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the reliable-rate curves over an SNR grid and write CSV.
    Curves(CurvesArgs),
    /// Run transmit → AWGN → receive and report per-stream errors.
    Simulate(SimulateArgs),
    /// Subadditivity and rate-decomposition audit over an SNR grid.
    Audit(AuditArgs),
    /// Measured low-SNR slopes against their first-order targets.
    Slope(SlopeArgs),
}

#[derive(Debug, Args)]
struct CurvesArgs {
    /// lin:lo:hi:n | db:lo:hi:step | log:lo:hi:n | list:a,b,...
    #[arg(long, default_value = DEFAULT_GRID)]
    grid: GridSpec,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the nominal 4/5 and 2/5 fractions with ones measured from
    /// noiseless simulated frames (uses --code, --frames, --blocks, --seed).
    #[arg(long)]
    measured_weights: bool,
    #[arg(long, default_value = "c1=hamming74,c3=hamming74")]
    code: CodeSelection,
    #[arg(long, default_value_t = 100)]
    frames: usize,
    #[arg(long, default_value_t = 256)]
    blocks: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value = "c1=hamming74,c3=hamming74")]
    code: CodeSelection,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Total complex noise power σ_N² (each dimension gets σ_N²/2).
    #[arg(long, default_value_t = 0.0, conflicts_with = "gamma")]
    sigma2: f64,
    /// SNR γ = 2α²/σ_N²; sets --sigma2 from --alpha.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, value_enum, default_value_t = Mode::Hard)]
    mode: Mode,
    #[arg(long, default_value_t = 100)]
    frames: usize,
    /// Codewords of the c1/c2 code per frame.
    #[arg(long, default_value_t = 256)]
    blocks: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write frame 0's received symbols as CSV.
    #[arg(long)]
    dump_frame: Option<PathBuf>,
    /// Fail unless every stream decodes without error. Implied by genie
    /// mode and by --sigma2 0.
    #[arg(long)]
    require_zero_errors: bool,
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[arg(long, default_value = DEFAULT_GRID)]
    grid: GridSpec,
    /// Energy split fractions for the subadditivity check.
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7")]
    split: Vec<f64>,
    /// Monte Carlo trials for a rhombic MI cross-check (0 skips it).
    #[arg(long, default_value_t = 0)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SlopeArgs {
    /// SNR at which the secant slope is measured.
    #[arg(long, default_value_t = DEFAULT_SLOPE_PROBE)]
    probe: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Genie,
    Hard,
}

/// `c1=<name>,c3=<name>`; either key may be omitted. c1 and c2 share a code.
#[derive(Debug, Clone, PartialEq, Eq)]
struct CodeSelection {
    code12: String,
    code3: String,
}

impl FromStr for CodeSelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut sel = CodeSelection {
            code12: "hamming74".into(),
            code3: "hamming74".into(),
        };
        for part in s.split(',').filter(|p| !p.is_empty()) {
            let (key, name) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=name, got {part:?}"))?;
            if name.is_empty() {
                return Err(format!("empty code name for {key}"));
            }
            match key {
                "c1" | "c2" | "c12" => sel.code12 = name.into(),
                "c3" => sel.code3 = name.into(),
                _ => return Err(format!("unknown stream {key:?}; use c1 or c3")),
            }
        }
        Ok(sel)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Curves(a) => commands::curves(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Audit(a) => commands::audit(&a),
        Command::Slope(a) => commands::slope(&a),
    };
    match outcome {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            for f in &failures {
                eprintln!("cisc: FAIL {f}");
            }
            eprintln!("cisc: status=fail failed={}", failures.len());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("cisc: error kind={} msg={:?}", e.kind(), e.to_string());
            ExitCode::from(e.exit_code())
        }
    }
}
