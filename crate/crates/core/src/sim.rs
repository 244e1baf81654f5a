//! End-to-end runs: random sources → transmitter → AWGN → receiver.
//!
//! Frame `f` draws its sources from `derive_seed(seed, 2f)` and its channel
//! noise from `derive_seed(seed, 2f + 1)` (sub-stream 0 for step 1, 1 for
//! step 2), so any frame can be replayed on its own.

use std::io::Write;

use crate::channel::{apply, ChannelConfig};
use crate::code::{BitVector, LinearCode};
use crate::error::{validation, Result};
use crate::modem::{
    detect_rhombic, recover_streams, CiscCodec, DecodeMode, GenieInfo, ReceiverOutput, Transmission,
};
use crate::rng::{derive_seed, rng_from_seed};
use crate::symbol::{write_frame_csv, SymbolStream, SymbolTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Genie,
    Hard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub code12: String,
    pub code3: String,
    pub alpha: f64,
    pub sigma2_per_dim: f64,
    /// Codewords of `code12` per frame; `N = blocks · n`.
    pub blocks: usize,
    pub frames: usize,
    pub mode: ModeKind,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            code12: "hamming74".into(),
            code3: "hamming74".into(),
            alpha: 1.0,
            sigma2_per_dim: 0.0,
            blocks: 256,
            frames: 100,
            mode: ModeKind::Hard,
            seed: 1,
        }
    }
}

impl SimConfig {
    pub fn codec(&self) -> Result<CiscCodec> {
        if self.blocks == 0 {
            return Err(validation("blocks must be at least 1"));
        }
        if self.frames == 0 {
            return Err(validation("frames must be at least 1"));
        }
        ChannelConfig::new(self.sigma2_per_dim, 0)?;
        CiscCodec::new(
            LinearCode::by_name(&self.code12)?,
            LinearCode::by_name(&self.code3)?,
            self.alpha,
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StreamErrors {
    pub bits: u64,
    pub errors: u64,
}

impl StreamErrors {
    fn add(&mut self, sent: &BitVector, got: &BitVector) {
        let common = sent.len().min(got.len());
        let diff = sent
            .iter()
            .zip(got.iter())
            .take(common)
            .filter(|(a, b)| a != b)
            .count();
        self.bits += sent.len() as u64;
        self.errors += (diff + sent.len().abs_diff(got.len())) as u64;
    }

    pub fn rate(&self) -> f64 {
        if self.bits == 0 {
            0.0
        } else {
            self.errors as f64 / self.bits as f64
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimReport {
    pub frames: u64,
    pub c1: StreamErrors,
    pub c2: StreamErrors,
    pub c3: StreamErrors,
    pub step1_symbols: u64,
    pub step1_symbol_errors: u64,
    pub step2_branches: u64,
    pub step2_branch_errors: u64,
    /// Σ N, Σ N_T and Σ |m′| over frames.
    pub n_sum: u64,
    pub n_total_sum: u64,
    pub mprime_sum: u64,
    pub framing_mismatches: u64,
    pub blocks_corrected: u64,
}

impl SimReport {
    /// Measured `Σ N_T / Σ N`.
    pub fn length_ratio(&self) -> f64 {
        self.n_total_sum as f64 / self.n_sum as f64
    }

    pub fn total_bit_errors(&self) -> u64 {
        self.c1.errors + self.c2.errors + self.c3.errors
    }
}

/// One frame's transmit side, channel outputs and receiver result.
#[derive(Debug, Clone)]
pub struct FrameRun {
    pub c1: BitVector,
    pub c2: BitVector,
    pub tx: Transmission,
    pub rx_step1: SymbolStream,
    pub rx_step2: SymbolStream,
    pub output: ReceiverOutput,
}

impl FrameRun {
    pub fn write_received_csv<W: Write>(&self, out: W) -> Result<()> {
        write_frame_csv(out, &self.rx_step1, &self.rx_step2)
    }

    pub fn write_transmitted_csv<W: Write>(&self, out: W) -> Result<()> {
        write_frame_csv(out, &self.tx.frame.step1, &self.tx.frame.step2)
    }
}

pub fn run_frame(codec: &CiscCodec, cfg: &SimConfig, frame: u64) -> Result<FrameRun> {
    let mut rng = rng_from_seed(derive_seed(cfg.seed, 2 * frame));
    let k = codec.source_len(cfg.blocks);
    let c1 = BitVector::random(k, &mut rng);
    let c2 = BitVector::random(k, &mut rng);
    let c3 = BitVector::random(codec.max_c3_len(cfg.blocks), &mut rng);
    let tx = codec.transmit(&c1, &c2, &c3)?;

    let noise_seed = derive_seed(cfg.seed, 2 * frame + 1);
    let channel = ChannelConfig::new(cfg.sigma2_per_dim, derive_seed(noise_seed, 0))?;
    let rx_step1 = apply(&tx.frame.step1, &channel)?;
    let rx_step2 = apply(
        &tx.frame.step2,
        &channel.with_seed(derive_seed(noise_seed, 1)),
    )?;

    let mode = match cfg.mode {
        ModeKind::Hard => DecodeMode::Hard,
        ModeKind::Genie => DecodeMode::Genie(GenieInfo {
            c1: c1.clone(),
            c2: c2.clone(),
            c3: tx.c3_sent.clone(),
        }),
    };
    let output = recover_streams(&rx_step1, &rx_step2, codec, &mode)?;
    Ok(FrameRun {
        c1,
        c2,
        tx,
        rx_step1,
        rx_step2,
        output,
    })
}

pub fn simulate(cfg: &SimConfig) -> Result<SimReport> {
    let codec = cfg.codec()?;
    let constellation = *codec.constellation();
    let mut report = SimReport::default();
    for f in 0..cfg.frames as u64 {
        let run = run_frame(&codec, cfg, f)?;
        let out = &run.output;
        report.frames += 1;
        report.c1.add(&run.c1, &out.c1_hat);
        report.c2.add(&run.c2, &out.c2_hat);
        report.c3.add(&run.tx.c3_sent, &out.c3_hat);

        let frame = &run.tx.frame;
        report.step1_symbols += frame.step1.len() as u64;
        report.step1_symbol_errors += frame
            .step1
            .iter()
            .zip(&out.detected)
            .filter(|(s, d)| detect_rhombic(s.point(), &constellation) != **d)
            .count() as u64;
        for (sent, got) in frame.step2.iter().zip(run.rx_step2.iter()) {
            report.step2_branches += 1;
            report.step2_branch_errors += u64::from((sent.in_phase < 0.0) != (got.in_phase < 0.0));
            if sent.tag != SymbolTag::Pad {
                report.step2_branches += 1;
                report.step2_branch_errors +=
                    u64::from((sent.quadrature < 0.0) != (got.quadrature < 0.0));
            }
        }
        report.n_sum += frame.n() as u64;
        report.n_total_sum += frame.n_total as u64;
        report.mprime_sum += frame.mprime_index.len() as u64;
        report.framing_mismatches += u64::from(out.diagnostics.framing_mismatch());
        let d = &out.diagnostics;
        report.blocks_corrected +=
            (d.parity_blocks_corrected + d.c3_blocks_corrected + d.c1_blocks_corrected) as u64;
    }
    Ok(report)
}
