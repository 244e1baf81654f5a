//! Cocktail intra-symbol-code transmitter and receiver.
//!
//! Three sources share one rhombic alphabet. `c1` and `c2` are encoded by
//! the same code into `v1`, `v2`; their XOR `vp` selects the axis of each
//! step-1 symbol. Where `vp = 1` (positions `m′`) the vertical point carries
//! the next bit of `v3`; where `vp = 0` the horizontal point carries `v1`.
//! The `v1` bits at `m′` are sent afterwards as BPSK branches packed two per
//! QPSK symbol (step 2).
//!
//! The receiver decodes `cp = c1 ⊕ c2` from the axis decisions, re-encodes it
//! to find `m′`, reads `v3` off the vertical axis, merges the step-2 branches
//! into the horizontal stream to decode `c1`, and finally sets `c2 = cp ⊕ c1`.
//!
//! Rhombic point indices are 1-based, matching `x1..x4`:
//! `x1 = (0, √3α)`, `x2 = (α, 0)`, `x3 = (0, -√3α)`, `x4 = (-α, 0)`.

use crate::code::{xor, BitVector, LinearCode};
use crate::error::{domain, validation, Error, Result};
use crate::symbol::{Symbol, SymbolStream, SymbolTag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RhombicPoint {
    X1 = 1,
    X2 = 2,
    X3 = 3,
    X4 = 4,
}

impl RhombicPoint {
    pub const ALL: [RhombicPoint; 4] = [Self::X1, Self::X2, Self::X3, Self::X4];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i.checked_sub(1)?).copied()
    }

    /// Coordinates as integer multiples `(h, v)` of `(α, √3α)`.
    pub fn lattice(self) -> (i32, i32) {
        match self {
            Self::X1 => (0, 1),
            Self::X2 => (1, 0),
            Self::X3 => (0, -1),
            Self::X4 => (-1, 0),
        }
    }

    /// True for the vertical pair used at parity-1 positions.
    pub fn is_vertical(self) -> bool {
        matches!(self, Self::X1 | Self::X3)
    }
}

/// The four-point rhombic alphabet with base amplitude `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhombicConstellation {
    alpha: f64,
}

impl RhombicConstellation {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(domain(format!(
                "alpha must be positive and finite, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn point(&self, p: RhombicPoint) -> [f64; 2] {
        let (h, v) = p.lattice();
        [h as f64 * self.alpha, v as f64 * 3f64.sqrt() * self.alpha]
    }

    pub fn points(&self) -> [[f64; 2]; 4] {
        RhombicPoint::ALL.map(|p| self.point(p))
    }

    /// Squared distance in units of `α²`, exact: `Δh² + 3·Δv²`.
    pub fn squared_distance_units(a: RhombicPoint, b: RhombicPoint) -> i32 {
        let (ha, va) = a.lattice();
        let (hb, vb) = b.lattice();
        (ha - hb).pow(2) + 3 * (va - vb).pow(2)
    }

    /// Mean point energy in units of `α²` as an exact fraction `(num, den)`.
    pub fn mean_energy_units() -> (i32, i32) {
        let total: i32 = RhombicPoint::ALL
            .iter()
            .map(|p| {
                let (h, v) = p.lattice();
                h * h + 3 * v * v
            })
            .sum();
        (total, RhombicPoint::ALL.len() as i32)
    }

    /// Pairwise Euclidean distances, row/column `i` being point `x(i+1)`.
    pub fn distance_matrix(&self) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for (i, a) in RhombicPoint::ALL.iter().enumerate() {
            for (j, b) in RhombicPoint::ALL.iter().enumerate() {
                out[i][j] = self.alpha * (Self::squared_distance_units(*a, *b) as f64).sqrt();
            }
        }
        out
    }

    pub fn mean_energy(&self) -> f64 {
        let (num, den) = Self::mean_energy_units();
        num as f64 / den as f64 * self.alpha * self.alpha
    }

    /// Equiprobable MI-engine view of the alphabet, labelled 1..4.
    pub fn as_constellation(&self) -> crate::mi::Constellation {
        crate::mi::Constellation::new(self.points().to_vec(), vec![0.25; 4], vec![1, 2, 3, 4])
            .expect("rhombic alphabet is a valid constellation")
    }
}

/// `vp = v1 ⊕ v2` with its support `m′`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityWord {
    pub word: BitVector,
    pub mprime: Vec<usize>,
}

pub fn build_parity(v1: &BitVector, v2: &BitVector) -> Result<ParityWord> {
    let word = xor(v1, v2)?;
    let mprime = word.support();
    Ok(ParityWord { word, mprime })
}

/// Step-1 rhombic symbols. `v3` is consumed in order, one bit per parity-1
/// position; the `v1` bit at such a position is left to step 2.
pub fn map_step1(
    v1: &BitVector,
    v2: &BitVector,
    v3: &BitVector,
    c: &RhombicConstellation,
) -> Result<SymbolStream> {
    let parity = build_parity(v1, v2)?;
    if v3.len() < parity.mprime.len() {
        return Err(Error::Framing(format!(
            "v3 has {} bits but {} parity-1 positions need one each",
            v3.len(),
            parity.mprime.len()
        )));
    }
    let mut l = 0;
    let symbols = parity
        .word
        .iter()
        .zip(v1.iter())
        .map(|(p, b1)| {
            let (point, tag) = if p == 1 {
                let b3 = v3.as_slice()[l];
                l += 1;
                (
                    if b3 == 0 {
                        RhombicPoint::X1
                    } else {
                        RhombicPoint::X3
                    },
                    SymbolTag::Parity1,
                )
            } else {
                (
                    if b1 == 0 {
                        RhombicPoint::X2
                    } else {
                        RhombicPoint::X4
                    },
                    SymbolTag::Parity0,
                )
            };
            let [i, q] = c.point(point);
            Symbol::new(i, q, tag)
        })
        .collect();
    Ok(symbols)
}

fn check_mprime(len: usize, mprime: &[usize]) -> Result<()> {
    if mprime.windows(2).any(|w| w[0] >= w[1]) {
        return Err(validation("m′ positions must be strictly increasing"));
    }
    if let Some(&last) = mprime.last() {
        if last >= len {
            return Err(validation(format!(
                "m′ position {last} out of range for length {len}"
            )));
        }
    }
    Ok(())
}

/// Step-2 stream: `v1` at each `m′` as `+α` (bit 0) or `-α` (bit 1), paired
/// into (in-phase, quadrature). An odd last branch gets a zero quadrature
/// and the `Pad` tag.
pub fn schedule_step2(v1: &BitVector, mprime: &[usize], alpha: f64) -> Result<SymbolStream> {
    RhombicConstellation::new(alpha)?;
    check_mprime(v1.len(), mprime)?;
    let amp = |m: usize| if v1.as_slice()[m] == 0 { alpha } else { -alpha };
    let symbols = mprime
        .chunks(2)
        .map(|pair| match *pair {
            [a, b] => Symbol::new(amp(a), amp(b), SymbolTag::Step2),
            [a] => Symbol::new(amp(a), 0.0, SymbolTag::Pad),
            _ => unreachable!("chunks(2) yields one or two items"),
        })
        .collect();
    Ok(symbols)
}

/// Nearest rhombic point; ties go to the lowest index.
pub fn detect_rhombic(y: [f64; 2], c: &RhombicConstellation) -> RhombicPoint {
    let mut best = RhombicPoint::X1;
    let mut best_d = f64::INFINITY;
    for p in RhombicPoint::ALL {
        let [px, py] = c.point(p);
        let d = (y[0] - px).powi(2) + (y[1] - py).powi(2);
        if d < best_d {
            best = p;
            best_d = d;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionFrame {
    /// `N` rhombic symbols.
    pub step1: SymbolStream,
    /// `ceil(|m′| / 2)` QPSK symbols.
    pub step2: SymbolStream,
    /// Positions with `vp = 1`, ascending. Transmitter-side bookkeeping only.
    pub mprime_index: Vec<usize>,
    /// `N + |step2|`.
    pub n_total: usize,
}

impl TransmissionFrame {
    pub fn n(&self) -> usize {
        self.step1.len()
    }

    /// Measured `N_T / N`.
    pub fn length_ratio(&self) -> f64 {
        self.n_total as f64 / self.n() as f64
    }
}

/// Everything the transmitter produced for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Transmission {
    pub frame: TransmissionFrame,
    pub v1: BitVector,
    pub v2: BitVector,
    pub parity: BitVector,
    /// `v3` as placed on the vertical axis, including any zero fill.
    pub v3: BitVector,
    /// Prefix of the `c3` source that was actually sent.
    pub c3_sent: BitVector,
    /// Vertical slots holding fill rather than `v3` code bits.
    pub v3_fill: usize,
}

/// Transmitter/receiver pair: one code for `c1`/`c2`, one for `c3`.
#[derive(Debug, Clone)]
pub struct CiscCodec {
    code12: LinearCode,
    code3: LinearCode,
    constellation: RhombicConstellation,
}

impl CiscCodec {
    pub fn new(code12: LinearCode, code3: LinearCode, alpha: f64) -> Result<Self> {
        Ok(Self {
            code12,
            code3,
            constellation: RhombicConstellation::new(alpha)?,
        })
    }

    pub fn code12(&self) -> &LinearCode {
        &self.code12
    }

    pub fn code3(&self) -> &LinearCode {
        &self.code3
    }

    pub fn constellation(&self) -> &RhombicConstellation {
        &self.constellation
    }

    pub fn alpha(&self) -> f64 {
        self.constellation.alpha()
    }

    /// Source length of `c1` and `c2` for a frame of `blocks` codewords.
    pub fn source_len(&self, blocks: usize) -> usize {
        blocks * self.code12.k()
    }

    pub fn frame_len(&self, blocks: usize) -> usize {
        blocks * self.code12.n()
    }

    /// `c3` capacity in the worst case `|m′| = N`.
    pub fn max_c3_len(&self, blocks: usize) -> usize {
        self.frame_len(blocks) / self.code3.n() * self.code3.k()
    }

    /// Number of whole `c3` blocks that fit in `mprime_count` vertical slots.
    fn c3_blocks_for(&self, mprime_count: usize) -> usize {
        mprime_count / self.code3.n()
    }

    /// Encodes and maps one frame. `c3_source` must hold at least as many
    /// bits as the frame's vertical slots can carry; only that prefix is sent.
    pub fn transmit(
        &self,
        c1: &BitVector,
        c2: &BitVector,
        c3_source: &BitVector,
    ) -> Result<Transmission> {
        if c1.len() != c2.len() {
            return Err(validation(format!(
                "c1 has {} bits, c2 has {}",
                c1.len(),
                c2.len()
            )));
        }
        if c1.is_empty() {
            return Err(validation("empty source"));
        }
        let v1 = self.code12.encode_blocks(c1)?;
        let v2 = self.code12.encode_blocks(c2)?;
        let parity = build_parity(&v1, &v2)?;

        let c3_blocks = self.c3_blocks_for(parity.mprime.len());
        let c3_len = c3_blocks * self.code3.k();
        if c3_source.len() < c3_len {
            return Err(Error::Framing(format!(
                "c3 source has {} bits, frame carries {c3_len}",
                c3_source.len()
            )));
        }
        let c3_sent = c3_source.slice(0, c3_len);
        let coded = self.code3.encode_blocks(&c3_sent)?;
        let v3_fill = parity.mprime.len() - coded.len();
        let v3 = BitVector::concat([&coded, &BitVector::zeros(v3_fill)]);

        let step1 = map_step1(&v1, &v2, &v3, &self.constellation)?;
        let step2 = schedule_step2(&v1, &parity.mprime, self.alpha())?;
        let n_total = step1.len() + step2.len();
        Ok(Transmission {
            frame: TransmissionFrame {
                step1,
                step2,
                mprime_index: parity.mprime,
                n_total,
            },
            v1,
            v2,
            parity: parity.word,
            v3,
            c3_sent,
            v3_fill,
        })
    }
}

/// Information words handed to the receiver in genie mode.
#[derive(Debug, Clone, PartialEq)]
pub struct GenieInfo {
    pub c1: BitVector,
    pub c2: BitVector,
    pub c3: BitVector,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DecodeMode {
    /// Hard-decision nearest-point detection and minimum-distance decoding.
    Hard,
    /// Every decoder outputs the transmitted message, modelling
    /// error-free capacity-achieving codes.
    Genie(GenieInfo),
}

/// Per-stage counts from one receive. "Flips" are positions where the
/// hard decision differs from the re-encoded decoder output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReceiverDiagnostics {
    pub parity_flips: usize,
    pub v3_flips: usize,
    pub v1_flips: usize,
    /// Blocks whose hard word was not a codeword (hard mode).
    pub parity_blocks_corrected: usize,
    pub c3_blocks_corrected: usize,
    pub c1_blocks_corrected: usize,
    /// `|m̂′|` as recovered by the receiver.
    pub mprime_count: usize,
    /// Step-2 symbols implied by `|m̂′|` vs. received.
    pub step2_expected: usize,
    pub step2_received: usize,
    /// Step-2 branches the receiver needed but did not get (decided as 0).
    pub missing_branches: usize,
    /// Zero-padded quadrature branches that were ignored.
    pub padded_branches: usize,
    /// Vertical slots carrying fill instead of `v3` code bits.
    pub unused_v3_slots: usize,
}

impl ReceiverDiagnostics {
    pub fn framing_mismatch(&self) -> bool {
        self.step2_expected != self.step2_received
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReceiverOutput {
    pub c1_hat: BitVector,
    pub c2_hat: BitVector,
    pub c3_hat: BitVector,
    pub cp_hat: BitVector,
    /// Detected rhombic point per step-1 symbol.
    pub detected: Vec<RhombicPoint>,
    pub diagnostics: ReceiverDiagnostics,
}

fn sign_bit(x: f64) -> u8 {
    u8::from(x < 0.0)
}

fn count_flips(a: &BitVector, b: &BitVector) -> usize {
    a.iter().zip(b.iter()).filter(|(x, y)| x != y).count()
}

/// Runs the receiver on the channel outputs of one frame.
pub fn recover_streams(
    step1: &SymbolStream,
    step2: &SymbolStream,
    codec: &CiscCodec,
    mode: &DecodeMode,
) -> Result<ReceiverOutput> {
    let code12 = &codec.code12;
    let code3 = &codec.code3;
    let n = step1.len();
    if n == 0 || n % code12.n() != 0 {
        return Err(Error::Framing(format!(
            "step-1 length {n} is not a positive multiple of n = {}",
            code12.n()
        )));
    }
    if step1
        .iter()
        .chain(step2.iter())
        .any(|s| !s.in_phase.is_finite() || !s.quadrature.is_finite())
    {
        return Err(Error::Framing(
            "received frame contains non-finite samples".into(),
        ));
    }
    let blocks = n / code12.n();
    let genie = match mode {
        DecodeMode::Genie(info) => {
            let k = codec.source_len(blocks);
            if info.c1.len() != k || info.c2.len() != k {
                return Err(validation(format!("genie sources must have {k} bits")));
            }
            Some(info)
        }
        DecodeMode::Hard => None,
    };
    let mut diag = ReceiverDiagnostics {
        step2_received: step2.len(),
        ..Default::default()
    };

    // (i) axis decisions give the hard parity word; decode cp.
    let detected: Vec<RhombicPoint> = step1
        .iter()
        .map(|s| detect_rhombic(s.point(), &codec.constellation))
        .collect();
    let parity_hard = BitVector::from_bools(detected.iter().map(|p| p.is_vertical()));
    let cp_hat = match genie {
        Some(info) => xor(&info.c1, &info.c2)?,
        None => {
            let (cp, corrected) = code12.decode_blocks(&parity_hard)?;
            diag.parity_blocks_corrected = corrected;
            cp
        }
    };

    // (ii) re-encode to locate m′.
    let vp_hat = code12.encode_blocks(&cp_hat)?;
    diag.parity_flips = count_flips(&parity_hard, &vp_hat);
    let mprime = vp_hat.support();
    diag.mprime_count = mprime.len();
    diag.step2_expected = mprime.len().div_ceil(2);

    // (iii) vertical-axis BPSK at m′ carries v3.
    let c3_blocks = codec.c3_blocks_for(mprime.len());
    let v3_coded_len = c3_blocks * code3.n();
    diag.unused_v3_slots = mprime.len() - v3_coded_len;
    let v3_hard = BitVector::from_bools(
        mprime[..v3_coded_len]
            .iter()
            .map(|&m| step1.as_slice()[m].quadrature < 0.0),
    );
    let c3_hat = match genie {
        Some(info) => {
            let want = c3_blocks * code3.k();
            if info.c3.len() < want {
                return Err(validation(format!(
                    "genie c3 has {} bits, frame carries {want}",
                    info.c3.len()
                )));
            }
            info.c3.slice(0, want)
        }
        None => {
            let (c3, corrected) = code3.decode_blocks(&v3_hard)?;
            diag.c3_blocks_corrected = corrected;
            c3
        }
    };
    diag.v3_flips = count_flips(&v3_hard, &code3.encode_blocks(&c3_hat)?);

    // (iv) step-2 branches, in order, slot into the m′ positions.
    let mut branches: Vec<f64> = Vec::with_capacity(mprime.len());
    for s in step2 {
        branches.push(s.in_phase);
        branches.push(s.quadrature);
    }
    if mprime.len() % 2 == 1 && step2.len() == diag.step2_expected {
        diag.padded_branches = 1;
    }
    let mut v1_bits: Vec<u8> = step1.iter().map(|s| sign_bit(s.in_phase)).collect();
    for (slot, &m) in mprime.iter().enumerate() {
        v1_bits[m] = match branches.get(slot) {
            Some(&x) => sign_bit(x),
            None => {
                diag.missing_branches += 1;
                0
            }
        };
    }
    let v1_hard = BitVector::new(v1_bits)?;

    // (v) decode c1.
    let c1_hat = match genie {
        Some(info) => info.c1.clone(),
        None => {
            let (c1, corrected) = code12.decode_blocks(&v1_hard)?;
            diag.c1_blocks_corrected = corrected;
            c1
        }
    };
    diag.v1_flips = count_flips(&v1_hard, &code12.encode_blocks(&c1_hat)?);

    // (vi) c2 from the parity message.
    let c2_hat = xor(&cp_hat, &c1_hat)?;

    Ok(ReceiverOutput {
        c1_hat,
        c2_hat,
        c3_hat,
        cp_hat,
        detected,
        diagnostics: diag,
    })
}
