//! Cocktail intra-symbol-code (CISC) coded modulation over AWGN.
//!
//! * [`mi`]: finite-alphabet mutual information (Gauss–Hermite quadrature and
//!   a seeded Monte Carlo oracle), Gaussian entropy, low-SNR slopes.
//! * [`code`]: binary linear block codes over GF(2).
//! * [`modem`]: rhombic constellation, two-step transmitter and the
//!   decoupling receiver.
//! * [`channel`]: seeded AWGN.
//! * [`rates`]: reliable-bit-rate formulas, SNR sweeps and CSV output.
//! * [`sim`]: end-to-end transmit, channel, receive runs with error counts.
//!
//! SNR is `E / σ_N²` with `σ_N²` the total noise power of a complex sample,
//! so each real dimension carries variance `σ_N² / 2`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod code;
pub mod error;
pub mod format;
pub mod mi;
pub mod modem;
pub mod quadrature;
pub mod rates;
pub mod rng;
pub mod sim;
pub mod symbol;

pub use channel::ChannelConfig;
pub use code::{BitVector, GeneratorMatrix, LinearCode};
pub use error::{Error, Result};
pub use mi::{Constellation, MiEstimate, MiMethod, SnrValue};
pub use modem::{
    CiscCodec, DecodeMode, ReceiverOutput, RhombicConstellation, RhombicPoint, TransmissionFrame,
};
pub use rates::{GridSpec, RateCurve, RatePoint};
pub use symbol::{Symbol, SymbolStream, SymbolTag};
