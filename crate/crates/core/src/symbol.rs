//! Channel symbols and tagged symbol streams.

use std::io::Write;

use crate::error::Result;
use crate::format::format_significant;

/// Provenance of a transmitted symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolTag {
    /// Step 1, parity bit 0: horizontal point carrying `v1`.
    Parity0,
    /// Step 1, parity bit 1: vertical point carrying `v3`.
    Parity1,
    /// Step 2 QPSK symbol with both branches in use.
    Step2,
    /// Step 2 symbol whose quadrature branch is zero padding.
    Pad,
}

impl SymbolTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SymbolTag::Parity0 => "parity0",
            SymbolTag::Parity1 => "parity1",
            SymbolTag::Step2 => "step2",
            SymbolTag::Pad => "pad",
        }
    }

    pub fn step(self) -> u8 {
        match self {
            SymbolTag::Parity0 | SymbolTag::Parity1 => 1,
            SymbolTag::Step2 | SymbolTag::Pad => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symbol {
    pub in_phase: f64,
    pub quadrature: f64,
    pub tag: SymbolTag,
}

impl Symbol {
    pub fn new(in_phase: f64, quadrature: f64, tag: SymbolTag) -> Self {
        Self {
            in_phase,
            quadrature,
            tag,
        }
    }

    pub fn point(&self) -> [f64; 2] {
        [self.in_phase, self.quadrature]
    }

    pub fn energy(&self) -> f64 {
        self.in_phase * self.in_phase + self.quadrature * self.quadrature
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymbolStream(Vec<Symbol>);

impl SymbolStream {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Self(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn mean_energy(&self) -> f64 {
        if self.0.is_empty() {
            return 0.0;
        }
        self.0.iter().map(Symbol::energy).sum::<f64>() / self.0.len() as f64
    }
}

impl FromIterator<Symbol> for SymbolStream {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a SymbolStream {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

pub const FRAME_CSV_HEADER: &str = "step,index,in_phase,quadrature,tag";

/// Writes step-1 then step-2 symbols as `step,index,in_phase,quadrature,tag`,
/// `index` counting from 0 within each step.
pub fn write_frame_csv<W: Write>(
    mut out: W,
    step1: &SymbolStream,
    step2: &SymbolStream,
) -> Result<()> {
    writeln!(out, "{FRAME_CSV_HEADER}")?;
    for stream in [step1, step2] {
        for (i, s) in stream.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                s.tag.step(),
                i,
                format_significant(s.in_phase, 12),
                format_significant(s.quadrature, 12),
                s.tag.as_str()
            )?;
        }
    }
    Ok(())
}
