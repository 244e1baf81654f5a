//! Binary linear block codes over GF(2).
//!
//! Bit `i` of a vector is the 1-based component `i + 1`; index 0 is the
//! first transmitted bit. Generator matrices are stored row-major as `k × n`
//! so a codeword is `v = c·G`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use crate::error::{validation, Error, Result};

/// An ordered sequence of bits, each stored as `0` or `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector(Vec<u8>);

impl BitVector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(validation(format!(
                "bit {pos} is {} (expected 0 or 1)",
                bits[pos]
            )));
        }
        Ok(Self(bits))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        Self(bits.into_iter().map(u8::from).collect())
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| rng.random_range(0..=1u8)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.0.get(i).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// Positions holding a 1, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        xor(self, other)
    }

    /// Number of positions where the two vectors differ.
    pub fn hamming_distance(&self, other: &Self) -> Result<usize> {
        Ok(self.xor(other)?.count_ones())
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a BitVector>) -> Self {
        Self(
            parts
                .into_iter()
                .flat_map(|p| p.0.iter().copied())
                .collect(),
        )
    }

    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self(self.0[start..end].to_vec())
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(validation(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Self)
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bools(iter)
    }
}

/// Component-wise mod-2 sum.
pub fn xor(a: &BitVector, b: &BitVector) -> Result<BitVector> {
    if a.len() != b.len() {
        return Err(validation(format!(
            "xor of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(BitVector(
        a.0.iter().zip(&b.0).map(|(x, y)| x ^ y).collect(),
    ))
}

/// A full-rank `k × n` binary generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    k: usize,
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl GeneratorMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(validation("generator matrix has no rows"));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(validation("generator rows have unequal lengths"));
        }
        if rows.iter().flatten().any(|&b| b > 1) {
            return Err(validation("generator entries must be 0 or 1"));
        }
        if k > n {
            return Err(validation(format!("k = {k} exceeds n = {n}")));
        }
        let g = Self { k, n, rows };
        let rank = g.rank();
        if rank != k {
            return Err(validation(format!(
                "generator has rank {rank} over GF(2), needs {k}"
            )));
        }
        Ok(g)
    }

    pub fn identity(k: usize) -> Result<Self> {
        Self::new(
            (0..k)
                .map(|i| (0..k).map(|j| u8::from(i == j)).collect())
                .collect(),
        )
    }

    /// The `1 × n` all-ones generator.
    pub fn repetition(n: usize) -> Result<Self> {
        Self::new(vec![vec![1; n]])
    }

    /// Systematic Hamming(7,4): `[I_4 | P]`.
    pub fn hamming74() -> Self {
        let rows = vec![
            vec![1, 0, 0, 0, 1, 1, 0],
            vec![0, 1, 0, 0, 0, 1, 1],
            vec![0, 0, 1, 0, 1, 1, 1],
            vec![0, 0, 0, 1, 1, 0, 1],
        ];
        Self::new(rows).expect("Hamming(7,4) generator is full rank")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// Rank over GF(2) by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let Some(pivot) = (rank..m.len()).find(|&r| m[r][col] == 1) else {
                continue;
            };
            m.swap(rank, pivot);
            let pivot_row = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[col] == 1 {
                    row.iter_mut().zip(&pivot_row).for_each(|(a, b)| *a ^= b);
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }

    /// `v_m = Σ_i c_i g_{i,m} mod 2`.
    pub fn encode(&self, c: &BitVector) -> Result<BitVector> {
        if c.len() != self.k {
            return Err(validation(format!(
                "message length {} but k = {}",
                c.len(),
                self.k
            )));
        }
        let mut v = vec![0u8; self.n];
        for (row, _) in self.rows.iter().zip(c.iter()).filter(|(_, bit)| *bit == 1) {
            v.iter_mut().zip(row).for_each(|(a, b)| *a ^= b);
        }
        Ok(BitVector(v))
    }

    /// Plain-text form: `"k n"` then `k` rows of `n` space-separated digits.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line: hline,
                    msg: format!("bad dimension {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        let [k, n] = dims[..] else {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be \"k n\"".into(),
            });
        };
        let mut rows = Vec::with_capacity(k);
        for (line, text) in lines {
            let row = text
                .split_whitespace()
                .map(|t| match t {
                    "0" => Ok(0u8),
                    "1" => Ok(1u8),
                    _ => Err(Error::Parse {
                        line,
                        msg: format!("entry {t:?} is not 0 or 1"),
                    }),
                })
                .collect::<Result<Vec<u8>>>()?;
            if row.len() != n {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {n} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != k {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header declares {k} rows, found {}", rows.len()),
            });
        }
        Self::new(rows)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.k, self.n);
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|b| b.to_string()).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

pub fn encode(g: &GeneratorMatrix, c: &BitVector) -> Result<BitVector> {
    g.encode(c)
}

/// Re-encodes a recovered parity message. For a linear code,
/// `encode(c1 ⊕ c2) = encode(c1) ⊕ encode(c2)`, so this reproduces the
/// transmitted parity codeword whenever the message is right.
pub fn reconstruct_parity_codeword(g: &GeneratorMatrix, c_hat_p: &BitVector) -> Result<BitVector> {
    g.encode(c_hat_p)
}

/// Largest `k` for which a full codebook is kept for hard decoding.
pub const MAX_DECODABLE_K: usize = 16;

/// A named generator matrix applied block by block, with a brute-force
/// minimum-distance hard decoder.
#[derive(Debug, Clone)]
pub struct LinearCode {
    name: String,
    generator: GeneratorMatrix,
    codebook: Vec<BitVector>,
}

impl LinearCode {
    pub fn new(name: impl Into<String>, generator: GeneratorMatrix) -> Result<Self> {
        let k = generator.k();
        if k > MAX_DECODABLE_K {
            return Err(validation(format!(
                "k = {k} is too large for exhaustive decoding (max {MAX_DECODABLE_K})"
            )));
        }
        let codebook = (0..1u32 << k)
            .map(|m| generator.encode(&message_bits(m, k)))
            .collect::<Result<_>>()?;
        Ok(Self {
            name: name.into(),
            generator,
            codebook,
        })
    }

    /// Resolves a registered code name.
    ///
    /// `identity` (k = n = 4), `repetition3`, `hamming74`, plus the
    /// parameterized forms `identity:<k>`, `repetition:<n>` and
    /// `file:<path>` for a generator in the plain-text format.
    pub fn by_name(name: &str) -> Result<Self> {
        let generator = match name {
            "identity" => GeneratorMatrix::identity(4)?,
            "repetition3" => GeneratorMatrix::repetition(3)?,
            "hamming74" => GeneratorMatrix::hamming74(),
            other => match other.split_once(':') {
                Some(("identity", k)) => GeneratorMatrix::identity(parse_size(k)?)?,
                Some(("repetition", n)) => GeneratorMatrix::repetition(parse_size(n)?)?,
                Some(("file", path)) => GeneratorMatrix::load(path)?,
                _ => return Err(validation(format!("unknown code {other:?}"))),
            },
        };
        Self::new(name, generator)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generator(&self) -> &GeneratorMatrix {
        &self.generator
    }

    pub fn k(&self) -> usize {
        self.generator.k()
    }

    pub fn n(&self) -> usize {
        self.generator.n()
    }

    /// Encodes consecutive `k`-bit blocks; equivalent to a block-diagonal generator.
    pub fn encode_blocks(&self, c: &BitVector) -> Result<BitVector> {
        let k = self.k();
        if c.len() % k != 0 {
            return Err(validation(format!(
                "message length {} is not a multiple of k = {k}",
                c.len()
            )));
        }
        let blocks = c
            .as_slice()
            .chunks(k)
            .map(|chunk| self.generator.encode(&BitVector(chunk.to_vec())))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitVector::concat(&blocks))
    }

    /// Nearest-codeword decoding of consecutive `n`-bit blocks. Ties go to
    /// the lowest message index. Also returns how many blocks were not
    /// codewords on arrival.
    pub fn decode_blocks(&self, received: &BitVector) -> Result<(BitVector, usize)> {
        let (k, n) = (self.k(), self.n());
        if received.len() % n != 0 {
            return Err(validation(format!(
                "received length {} is not a multiple of n = {n}",
                received.len()
            )));
        }
        let mut out = Vec::with_capacity(received.len() / n * k);
        let mut corrected = 0;
        for block in received.as_slice().chunks(n) {
            let (best, dist) = self
                .codebook
                .iter()
                .enumerate()
                .map(|(m, cw)| (m, cw.0.iter().zip(block).filter(|(a, b)| a != b).count()))
                .min_by_key(|&(m, d)| (d, m))
                .expect("codebook is never empty");
            if dist > 0 {
                corrected += 1;
            }
            out.extend(message_bits(best as u32, k).0);
        }
        Ok((BitVector(out), corrected))
    }
}

fn parse_size(s: &str) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(validation(format!("invalid code size {s:?}"))),
    }
}

/// Message index `m` as `k` bits, most significant first.
fn message_bits(m: u32, k: usize) -> BitVector {
    BitVector((0..k).map(|i| ((m >> (k - 1 - i)) & 1) as u8).collect())
}

/// Built-in codes exercised by the roundtrip checks.
pub fn registered_codes() -> Vec<LinearCode> {
    ["identity", "repetition3", "hamming74"]
        .into_iter()
        .map(|n| LinearCode::by_name(n).expect("built-in code"))
        .collect()
}
