//! Fixtures shared by the benchmarks.

use cisc_core::code::BitVector;
use cisc_core::modem::{CiscCodec, Transmission};
use cisc_core::rng::rng_from_seed;
use cisc_core::LinearCode;

/// Hamming(7,4) for all streams at α = 1.
pub fn hamming_codec() -> CiscCodec {
    CiscCodec::new(
        LinearCode::by_name("hamming74").unwrap(),
        LinearCode::by_name("hamming74").unwrap(),
        1.0,
    )
    .unwrap()
}

/// Random sources sized for `blocks` codewords and the frame they produce.
pub fn sources(codec: &CiscCodec, blocks: usize, seed: u64) -> (BitVector, BitVector, BitVector) {
    let mut rng = rng_from_seed(seed);
    let k = codec.source_len(blocks);
    let c1 = BitVector::random(k, &mut rng);
    let c2 = BitVector::random(k, &mut rng);
    let c3 = BitVector::random(codec.max_c3_len(blocks), &mut rng);
    (c1, c2, c3)
}

pub fn transmission(codec: &CiscCodec, blocks: usize, seed: u64) -> Transmission {
    let (c1, c2, c3) = sources(codec, blocks, seed);
    codec.transmit(&c1, &c2, &c3).unwrap()
}
