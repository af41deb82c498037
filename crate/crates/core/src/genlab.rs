//! Seeded MAG generators.
//!
//! All randomness comes from a ChaCha8 keystream seeded by the generator seed.
//! Pair-space bit `k` is bit `k % 64` of the keystream's 64-bit word `k / 64`,
//! so any bit can be computed without generating its predecessors and
//! chunked parallel generation is bit-identical to sequential generation.
//!
//! These are pseudorandom strings: a machine that knows the seed compresses
//! them, but no generic compressor exploits that.

use fixedbitset::FixedBitSet;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::codec::pair_from_index_unchecked;
use crate::error::{Error, Result};
use crate::mag::{Mag, MagSignature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// Every pair independently with probability 1/2.
    UniformHalf,
    Empty,
    Complete,
    /// Pairs whose time-aspect gap is at most `window`, each with probability 1/2.
    Banded {
        window: usize,
    },
    /// A fixed pseudorandom `period`-bit pattern tiled over the pair space.
    Periodic {
        period: usize,
    },
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::UniformHalf => "uniform-half",
            GeneratorKind::Empty => "empty",
            GeneratorKind::Complete => "complete",
            GeneratorKind::Banded { .. } => "banded",
            GeneratorKind::Periodic { .. } => "periodic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSpec {
    #[serde(skip)]
    pub sig: MagSignature,
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(sig: MagSignature, kind: GeneratorKind, seed: u64) -> Result<Self> {
        match kind {
            GeneratorKind::Banded { .. } if sig.time_aspect().is_none() => {
                return Err(Error::Config(
                    "banded generation needs a time aspect".into(),
                ))
            }
            GeneratorKind::Periodic { period: 0 } => {
                return Err(Error::Config("period must be at least 1".into()))
            }
            _ => {}
        }
        Ok(GeneratorSpec { sig, kind, seed })
    }
}

/// Words of the keystream per parallel chunk.
const CHUNK_WORDS: usize = 1 << 12;

/// Keystream words `start..start + count` for `seed`.
fn keystream_words(seed: u64, start: usize, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // word_pos counts 32-bit words.
    rng.set_word_pos(2 * start as u128);
    (0..count).map(|_| rng.next_u64()).collect()
}

/// Single addressable keystream bit.
pub fn stream_bit(seed: u64, k: usize) -> bool {
    keystream_words(seed, k / 64, 1)[0] >> (k % 64) & 1 == 1
}

/// The first `len` keystream bits, generated in parallel chunks.
fn stream_bits(seed: u64, len: usize) -> FixedBitSet {
    let words = len.div_ceil(64);
    let chunks: Vec<Vec<u64>> = (0..words.div_ceil(CHUNK_WORDS))
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK_WORDS;
            keystream_words(seed, start, CHUNK_WORDS.min(words - start))
        })
        .collect();
    let mut bits = FixedBitSet::with_capacity(len);
    for (w, word) in chunks.iter().flatten().enumerate() {
        let mut word = *word;
        while word != 0 {
            let k = w * 64 + word.trailing_zeros() as usize;
            if k >= len {
                break;
            }
            bits.insert(k);
            word &= word - 1;
        }
    }
    bits
}

/// Unbiased draw from `0..n` (`n > 0`) by rejection.
pub(crate) fn uniform_below(rng: &mut impl RngCore, n: u64) -> u64 {
    let zone = u64::MAX - u64::MAX % n;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % n;
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Mag> {
    let sig = spec.sig.clone();
    let len = sig.pair_space_len();
    let bits = match spec.kind {
        GeneratorKind::UniformHalf => stream_bits(spec.seed, len),
        GeneratorKind::Empty => FixedBitSet::with_capacity(len),
        GeneratorKind::Complete => {
            let mut b = FixedBitSet::with_capacity(len);
            b.insert_range(..);
            b
        }
        GeneratorKind::Banded { window } => {
            let h = sig
                .time_aspect()
                .ok_or_else(|| Error::Config("banded generation needs a time aspect".into()))?;
            let mut b = stream_bits(spec.seed, len);
            let far: Vec<usize> = b
                .ones()
                .filter(|&k| {
                    let (x, y) = pair_from_index_unchecked(k);
                    sig.coord_of(x, h).abs_diff(sig.coord_of(y, h)) > window
                })
                .collect();
            for k in far {
                b.remove(k);
            }
            b
        }
        GeneratorKind::Periodic { period } => {
            if period == 0 {
                return Err(Error::Config("period must be at least 1".into()));
            }
            let pattern = stream_bits(spec.seed, period);
            let mut b = FixedBitSet::with_capacity(len);
            for k in (0..len).filter(|k| pattern.contains(k % period)) {
                b.insert(k);
            }
            b
        }
    };
    Ok(Mag::from_bits_unchecked(sig, bits))
}
