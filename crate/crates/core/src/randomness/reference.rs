//! The built-in reference compressor.
//!
//! Stage 1 run-length codes the input; stage 2 runs a greedy sliding-window
//! repeated-substring pass over the run sequence. The output is whichever of
//! the two framings is shorter:
//!
//! ```text
//! 0 <input bits>                       raw escape, |x| + 1 bits
//! 1 <first bit> <token>*               tokens until the code ends
//!   token = 0 gamma(run)               one literal run
//!         | 1 gamma(dist) gamma(len)   copy `len` runs from `dist` runs back
//! ```
//!
//! Each token is prefix-free, so the decoder reads tokens until the code is
//! exhausted; the code's own length is the only side information.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::bitio::{gamma_len, BitReader, BitWriter};
use super::Compressor;
use crate::error::{Error, Result};

pub const REFERENCE_ID: &str = "rle-gamma-lz/1";

/// Decoded outputs longer than this are treated as malformed.
const MAX_DECODED_BITS: u64 = 1 << 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceCompressor {
    /// Maximum match distance, in runs.
    pub window: usize,
    /// Hash-chain candidates examined per position.
    pub max_candidates: usize,
}

impl Default for ReferenceCompressor {
    fn default() -> Self {
        ReferenceCompressor {
            window: 1 << 16,
            max_candidates: 32,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Literal(u64),
    Match { dist: usize, len: usize },
}

fn run_lengths(x: &FixedBitSet) -> Vec<u64> {
    let mut runs = Vec::new();
    let mut current = x.contains(0);
    let mut len = 0u64;
    for k in 0..x.len() {
        let b = x.contains(k);
        if b == current {
            len += 1;
        } else {
            runs.push(len);
            current = b;
            len = 1;
        }
    }
    if len > 0 {
        runs.push(len);
    }
    runs
}

fn literal_cost(run: u64) -> usize {
    1 + gamma_len(run)
}

impl ReferenceCompressor {
    fn parse(&self, runs: &[u64]) -> Vec<Token> {
        let n = runs.len();
        let mut chains: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
        let insert = |chains: &mut HashMap<_, Vec<usize>>, p: usize| {
            if p + 1 < n {
                chains.entry((runs[p], runs[p + 1])).or_default().push(p);
            }
        };
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < n {
            let mut best = (0usize, 0usize);
            if i + 1 < n {
                if let Some(cands) = chains.get(&(runs[i], runs[i + 1])) {
                    for &c in cands.iter().rev().take(self.max_candidates) {
                        if i - c > self.window {
                            break;
                        }
                        let len = runs[c..]
                            .iter()
                            .zip(&runs[i..])
                            .take_while(|(a, b)| a == b)
                            .count();
                        if len > best.1 {
                            best = (i - c, len);
                        }
                    }
                }
            }
            let (dist, len) = best;
            if len >= 2 {
                let literal: usize = runs[i..i + len].iter().map(|&r| literal_cost(r)).sum();
                let copy = 1 + gamma_len(dist as u64) + gamma_len(len as u64);
                if copy < literal {
                    tokens.push(Token::Match { dist, len });
                    for p in i..i + len {
                        insert(&mut chains, p);
                    }
                    i += len;
                    continue;
                }
            }
            tokens.push(Token::Literal(runs[i]));
            insert(&mut chains, i);
            i += 1;
        }
        tokens
    }
}

impl Compressor for ReferenceCompressor {
    fn id(&self) -> &str {
        REFERENCE_ID
    }

    fn compress(&self, x: &FixedBitSet) -> FixedBitSet {
        let raw_len = x.len() + 1;
        if !x.is_empty() {
            let mut w = BitWriter::default();
            w.push(true);
            w.push(x.contains(0));
            for tok in self.parse(&run_lengths(x)) {
                if w.len() >= raw_len {
                    break;
                }
                match tok {
                    Token::Literal(run) => {
                        w.push(false);
                        w.write_gamma(run);
                    }
                    Token::Match { dist, len } => {
                        w.push(true);
                        w.write_gamma(dist as u64);
                        w.write_gamma(len as u64);
                    }
                }
            }
            if w.len() < raw_len {
                return w.finish();
            }
        }
        let mut out = FixedBitSet::with_capacity(raw_len);
        for k in x.ones() {
            out.insert(k + 1);
        }
        out
    }

    fn decompress(&self, code: &FixedBitSet) -> Result<FixedBitSet> {
        let mut r = BitReader::new(code);
        if !r.read()? {
            let mut out = FixedBitSet::with_capacity(code.len() - 1);
            for k in code.ones() {
                out.insert(k - 1);
            }
            return Ok(out);
        }
        let first = r.read()?;
        let mut runs: Vec<u64> = Vec::new();
        let mut total = 0u64;
        while !r.at_end() {
            let at = r.pos();
            let err = |message: &str| Error::Decode {
                offset: at,
                message: message.into(),
            };
            if r.read()? {
                let dist = r.read_gamma()? as usize;
                let len = r.read_gamma()?;
                if dist > runs.len() {
                    return Err(err("match distance before start of stream"));
                }
                if len > MAX_DECODED_BITS {
                    return Err(err("decoded output too long"));
                }
                for _ in 0..len {
                    let run = runs[runs.len() - dist];
                    total += run;
                    runs.push(run);
                }
            } else {
                let run = r.read_gamma()?;
                total += run;
                runs.push(run);
            }
            if total > MAX_DECODED_BITS {
                return Err(err("decoded output too long"));
            }
        }
        let mut out = FixedBitSet::with_capacity(total as usize);
        let mut pos = 0usize;
        let mut bit = first;
        for run in runs {
            if bit {
                out.insert_range(pos..pos + run as usize);
            }
            pos += run as usize;
            bit = !bit;
        }
        Ok(out)
    }
}
