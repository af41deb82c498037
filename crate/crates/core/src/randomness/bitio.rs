//! Bit-level reader/writer and Elias gamma codes.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub(crate) struct BitWriter {
    bits: Vec<bool>,
}

impl BitWriter {
    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// Gamma code of `n >= 1`: `floor(log2 n)` zeros, then `n` in binary, MSB first.
    pub fn write_gamma(&mut self, n: u64) {
        debug_assert!(n >= 1, "gamma codes do not handle 0");
        let width = 64 - n.leading_zeros() as usize;
        self.bits.extend(std::iter::repeat_n(false, width - 1));
        self.bits.extend((0..width).rev().map(|i| n >> i & 1 == 1));
    }

    pub fn finish(self) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.bits.len());
        for (k, _) in self.bits.iter().enumerate().filter(|(_, &b)| b) {
            out.insert(k);
        }
        out
    }
}

pub(crate) fn gamma_len(n: u64) -> usize {
    2 * (64 - n.leading_zeros() as usize) - 1
}

pub(crate) struct BitReader<'a> {
    bits: &'a FixedBitSet,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a FixedBitSet) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.bits.len()
    }

    pub fn read(&mut self) -> Result<bool> {
        if self.at_end() {
            return Err(Error::Decode {
                offset: self.pos,
                message: "unexpected end of stream".into(),
            });
        }
        let b = self.bits.contains(self.pos);
        self.pos += 1;
        Ok(b)
    }

    pub fn read_gamma(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut zeros = 0;
        while !self.read()? {
            zeros += 1;
            if zeros >= 64 {
                return Err(Error::Decode {
                    offset: start,
                    message: "gamma prefix too long".into(),
                });
            }
        }
        let mut n = 1u64;
        for _ in 0..zeros {
            n = n << 1 | self.read()? as u64;
        }
        Ok(n)
    }
}
