//! Colex labeling of the unordered pair space and the characteristic
//! bitstring of a MAG's edge set.
//!
//! For composite indices `a < b` the pair index is `b(b-1)/2 + a`. This is
//! the only labeling used for certificates, so results compare across runs.

mod magc;

pub use magc::{deserialize, serialize, serialize_edges, MAGIC};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::mag::{Mag, MagSignature};

/// `C(n, 2)`.
#[inline]
pub fn pair_space_len(n: usize) -> usize {
    if n < 2 {
        0
    } else {
        n / 2 * (n - 1) + (n % 2) * ((n - 1) / 2)
    }
}

/// Colex index of the unordered pair `{a, b}` among `n` composite vertices.
pub fn pair_index(a: usize, b: usize, n: usize) -> Result<usize> {
    for idx in [a, b] {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, n });
        }
    }
    if a == b {
        return Err(Error::SelfLoop(a));
    }
    Ok(pair_index_unchecked(a, b))
}

#[inline]
pub(crate) fn pair_index_unchecked(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    pair_space_len(b) + a
}

/// Inverse of [`pair_index`]: returns `(a, b)` with `a < b`.
pub fn pair_from_index(k: usize, n: usize) -> Result<(usize, usize)> {
    if k >= pair_space_len(n) {
        return Err(Error::PairOutOfRange { index: k, n });
    }
    Ok(pair_from_index_unchecked(k))
}

#[inline]
pub(crate) fn pair_from_index_unchecked(k: usize) -> (usize, usize) {
    // b is the largest integer with b(b-1)/2 <= k. The float estimate is
    // off by at most a few units for large k; the loops make it exact.
    let tri = |b: u64| (b as u128 * b.saturating_sub(1) as u128 / 2) as u64;
    let k64 = k as u64;
    let mut b = ((1.0 + (8.0 * k as f64 + 1.0).sqrt()) / 2.0) as u64;
    if b < 1 << 32 && k64 < 1 << 62 {
        // tri(b + 1) fits in u64 here.
        let tri = |b: u64| b * (b - 1) / 2;
        b = b.max(1);
        while tri(b) > k64 {
            b -= 1;
        }
        while tri(b + 1) <= k64 {
            b += 1;
        }
    } else {
        while tri(b) > k64 {
            b -= 1;
        }
        while tri(b + 1) <= k64 {
            b += 1;
        }
    }
    (k - tri(b) as usize, b as usize)
}

/// The characteristic bitstring of `g`: bit `k` is set iff the pair with
/// index `k` is an edge.
pub fn characteristic_string(g: &Mag) -> FixedBitSet {
    g.bits().clone()
}

/// Inverse of [`characteristic_string`].
pub fn mag_from_characteristic(sig: MagSignature, bits: FixedBitSet) -> Result<Mag> {
    let expected = sig.pair_space_len();
    if bits.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: bits.len(),
        });
    }
    Ok(Mag::from_bits_unchecked(sig, bits))
}
