//! Compression-based randomness-deficiency certificates.
//!
//! Any lossless compressor's output length upper-bounds the plain complexity
//! of its input up to an additive constant that depends on the compressor
//! model. So `raw_len - compressed_len` lower-bounds the deficiency `δ` for
//! which the characteristic string can still be `δ`-C-random. A certificate
//! can refute randomness; it can never prove it.
//!
//! The number of composite vertices is the conditioning information: it comes
//! from the signature and is never part of the compressed payload.

mod bitio;
mod reference;

pub use reference::{ReferenceCompressor, REFERENCE_ID};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mag::Mag;

/// A lossless bitstring compressor.
pub trait Compressor: Send + Sync {
    /// Name and version tag recorded in certificates.
    fn id(&self) -> &str;
    fn compress(&self, x: &FixedBitSet) -> FixedBitSet;
    fn decompress(&self, code: &FixedBitSet) -> Result<FixedBitSet>;
}

/// Lower bound on randomness deficiency, modulo the compressor-model constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeficiencyCertificate {
    pub raw_len: u64,
    pub compressed_len: u64,
    pub deficiency_lb: u64,
    pub compressor_id: String,
    pub n_composite: u64,
}

impl DeficiencyCertificate {
    pub fn from_lengths(n_composite: u64, compressed_len: u64, compressor_id: &str) -> Self {
        let raw_len = if n_composite < 2 {
            0
        } else {
            n_composite * (n_composite - 1) / 2
        };
        DeficiencyCertificate {
            raw_len,
            compressed_len,
            deficiency_lb: raw_len.saturating_sub(compressed_len),
            compressor_id: compressor_id.to_string(),
            n_composite,
        }
    }

    /// `log2 N`, the scale of the O(log N) deficiency class.
    pub fn log2_n(&self) -> f64 {
        (self.n_composite as f64).log2()
    }
}

/// Coefficient `c` of the deficiency budget `δ(N) = c · log2 N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RandomnessThreshold {
    c: f64,
}

impl RandomnessThreshold {
    pub const DEFAULT_C: f64 = 3.0;

    pub fn new(c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Config(format!(
                "deficiency coefficient must be positive, got {c}"
            )));
        }
        Ok(RandomnessThreshold { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn budget(&self, n_composite: u64) -> f64 {
        self.c * (n_composite as f64).log2()
    }
}

impl Default for RandomnessThreshold {
    fn default() -> Self {
        RandomnessThreshold { c: Self::DEFAULT_C }
    }
}

/// Certificate for `g` under the reference compressor.
pub fn deficiency_certificate(g: &Mag) -> DeficiencyCertificate {
    deficiency_certificate_with(g, &ReferenceCompressor::default())
}

pub fn deficiency_certificate_with(g: &Mag, compressor: &dyn Compressor) -> DeficiencyCertificate {
    let code = compressor.compress(g.bits());
    DeficiencyCertificate::from_lengths(g.n_composite() as u64, code.len() as u64, compressor.id())
}

/// True iff the certificate does not refute `O(log N)`-C-randomness at the
/// given coefficient, i.e. `deficiency_lb <= c · log2 N`.
pub fn passes_log_randomness_test(cert: &DeficiencyCertificate, thr: &RandomnessThreshold) -> bool {
    cert.deficiency_lb as f64 <= thr.budget(cert.n_composite)
}
