//! MultiAspect Graph (MAG) engine.
//!
//! A MAG is a graph whose vertices are tuples drawn from a list of finite
//! sets called aspects: the vertex set, time instants, layers and so on. This
//! crate stores a simple (undirected, loop-free) MAG as the characteristic
//! bitstring of its edge set over the `C(N, 2)` unordered pairs of composite
//! vertices, and provides:
//!
//! * [`codec`]: the pair labeling and the `.magc` file format,
//! * [`randomness`]: compression-based lower bounds on randomness deficiency,
//! * [`topology`]: degree concentration, common neighbours, diameter,
//!   a connectivity lower bound and exact rigidity,
//! * [`temporal`]: transtemporal / crosslayer edge detection and witnesses,
//! * [`genlab`]: seeded generators for random and planted families,
//! * [`report`]: the aggregated JSON analysis report.

pub mod codec;
pub mod error;
pub mod genlab;
pub mod mag;
pub mod randomness;
pub mod report;
pub mod temporal;
pub mod topology;

pub use fixedbitset::FixedBitSet as BitString;

pub use codec::{pair_from_index, pair_index};
pub use error::{Error, Result};
pub use genlab::{generate, GeneratorKind, GeneratorSpec};
pub use mag::{CompositeEdge, CompositeVertex, Mag, MagBuilder, MagSignature};
pub use randomness::{
    deficiency_certificate, passes_log_randomness_test, Compressor, DeficiencyCertificate,
    RandomnessThreshold, ReferenceCompressor,
};
pub use report::{analyze, batch_summary, AnalysisConfig, AnalysisReport, BatchSummary};
pub use temporal::{
    find_noncontiguous_witness, is_noncontiguous_edge, snapshot_loss, NoncontiguityQuery,
    WitnessResult,
};
pub use topology::{Diameter, Rigidity, TopologyReport};
