use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature must have at least one aspect")]
    EmptySignature,
    #[error("aspect {aspect} has size 0")]
    ZeroAspect { aspect: usize },
    #[error("composite vertex count exceeds the limit of {limit}")]
    TooManyVertices { limit: usize },
    #[error("aspect {aspect} is not valid here (order {order}, aspect 1 is the vertex set)")]
    InvalidAspect { aspect: usize, order: usize },
    #[error("invalid composite vertex {coords:?}: {reason}")]
    InvalidVertex { coords: Vec<usize>, reason: String },
    #[error("composite index {index} out of range for {n} composite vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("self-loop on composite vertex {0}: simple MAGs have no loops")]
    SelfLoop(usize),
    #[error("pair index {index} out of range for {n} composite vertices")]
    PairOutOfRange { index: usize, n: usize },
    #[error("bitstring has {got} bits, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("format error at byte {offset}: {message}")]
    Format { offset: usize, message: String },
    #[error("malformed compressed stream at bit {offset}: {message}")]
    Decode { offset: usize, message: String },
    #[error("query violates the hypothesis j > i + 2 (i = {i}, j = {j})")]
    Hypothesis { i: usize, j: usize },
    #[error("no noncontiguous witness: the endpoints are at distance greater than 2")]
    NoWitness,
    #[error("at least {needed} composite vertices required, got {got}")]
    TooFewVertices { needed: usize, got: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("batch is empty")]
    EmptyBatch,
    #[error("batch mixes signatures {0:?} and {1:?}")]
    MixedSignatures(Vec<usize>, Vec<usize>),
}

impl Error {
    pub(crate) fn format(offset: usize, message: impl Into<String>) -> Self {
        Error::Format {
            offset,
            message: message.into(),
        }
    }
}
