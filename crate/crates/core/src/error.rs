//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime (need an odd prime >= 3)")]
    NotAnOddPrime(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("tensor length {found}, expected {expected}")]
    TensorLength { expected: usize, found: usize },
    #[error("tensor length {0} is odd, cannot interleave halves")]
    OddTensorLength(usize),
    #[error("out of supported range: {0}")]
    OutOfRange(String),
    #[error("invalid ordered partition: {0}")]
    InvalidPartition(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
