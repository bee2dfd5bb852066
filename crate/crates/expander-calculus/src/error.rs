//! Error type shared across the library. Variants map onto the CLI exit
//! codes: verification failures are reported by the verify module itself,
//! usage errors by clap, and `Overflow`/`TooLarge`/`CapExceeded` exit 3.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is not regular: vertex {vertex} has degree {found}, expected {expected}")]
    NonRegular {
        vertex: usize,
        found: u64,
        expected: u64,
    },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("degree mismatch: deg(G1) = {d1} but |V(G2)| = {n2}")]
    DegreeMismatch { d1: u64, n2: usize },
    #[error("matrix of order {n} exceeds the dense threshold {threshold}")]
    TooLarge { n: usize, threshold: usize },
    #[error("enumeration would need {needed} configurations, cap is {cap}")]
    CapExceeded { needed: f64, cap: u64 },
    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("no code found with the requested distance after {0} tries")]
    NotFound(u64),
    #[error("cannot certify result at any tried precision: {0}")]
    PrecisionFailure(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
