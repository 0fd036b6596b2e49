use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{func}: argument {x} outside the domain")]
    Domain { func: &'static str, x: f64 },

    #[error("{func}({x}): tail estimate {estimate:e} above target after {terms} terms")]
    NonConvergence {
        func: &'static str,
        x: f64,
        terms: usize,
        estimate: f64,
    },

    #[error("quadrature for {func}({x}) did not settle: last levels differ by {disagreement:e}")]
    Quadrature {
        func: &'static str,
        x: f64,
        disagreement: f64,
    },

    #[error("gamma_{n}: the two series disagree ({first} vs {second})")]
    Disagreement { n: usize, first: f64, second: f64 },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("naive transform refused: length {len} exceeds guard {max}")]
    LengthGuard { len: usize, max: usize },

    #[error("decimation needs an even-length input, got {0}")]
    OddLength(usize),

    #[error("character j={j}: divisor {value:e} is numerically zero")]
    NearZeroDivisor { j: usize, value: f64 },

    #[error("assembled sum has imaginary residue {value:e} (limit {limit:e})")]
    ImaginaryResidue { value: f64, limit: f64 },

    #[error("{0}")]
    OutOfRange(String),

    #[error("b*q+1 overflows 64 bits for b={b}, q={q}")]
    Overflow { b: u64, q: u64 },

    #[error("merge: gap at k={at}")]
    Gap { at: u64 },

    #[error("merge: overlap at k={at}")]
    Overlap { at: u64 },

    #[error("merge: {field} differs between parts")]
    Mismatch { field: &'static str },

    #[error("table for q={q} tag={tag} does not cover the full range")]
    IncompleteTable { q: u64, tag: String },

    #[error("cache format error at line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("unsupported cache format version {0}")]
    FormatVersion(String),

    #[error("checksum mismatch: residual {residual:e} exceeds tolerance {tolerance:e}")]
    ChecksumMismatch { residual: f64, tolerance: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
