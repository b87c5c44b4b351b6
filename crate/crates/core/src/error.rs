use std::path::PathBuf;

use thiserror::Error;

use crate::code::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("empty pauli string")]
    Empty,
    #[error("invalid pauli character {found:?} at position {position}")]
    InvalidChar { position: usize, found: char },
    #[error("qubit index {qubit} out of range 1..={n}")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("pauli length mismatch: {left} vs {right} qubits")]
    LengthMismatch { left: usize, right: usize },
}

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("invalid stabilizer code: {0}")]
    Validation(ValidationReport),
    #[error("surface code dimensions must be odd and at least 3 (got d_x={d_x}, d_z={d_z})")]
    BadSurfaceDimensions { d_x: usize, d_z: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown code {0:?}")]
    UnknownCode(String),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Debug, Error)]
pub enum EnumeratorError {
    #[error("enumeration infeasible: stabilizer group has 2^{log2_size} elements, cap is {cap}")]
    CapExceeded { log2_size: usize, cap: u64 },
    #[error("enumerator role mismatch: expected {expected}, got {found}")]
    WrongRole { expected: &'static str, found: &'static str },
    #[error("enumerator length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("inconsistent enumerator: coefficient at weight {weight} is {detail}")]
    Inconsistent { weight: usize, detail: String },
    #[error("no logical operators (k = 0)")]
    NoLogicals,
}

#[derive(Debug, Error)]
pub enum DecodeError {
    #[error("maximum-likelihood decoding infeasible: 2^{log2_size} stabilizers per coset exceeds cap 2^{cap_log2}")]
    CapExceeded { log2_size: usize, cap_log2: usize },
    #[error("matching decoder needs a graph-like CSS code: {0}")]
    GeometryMissing(String),
    #[error("channel has zero error probability")]
    ZeroChannel,
    #[error("{0} defects exceed the exact matcher limit of {1}")]
    TooManyDefects(usize, usize),
    #[error("decoder correction does not reproduce the syndrome")]
    SyndromeMismatch,
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("unknown decoder selector {0:?} (expected \"ml\", \"mwpm\" or \"bd:e_g,e_z\")")]
    UnknownSelector(String),
    #[error("bounded-distance decoding has no syndrome-level decoder; use bd_accepts")]
    NotSyndromeDecoder,
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("exhaustive sweep needs {required} decodes, above the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("error class (j={j}, i={i}, l={l}) missing from table")]
    MissingClass { j: usize, i: usize, l: usize },
    #[error("non-integral C_j = {0}")]
    NonIntegral(String),
    #[error("bias must be finite for this operation")]
    InfiniteBias,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("profile length {found} does not match code length {expected}")]
    ProfileLength { expected: usize, found: usize },
    #[error(transparent)]
    Decode(#[from] DecodeError),
}
