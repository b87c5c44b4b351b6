//! Performance analysis toolkit for stabilizer quantum codes.
//!
//! The crate covers the whole pipeline from a code description to logical
//! error rate curves:
//!
//! - [`pauli`], [`code`], [`surface`]: binary symplectic Pauli algebra,
//!   validated stabilizer codes and the planar surface-code builder.
//! - [`enumerator`]: stabilizer, normalizer and undetectable-error weight
//!   enumerators linked by the quantum MacWilliams identity.
//! - [`decoder`]: bounded-distance acceptance, degenerate maximum-likelihood
//!   coset decoding and minimum-weight perfect matching.
//! - [`beta`]: exhaustive per-class failure fractions and the correctable
//!   fractions `β_j` derived from them.
//! - [`performance`]: closed-form logical error rates, bounds, asymptotes and
//!   code-effective thresholds.
//! - [`montecarlo`]: seeded, shard-invariant simulation of the same rates.

pub mod beta;
pub mod channel;
pub mod code;
pub mod codefile;
pub mod decoder;
pub mod enumerator;
pub mod error;
mod gf2;
pub mod pauli;
pub mod montecarlo;
pub mod performance;
pub mod registry;
pub mod surface;

pub use code::{CodeSpec, Distance, ResidualClass, StabilizerCode, Syndrome, ValidationReport};
pub use channel::{ChannelFamily, QubitChannel};
pub use error::{AnalysisError, CodeError, DecodeError, EnumeratorError, PauliError};
pub use pauli::{Pauli, PauliOperator};
