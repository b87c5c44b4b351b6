//! Decoders and the decode-and-classify harness.

pub mod bd;
pub mod ml;
pub mod mwpm;

use std::fmt;
use std::str::FromStr;

pub use bd::bd_accepts;
pub use ml::MlDecoder;
pub use mwpm::{MwpmDecoder, TieOrder};

use crate::channel::QubitChannel;
use crate::code::{ResidualClass, StabilizerCode, Syndrome};
use crate::error::DecodeError;
use crate::pauli::PauliOperator;

/// Decoder choice as written on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderSelector {
    Bd { e_g: usize, e_z: usize },
    Ml,
    Mwpm,
}

impl FromStr for DecoderSelector {
    type Err = DecodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DecodeError::UnknownSelector(s.to_string());
        match s {
            "ml" => Ok(DecoderSelector::Ml),
            "mwpm" => Ok(DecoderSelector::Mwpm),
            _ => {
                let (a, b) = s.strip_prefix("bd:").and_then(|r| r.split_once(',')).ok_or_else(bad)?;
                Ok(DecoderSelector::Bd {
                    e_g: a.trim().parse().map_err(|_| bad())?,
                    e_z: b.trim().parse().map_err(|_| bad())?,
                })
            }
        }
    }
}

impl fmt::Display for DecoderSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecoderSelector::Bd { e_g, e_z } => write!(f, "bd:{e_g},{e_z}"),
            DecoderSelector::Ml => f.write_str("ml"),
            DecoderSelector::Mwpm => f.write_str("mwpm"),
        }
    }
}

/// A decoder's answer to a syndrome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    pub operator: PauliOperator,
    /// Set when an equally good alternative was discarded.
    pub tie: bool,
}

/// Syndrome-level decoder. Implementations are immutable and thread-safe.
pub trait SyndromeDecoder: Sync + Send {
    fn code(&self) -> &StabilizerCode;
    fn decode(&self, s: &Syndrome) -> Result<Correction, DecodeError>;

    /// Matching decoders expose their graphs for mask-level fast paths.
    fn as_matching(&self) -> Option<&MwpmDecoder> {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub correction: PauliOperator,
    /// Class of `error * correction`.
    pub residual_class: ResidualClass,
    pub tie_flag: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeResult {
    Success,
    LogicalFailure { signature: u64 },
}

impl DecodeResult {
    pub fn is_success(&self) -> bool {
        matches!(self, DecodeResult::Success)
    }
}

/// Builds the syndrome decoder named by `selector`. The channel is used by
/// the maximum-likelihood decoder only.
pub fn build_decoder(
    code: &StabilizerCode,
    selector: DecoderSelector,
    channel: QubitChannel,
) -> Result<Box<dyn SyndromeDecoder>, DecodeError> {
    match selector {
        DecoderSelector::Ml => Ok(Box::new(MlDecoder::new(code, channel)?)),
        DecoderSelector::Mwpm => Ok(Box::new(MwpmDecoder::new(code)?)),
        DecoderSelector::Bd { .. } => Err(DecodeError::NotSyndromeDecoder),
    }
}

pub fn decode_error(
    decoder: &dyn SyndromeDecoder,
    e: &PauliOperator,
) -> Result<DecodeOutcome, DecodeError> {
    let code = decoder.code();
    let s = code.try_syndrome(e)?;
    let c = decoder.decode(&s)?;
    let residual = e * &c.operator;
    Ok(DecodeOutcome {
        residual_class: code.classify_residual(&residual),
        correction: c.operator,
        tie_flag: c.tie,
    })
}

pub fn decode_and_classify(
    decoder: &dyn SyndromeDecoder,
    e: &PauliOperator,
) -> Result<DecodeResult, DecodeError> {
    match decode_error(decoder, e)?.residual_class {
        ResidualClass::InStabilizer => Ok(DecodeResult::Success),
        ResidualClass::LogicalOperator { signature } => {
            Ok(DecodeResult::LogicalFailure { signature })
        }
        ResidualClass::Detectable => Err(DecodeError::SyndromeMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::builtin;

    #[test]
    fn selectors() {
        assert_eq!("ml".parse::<DecoderSelector>().unwrap(), DecoderSelector::Ml);
        assert_eq!(
            "bd:1,2".parse::<DecoderSelector>().unwrap(),
            DecoderSelector::Bd { e_g: 1, e_z: 2 }
        );
        for s in ["ml", "mwpm", "bd:1,0"] {
            assert_eq!(s.parse::<DecoderSelector>().unwrap().to_string(), s);
        }
        for s in ["bp", "bd:1", "bd:x,1", ""] {
            assert!(matches!(
                s.parse::<DecoderSelector>(),
                Err(DecodeError::UnknownSelector(_))
            ));
        }
    }

    #[test]
    fn identity_error_succeeds() {
        let code = builtin("surface-3x3").unwrap();
        let dec = build_decoder(&code, DecoderSelector::Mwpm, QubitChannel::depolarizing(0.01)).unwrap();
        let r = decode_and_classify(dec.as_ref(), &PauliOperator::identity(13)).unwrap();
        assert!(r.is_success());
        let steane = builtin("steane").unwrap();
        let dec = build_decoder(&steane, DecoderSelector::Ml, QubitChannel::depolarizing(0.01)).unwrap();
        assert!(decode_and_classify(dec.as_ref(), &PauliOperator::identity(7))
            .unwrap()
            .is_success());
    }

    #[test]
    fn yy_pattern_fails_under_matching() {
        let code = builtin("surface-3x3").unwrap();
        let dec = MwpmDecoder::new(&code).unwrap();
        let e = PauliOperator::parse_sparse(13, "Y6 Y8").unwrap();
        let out = decode_error(&dec, &e).unwrap();
        assert!(!out.tie_flag);
        assert!(matches!(out.residual_class, ResidualClass::LogicalOperator { .. }));
        // Y5 Y7 sits on a matching tie; it fails when boundaries win ties.
        let e = PauliOperator::parse_sparse(13, "Y5 Y7").unwrap();
        assert!(decode_error(&dec, &e).unwrap().tie_flag);
        let dec = MwpmDecoder::with_tie_order(&code, TieOrder::BoundaryFirst).unwrap();
        assert!(matches!(
            decode_and_classify(&dec, &e).unwrap(),
            DecodeResult::LogicalFailure { .. }
        ));
    }

    #[test]
    fn bd_has_no_syndrome_decoder() {
        let code = builtin("steane").unwrap();
        assert!(matches!(
            build_decoder(&code, DecoderSelector::Bd { e_g: 1, e_z: 0 }, QubitChannel::depolarizing(0.1)),
            Err(DecodeError::NotSyndromeDecoder)
        ));
    }
}
