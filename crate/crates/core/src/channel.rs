//! Independent, identically distributed single-qubit Pauli channels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::DecodeError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitChannel {
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
}

impl QubitChannel {
    pub fn new(p_x: f64, p_y: f64, p_z: f64) -> Result<Self, DecodeError> {
        let ok = |p: f64| (0.0..=1.0).contains(&p);
        if !(ok(p_x) && ok(p_y) && ok(p_z)) || p_x + p_y + p_z > 1.0 + 1e-12 {
            return Err(DecodeError::InvalidChannel(format!(
                "p_x={p_x}, p_y={p_y}, p_z={p_z}"
            )));
        }
        Ok(QubitChannel { p_x, p_y, p_z })
    }

    pub fn depolarizing(rho: f64) -> Self {
        QubitChannel {
            p_x: rho / 3.0,
            p_y: rho / 3.0,
            p_z: rho / 3.0,
        }
    }

    pub fn phase_flip(rho: f64) -> Self {
        QubitChannel {
            p_x: 0.0,
            p_y: 0.0,
            p_z: rho,
        }
    }

    /// Channel with `p_X = p_Y` and bias `A = 2 p_Z / (ρ - p_Z)`; `A = ∞` is
    /// the phase-flip channel.
    pub fn biased(rho: f64, bias: f64) -> Self {
        if bias.is_infinite() {
            return Self::phase_flip(rho);
        }
        let p_xy = rho / (bias + 2.0);
        QubitChannel {
            p_x: p_xy,
            p_y: p_xy,
            p_z: rho - 2.0 * p_xy,
        }
    }

    pub fn rho(&self) -> f64 {
        self.p_x + self.p_y + self.p_z
    }

    /// `A = 2 p_Z / (ρ - p_Z)`, infinite when only Z errors occur.
    pub fn bias(&self) -> f64 {
        let rest = self.rho() - self.p_z;
        if rest <= 0.0 {
            if self.p_z > 0.0 {
                f64::INFINITY
            } else {
                f64::NAN
            }
        } else {
            2.0 * self.p_z / rest
        }
    }
}

/// Channel family parameterized by the total error rate `ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ChannelFamily {
    Depolarizing,
    PhaseFlip,
    Biased(f64),
}

impl ChannelFamily {
    pub fn at(&self, rho: f64) -> QubitChannel {
        match *self {
            ChannelFamily::Depolarizing => QubitChannel::depolarizing(rho),
            ChannelFamily::PhaseFlip => QubitChannel::phase_flip(rho),
            ChannelFamily::Biased(a) => QubitChannel::biased(rho, a),
        }
    }

    pub fn bias(&self) -> f64 {
        match *self {
            ChannelFamily::Depolarizing => 1.0,
            ChannelFamily::PhaseFlip => f64::INFINITY,
            ChannelFamily::Biased(a) => a,
        }
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelFamily::Depolarizing => f.write_str("depol"),
            ChannelFamily::PhaseFlip => f.write_str("phaseflip"),
            ChannelFamily::Biased(a) if a.is_infinite() => f.write_str("biased:inf"),
            ChannelFamily::Biased(a) => write!(f, "biased:{a}"),
        }
    }
}

impl FromStr for ChannelFamily {
    type Err = DecodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "depol" | "depolarizing" => Ok(ChannelFamily::Depolarizing),
            "phaseflip" | "phase-flip" => Ok(ChannelFamily::PhaseFlip),
            _ => {
                let a = s
                    .strip_prefix("biased:")
                    .ok_or_else(|| DecodeError::InvalidChannel(s.to_string()))?;
                let a: f64 = if a == "inf" {
                    f64::INFINITY
                } else {
                    a.parse().map_err(|_| DecodeError::InvalidChannel(s.to_string()))?
                };
                if a.is_nan() || a < 0.0 {
                    return Err(DecodeError::InvalidChannel(s.to_string()));
                }
                Ok(ChannelFamily::Biased(a))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bias_parameter() {
        assert!((QubitChannel::depolarizing(0.03).bias() - 1.0).abs() < 1e-12);
        assert!(QubitChannel::phase_flip(0.1).bias().is_infinite());
        let c = QubitChannel::biased(0.12, 10.0);
        assert!((c.p_x - 0.01).abs() < 1e-15);
        assert!((c.p_z - 0.1).abs() < 1e-15);
        assert!((c.bias() - 10.0).abs() < 1e-9);
        assert!((c.rho() - 0.12).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(QubitChannel::new(0.5, 0.4, 0.2).is_err());
        assert!(QubitChannel::new(-0.1, 0.0, 0.0).is_err());
        assert!(QubitChannel::new(0.1, 0.1, 0.1).is_ok());
    }

    #[test]
    fn family_strings() {
        for s in ["depol", "phaseflip", "biased:10", "biased:inf"] {
            let f: ChannelFamily = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("biased:x".parse::<ChannelFamily>().is_err());
        assert!("amplitude".parse::<ChannelFamily>().is_err());
    }
}
