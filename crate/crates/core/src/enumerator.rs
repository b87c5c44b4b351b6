//! Weight enumerators of the stabilizer group, its normalizer, and the
//! undetectable (logical) errors.
//!
//! Coefficients are stored normalized as plain group-element counts:
//! `Ā_w = |{s in S : wt(s) = w}|`, `B̄_w = |{p in N(S) : wt(p) = w}|` and
//! `L_w = B̄_w - Ā_w`. `B̄` is obtained from `Ā` through the quantum
//! MacWilliams identity without touching the normalizer.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::StabilizerCode;
use crate::error::EnumeratorError;

/// Default cap on the number of stabilizer elements enumerated.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnumeratorRole {
    #[serde(rename = "stabilizer")]
    Stabilizer,
    #[serde(rename = "normalizer")]
    Normalizer,
    #[serde(rename = "logical")]
    Logical,
}

impl EnumeratorRole {
    fn as_str(self) -> &'static str {
        match self {
            EnumeratorRole::Stabilizer => "stabilizer",
            EnumeratorRole::Normalizer => "normalizer",
            EnumeratorRole::Logical => "logical",
        }
    }
}

impl fmt::Display for EnumeratorRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    pub n: usize,
    pub role: EnumeratorRole,
    pub coeffs: Vec<BigUint>,
}

#[derive(Serialize, Deserialize)]
struct EnumeratorJson {
    n: usize,
    role: EnumeratorRole,
    coeffs: Vec<String>,
}

impl WeightEnumerator {
    pub fn new(role: EnumeratorRole, coeffs: Vec<BigUint>) -> Self {
        WeightEnumerator {
            n: coeffs.len() - 1,
            role,
            coeffs,
        }
    }

    pub fn from_u64(role: EnumeratorRole, coeffs: &[u64]) -> Self {
        Self::new(role, coeffs.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn coeff(&self, w: usize) -> &BigUint {
        &self.coeffs[w]
    }

    /// Coefficients as `u64`; panics if any exceeds 64 bits.
    pub fn coeffs_u64(&self) -> Vec<u64> {
        self.coeffs
            .iter()
            .map(|c| c.to_u64().expect("coefficient exceeds u64"))
            .collect()
    }

    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    /// Smallest weight with a non-zero coefficient, ignoring weight 0.
    pub fn min_positive_degree(&self) -> Option<usize> {
        (1..=self.n).find(|&w| !self.coeffs[w].is_zero())
    }

    /// Checks the counting identities for the enumerator's role.
    pub fn check_counts(&self, k: usize) -> Result<(), EnumeratorError> {
        let n = self.n;
        let (c0, total) = match self.role {
            EnumeratorRole::Stabilizer => (BigUint::one(), BigUint::one() << (n - k)),
            EnumeratorRole::Normalizer => (BigUint::one(), BigUint::one() << (n + k)),
            EnumeratorRole::Logical => (
                BigUint::zero(),
                (BigUint::one() << (n + k)) - (BigUint::one() << (n - k)),
            ),
        };
        if self.coeffs[0] != c0 {
            return Err(EnumeratorError::Inconsistent {
                weight: 0,
                detail: format!("{} (expected {c0})", self.coeffs[0]),
            });
        }
        if self.total() != total {
            return Err(EnumeratorError::Inconsistent {
                weight: n,
                detail: format!("total {} (expected {total})", self.total()),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(EnumeratorJson {
            n: self.n,
            role: self.role,
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        })
        .expect("enumerator serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, serde_json::Error> {
        let raw: EnumeratorJson = serde_json::from_value(v.clone())?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| s.parse::<BigUint>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        if coeffs.len() != raw.n + 1 {
            return Err(serde::de::Error::custom("coeffs length must be n+1"));
        }
        Ok(WeightEnumerator {
            n: raw.n,
            role: raw.role,
            coeffs,
        })
    }
}

impl fmt::Display for WeightEnumerator {
    /// Polynomial form, e.g. `1 + 3z^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| match w {
                0 => c.to_string(),
                1 => format!("{c}z"),
                _ => format!("{c}z^{w}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

const CHUNK_LOG2: usize = 14;

/// Weight histogram of the stabilizer group, by Gray-code walk over
/// generator subsets.
pub fn stabilizer_enumerator(
    code: &StabilizerCode,
    cap: u64,
) -> Result<WeightEnumerator, EnumeratorError> {
    let m = code.num_generators();
    if m >= 64 || (1u64 << m) > cap {
        return Err(EnumeratorError::CapExceeded { log2_size: m, cap });
    }
    let n = code.n();
    let words = code.generators().first().map_or(0, |g| g.x_words().len());
    // Flattened [x words | z words] per generator.
    let gens: Vec<u64> = code
        .generators()
        .iter()
        .flat_map(|g| g.x_words().iter().chain(g.z_words()).copied().collect::<Vec<_>>())
        .collect();
    let stride = 2 * words;
    let total = 1u64 << m;
    let chunk = 1u64 << CHUNK_LOG2.min(m);
    let hist = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut hist = vec![0u64; n + 1];
            let start = c * chunk;
            let gray = start ^ (start >> 1);
            let mut cur = vec![0u64; stride];
            for (g, block) in gens.chunks(stride).enumerate() {
                if (gray >> g) & 1 == 1 {
                    for (a, b) in cur.iter_mut().zip(block) {
                        *a ^= b;
                    }
                }
            }
            let weight = |cur: &[u64]| -> usize {
                (0..words)
                    .map(|w| (cur[w] | cur[words + w]).count_ones() as usize)
                    .sum()
            };
            hist[weight(&cur)] += 1;
            for i in start + 1..start + chunk {
                let g = i.trailing_zeros() as usize;
                let block = &gens[g * stride..(g + 1) * stride];
                for (a, b) in cur.iter_mut().zip(block) {
                    *a ^= b;
                }
                hist[weight(&cur)] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(WeightEnumerator::from_u64(EnumeratorRole::Stabilizer, &hist))
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `Σ_ℓ K_w(ℓ) c_ℓ` with the quaternary Krawtchouk kernel
/// `K_w(ℓ) = Σ_s (-1)^s C(ℓ,s) C(n-ℓ,w-s) 3^{w-s}`, before the `2^-n` factor.
fn krawtchouk_sums(coeffs: &[BigInt], n: usize) -> Vec<BigInt> {
    let pow3: Vec<BigInt> = (0..=n).map(|e| BigInt::from(3u8).pow(e as u32)).collect();
    (0..=n)
        .map(|w| {
            let mut acc = BigInt::zero();
            for (l, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut kw = BigInt::zero();
                for s in 0..=w.min(l) {
                    let term = binomial(l, s) * binomial(n - l, w - s) * &pow3[w - s];
                    if s % 2 == 0 {
                        kw += term;
                    } else {
                        kw -= term;
                    }
                }
                acc += kw * c;
            }
            acc
        })
        .collect()
}

/// Divides every entry by `2^shift` exactly, rejecting remainders or
/// negative results.
fn exact_scale(values: Vec<BigInt>, shift: usize) -> Result<Vec<BigUint>, EnumeratorError> {
    let divisor = BigInt::one() << shift;
    values
        .into_iter()
        .enumerate()
        .map(|(w, v)| {
            let (q, r) = v.div_rem(&divisor);
            if !r.is_zero() || q.is_negative() {
                return Err(EnumeratorError::Inconsistent {
                    weight: w,
                    detail: format!("{v}/2^{shift}, not a non-negative integer"),
                });
            }
            Ok(q.to_biguint().expect("non-negative"))
        })
        .collect()
}

fn expect_role(e: &WeightEnumerator, role: EnumeratorRole) -> Result<(), EnumeratorError> {
    if e.role != role {
        return Err(EnumeratorError::WrongRole {
            expected: role.as_str(),
            found: e.role.as_str(),
        });
    }
    Ok(())
}

/// `B̄` from `Ā` via the quantum MacWilliams identity
/// `B_w = 2^-n Σ_ℓ Σ_s C(ℓ,s) C(n-ℓ,w-s) (-1)^s 3^{w-s} A_ℓ`,
/// with `A = 4^k Ā` and `B̄ = B / 2^k`.
pub fn macwilliams_transform(
    a: &WeightEnumerator,
    k: usize,
) -> Result<WeightEnumerator, EnumeratorError> {
    expect_role(a, EnumeratorRole::Stabilizer)?;
    let n = a.n;
    let coeffs: Vec<BigInt> = a.coeffs.iter().map(|c| BigInt::from(c.clone())).collect();
    let sums = krawtchouk_sums(&coeffs, n);
    // B̄_w = 4^k / (2^k 2^n) Σ = Σ / 2^(n-k)
    let b = exact_scale(sums, n - k)?;
    for (w, (bw, aw)) in b.iter().zip(&a.coeffs).enumerate() {
        if bw < aw {
            return Err(EnumeratorError::Inconsistent {
                weight: w,
                detail: format!("B̄ = {bw} below Ā = {aw}"),
            });
        }
    }
    Ok(WeightEnumerator::new(EnumeratorRole::Normalizer, b))
}

/// Inverse direction: `Ā` from `B̄`. The raw transform is an involution, so
/// `A = T(B)` with `B = 2^k B̄` and `Ā = A / 4^k`.
pub fn inverse_macwilliams(
    b: &WeightEnumerator,
    k: usize,
) -> Result<WeightEnumerator, EnumeratorError> {
    expect_role(b, EnumeratorRole::Normalizer)?;
    let n = b.n;
    let coeffs: Vec<BigInt> = b.coeffs.iter().map(|c| BigInt::from(c.clone())).collect();
    let sums = krawtchouk_sums(&coeffs, n);
    // Ā_w = 2^k / (4^k 2^n) Σ = Σ / 2^(n+k)
    Ok(WeightEnumerator::new(
        EnumeratorRole::Stabilizer,
        exact_scale(sums, n + k)?,
    ))
}

/// `L = B̄ - Ā`, the weight enumerator of `N(S) \ S`.
pub fn undetectable_error_enumerator(
    a: &WeightEnumerator,
    b: &WeightEnumerator,
) -> Result<WeightEnumerator, EnumeratorError> {
    expect_role(a, EnumeratorRole::Stabilizer)?;
    expect_role(b, EnumeratorRole::Normalizer)?;
    if a.n != b.n {
        return Err(EnumeratorError::LengthMismatch {
            left: a.n,
            right: b.n,
        });
    }
    let coeffs = b
        .coeffs
        .iter()
        .zip(&a.coeffs)
        .enumerate()
        .map(|(w, (bw, aw))| {
            if bw < aw {
                Err(EnumeratorError::Inconsistent {
                    weight: w,
                    detail: format!("L would be negative ({bw} - {aw})"),
                })
            } else {
                Ok(bw - aw)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WeightEnumerator::new(EnumeratorRole::Logical, coeffs))
}

pub fn distance_from_enumerator(l: &WeightEnumerator) -> Result<usize, EnumeratorError> {
    expect_role(l, EnumeratorRole::Logical)?;
    l.min_positive_degree().ok_or(EnumeratorError::NoLogicals)
}

/// The three enumerators of a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeEnumerators {
    pub stabilizer: WeightEnumerator,
    pub normalizer: WeightEnumerator,
    pub logical: WeightEnumerator,
}

impl CodeEnumerators {
    pub fn distance(&self) -> Result<usize, EnumeratorError> {
        distance_from_enumerator(&self.logical)
    }
}

pub fn code_enumerators(code: &StabilizerCode, cap: u64) -> Result<CodeEnumerators, EnumeratorError> {
    let stabilizer = stabilizer_enumerator(code, cap)?;
    let normalizer = macwilliams_transform(&stabilizer, code.k())?;
    let logical = undetectable_error_enumerator(&stabilizer, &normalizer)?;
    Ok(CodeEnumerators {
        stabilizer,
        normalizer,
        logical,
    })
}
