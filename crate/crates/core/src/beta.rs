//! Non-correctable fractions per error class and the β profiles built from
//! them.
//!
//! A class `(j, i, l)` holds the weight-`j` patterns with `i` Z's, `l` X's
//! and `j - i - l` Y's. Sweeps enumerate qubit subsets and letter
//! assignments directly, so a sweep to weight `J` costs `Σ_{j≤J} C(n,j) 3^j`
//! decodes.

use std::collections::BTreeMap;
use std::fmt;
use std::io;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::code::ResidualClass;
use crate::decoder::{bd_accepts, decode_error, MwpmDecoder, SyndromeDecoder};
use crate::error::AnalysisError;
use crate::pauli::{Pauli, PauliOperator};

/// Reference total error rate for channel-aware decoders in sweeps.
pub const REFERENCE_RHO: f64 = 1e-3;
/// Default limit on decodes per sweep; the CLI asks for confirmation above it.
pub const DEFAULT_BUDGET: u128 = 100_000_000;
/// Largest code handled by [`matching_weight_split`].
pub const MAX_SPLIT_QUBITS: usize = 24;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub failed: u64,
    pub total: u64,
    /// Patterns whose decode broke a tie.
    pub ties: u64,
}

impl ClassCount {
    pub fn fraction(&self) -> BigRational {
        ratio(self.failed, self.total)
    }

    fn add(&mut self, other: &ClassCount) {
        self.failed += other.failed;
        self.total += other.total;
        self.ties += other.ties;
    }
}

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Letters of a class in table order: X's, then Z's, then Y's.
pub fn class_label(j: usize, i: usize, l: usize) -> String {
    format!("{}{}{}", "X".repeat(l), "Z".repeat(i), "Y".repeat(j - i - l))
}

/// Number of weight-`j` patterns in class `(j, i, l)` on `n` qubits.
pub fn class_size(n: usize, j: usize, i: usize, l: usize) -> u128 {
    binom(n, j) * binom(j, i) * binom(j - i, l)
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, t| acc * (n - t) as u128 / (t + 1) as u128)
}

/// Decodes needed to sweep every pattern of weight at most `j_max`.
pub fn sweep_size(n: usize, j_max: usize) -> u128 {
    (1..=j_max.min(n)).map(|j| binom(n, j) * 3u128.pow(j as u32)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorClassTable {
    pub code: String,
    pub n: usize,
    pub j_max: usize,
    pub counts: BTreeMap<(usize, usize, usize), ClassCount>,
}

impl ErrorClassTable {
    pub fn get(&self, j: usize, i: usize, l: usize) -> Option<&ClassCount> {
        self.counts.get(&(j, i, l))
    }

    pub fn fraction(&self, j: usize, i: usize, l: usize) -> Option<BigRational> {
        self.get(j, i, l).map(ClassCount::fraction)
    }

    /// Failures and totals summed over every class of weight `j`.
    pub fn weight_totals(&self, j: usize) -> ClassCount {
        let mut acc = ClassCount::default();
        for (_, c) in self.counts.range((j, 0, 0)..(j + 1, 0, 0)) {
            acc.add(c);
        }
        acc
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["code", "j", "i", "l", "class", "failed", "total", "fraction", "ties"])?;
        for (&(j, i, l), c) in &self.counts {
            w.write_record([
                self.code.clone(),
                j.to_string(),
                i.to_string(),
                l.to_string(),
                class_label(j, i, l),
                c.failed.to_string(),
                c.total.to_string(),
                format!("{:.6}", c.failed as f64 / c.total as f64),
                c.ties.to_string(),
            ])?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = self
            .counts
            .iter()
            .map(|(&(j, i, l), c)| {
                json!({
                    "j": j, "i": i, "l": l, "class": class_label(j, i, l),
                    "failed": c.failed, "total": c.total, "ties": c.ties,
                    "fraction": c.failed as f64 / c.total as f64,
                })
            })
            .collect();
        json!({"code": self.code, "n": self.n, "j_max": self.j_max, "classes": classes})
    }
}

/// Options for [`exhaustive_fractions`].
#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub j_max: usize,
    pub budget: u128,
    /// Restrict the sweep to all-Z patterns.
    pub z_only: bool,
}

impl SweepOptions {
    pub fn new(j_max: usize) -> Self {
        SweepOptions {
            j_max,
            budget: DEFAULT_BUDGET,
            z_only: false,
        }
    }
}

/// Decodes every pattern of weight `1..=j_max` and counts failures per class.
/// With `z_only` set only the classes `(j, j, 0)` are swept.
pub fn exhaustive_fractions(
    decoder: &dyn SyndromeDecoder,
    opts: SweepOptions,
) -> Result<ErrorClassTable, AnalysisError> {
    let code = decoder.code();
    let n = code.n();
    let j_max = opts.j_max.min(n);
    let required = if opts.z_only {
        (1..=j_max).map(|j| binom(n, j)).sum()
    } else {
        sweep_size(n, j_max)
    };
    if required > opts.budget {
        return Err(AnalysisError::BudgetExceeded {
            required,
            budget: opts.budget,
        });
    }
    let judge = Judge::new(decoder);
    let mut counts = BTreeMap::new();
    for j in 1..=j_max {
        let letters = if opts.z_only { 1 } else { 3usize.pow(j as u32) };
        // Shard by the lowest qubit of the support.
        let shards: Vec<Vec<ClassCount>> = (0..=n - j)
            .into_par_iter()
            .map(|first| -> Result<Vec<ClassCount>, AnalysisError> {
                let mut local = vec![ClassCount::default(); (j + 1) * (j + 1)];
                let mut support = vec![first; j];
                for rest in (first + 1..n).combinations(j - 1) {
                    support[1..].copy_from_slice(&rest);
                    for a in 0..letters {
                        let (i, l, fail, tie) = judge.run(&support, a, opts.z_only)?;
                        let c = &mut local[i * (j + 1) + l];
                        c.total += 1;
                        c.failed += fail as u64;
                        c.ties += tie as u64;
                    }
                }
                Ok(local)
            })
            .collect::<Result<_, _>>()?;
        for i in 0..=j {
            for l in 0..=j - i {
                if opts.z_only && (i != j || l != 0) {
                    continue;
                }
                let mut c = ClassCount::default();
                for s in &shards {
                    c.add(&s[i * (j + 1) + l]);
                }
                debug_assert_eq!(c.total as u128, class_size(n, j, i, l));
                counts.insert((j, i, l), c);
            }
        }
    }
    Ok(ErrorClassTable {
        code: code.name().to_string(),
        n,
        j_max,
        counts,
    })
}

/// Pattern evaluation, through the decoder or through matching masks.
enum Judge<'a> {
    Generic(&'a dyn SyndromeDecoder),
    Masks {
        dec: &'a MwpmDecoder,
        /// X and Z masks of each logical representative.
        logicals: Vec<(u64, u64)>,
    },
}

impl<'a> Judge<'a> {
    fn new(decoder: &'a dyn SyndromeDecoder) -> Self {
        let code = decoder.code();
        if let Some(dec) = decoder.as_matching() {
            if code.n() <= 64 && dec.z_residual_fast(0).is_some() && dec.x_residual_fast(0).is_some() {
                return Judge::Masks {
                    dec,
                    logicals: logical_masks(dec),
                };
            }
        }
        Judge::Generic(decoder)
    }

    /// Returns `(i, l, failed, tie)` for the pattern on `support` whose
    /// letters are the base-3 digits of `a` (0 = X, 1 = Y, 2 = Z).
    fn run(&self, support: &[usize], mut a: usize, z_only: bool) -> Result<(usize, usize, bool, bool), AnalysisError> {
        let mut x = 0u64;
        let mut z = 0u64;
        let mut ops = if let Judge::Generic(d) = self {
            Some(PauliOperator::identity(d.code().n()))
        } else {
            None
        };
        let (mut i, mut l) = (0, 0);
        for &q in support {
            let digit = if z_only { 2 } else { a % 3 };
            a /= 3;
            let (bx, bz) = match digit {
                0 => (true, false),
                1 => (true, true),
                _ => (false, true),
            };
            i += (digit == 2) as usize;
            l += (digit == 0) as usize;
            match &mut ops {
                Some(op) => op.set(q, Pauli::from_bits(bx, bz)),
                None => {
                    x |= (bx as u64) << q;
                    z |= (bz as u64) << q;
                }
            }
        }
        let (fail, tie) = match self {
            Judge::Generic(d) => {
                let out = decode_error(*d, ops.as_ref().expect("generic judge builds operators"))?;
                match out.residual_class {
                    ResidualClass::InStabilizer => (false, out.tie_flag),
                    ResidualClass::LogicalOperator { .. } => (true, out.tie_flag),
                    ResidualClass::Detectable => {
                        return Err(crate::error::DecodeError::SyndromeMismatch.into())
                    }
                }
            }
            Judge::Masks { dec, logicals } => {
                let (rx, tx) = dec.x_residual_fast(x).expect("table checked");
                let (rz, tz) = dec.z_residual_fast(z).expect("table checked");
                let fail = logicals
                    .iter()
                    .any(|&(lx, lz)| ((rx & lz).count_ones() + (rz & lx).count_ones()) % 2 == 1);
                (fail, tx || tz)
            }
        };
        Ok((i, l, fail, tie))
    }
}

fn logical_masks(dec: &MwpmDecoder) -> Vec<(u64, u64)> {
    let code = dec.code();
    code.logical_x()
        .iter()
        .chain(code.logical_z())
        .map(|op| (op.x_words()[0], op.z_words()[0]))
        .collect()
}

/// Failures of a CSS matching decoder over all `4^n` patterns, split by
/// weight `j` and number of Z's `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSplit {
    pub code: String,
    pub n: usize,
    /// `failed[j][i]`.
    pub failed: Vec<Vec<u64>>,
}

impl WeightSplit {
    /// Patterns of weight `j` with `i` Z's: `C(n,j) C(j,i) 2^{j-i}`.
    pub fn total(&self, j: usize, i: usize) -> u128 {
        (binom(self.n, j) * binom(j, i)) << (j - i)
    }

    /// Full profile `β_1..β_n` at bias `a` (`∞` keeps only all-Z patterns).
    pub fn profile(&self, a: f64) -> Result<BetaProfile, AnalysisError> {
        let mut entries = Vec::with_capacity(self.n);
        for j in 1..=self.n {
            let fail = if a.is_infinite() {
                ratio(self.failed[j][j], binom(self.n, j) as u64)
            } else {
                let a = exact(a)?;
                let mut acc = BigRational::zero();
                for i in 0..=j {
                    acc += pow(&a, i) * BigRational::from_integer(self.failed[j][i].into());
                }
                let norm = pow(&(a + BigRational::from_integer(2.into())), j)
                    * BigRational::from_integer(BigInt::from(binom(self.n, j)));
                acc / norm
            };
            entries.push(BetaEntry {
                j,
                value: BigRational::one() - fail,
                provenance: Provenance::Exhaustive,
            });
        }
        Ok(BetaProfile { bias: a, entries })
    }
}

/// Exact failure counts of a CSS matching decoder over every pattern, using
/// that a pattern is corrected iff its X part and its Z part both are.
///
/// For each X support `S_x` a subset transform counts the corrected Z
/// supports `S_z` by `|S_z \ S_x|`; summing over corrected `S_x` gives the
/// counts by weight and Z count. Needs `(n+1) 2^n` counters.
pub fn matching_weight_split(dec: &MwpmDecoder) -> Result<WeightSplit, AnalysisError> {
    let code = dec.code();
    let n = code.n();
    if n > MAX_SPLIT_QUBITS {
        return Err(AnalysisError::Domain(format!(
            "full split needs n <= {MAX_SPLIT_QUBITS}, got {n}"
        )));
    }
    if dec.z_residual_fast(0).is_none() || dec.x_residual_fast(0).is_none() {
        return Err(AnalysisError::Domain("matching tables unavailable".into()));
    }
    let logicals = logical_masks(dec);
    if logicals.iter().any(|&(x, z)| x != 0 && z != 0) {
        return Err(AnalysisError::Domain("logical operators must be pure X or pure Z".into()));
    }
    let size = 1usize << n;
    let ok_z = |m: u64| {
        let (r, _) = dec.z_residual_fast(m).expect("checked");
        logicals.iter().all(|&(lx, _)| (r & lx).count_ones() % 2 == 0)
    };
    let ok_x = |m: u64| {
        let (r, _) = dec.x_residual_fast(m).expect("checked");
        logicals.iter().all(|&(_, lz)| (r & lz).count_ones() % 2 == 0)
    };
    let stride = n + 1;
    let mut h = vec![0u32; size * stride];
    h.par_chunks_mut(stride)
        .enumerate()
        .for_each(|(m, row)| row[0] = ok_z(m as u64) as u32);
    // Qubit q switches from marking S_z to marking S_x: an absent X bit keeps
    // Z-only hits (shifted) and absent ones; a present X bit merges both.
    for q in 0..n {
        let half = 1usize << q;
        h.par_chunks_mut(2 * half * stride).for_each(|block| {
            let (lo, hi) = block.split_at_mut(half * stride);
            for (a, b) in lo.chunks_mut(stride).zip(hi.chunks_mut(stride)) {
                for d in (0..stride).rev() {
                    let (x0, x1) = (a[d], b[d]);
                    let shifted = if d > 0 { b[d - 1] } else { 0 };
                    b[d] = x0 + x1;
                    a[d] = x0 + shifted;
                }
            }
        });
    }
    let by_w: Vec<Vec<u64>> = h
        .par_chunks(stride)
        .enumerate()
        .fold(
            || vec![vec![0u64; stride]; stride],
            |mut acc, (m, row)| {
                if ok_x(m as u64) {
                    let w = (m as u64).count_ones() as usize;
                    for (b, &v) in row.iter().enumerate() {
                        acc[w][b] += v as u64;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![vec![0u64; stride]; stride],
            |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(&b) {
                    for (x, y) in ra.iter_mut().zip(rb) {
                        *x += y;
                    }
                }
                a
            },
        );
    let mut split = WeightSplit {
        code: code.name().to_string(),
        n,
        failed: (0..=n).map(|j| vec![0u64; j + 1]).collect(),
    };
    for (w, row) in by_w.iter().enumerate() {
        for (b, &ok) in row.iter().enumerate().take(n - w + 1) {
            let (j, i) = (w + b, b);
            split.failed[j][i] = (split.total(j, i) - ok as u128) as u64;
        }
    }
    Ok(split)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exhaustive,
    AnalyticBd,
    AssumedZero,
    Supplied,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Exhaustive => "exhaustive",
            Provenance::AnalyticBd => "analytic-bd",
            Provenance::AssumedZero => "assumed-zero",
            Provenance::Supplied => "supplied",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BetaEntry {
    pub j: usize,
    pub value: BigRational,
    pub provenance: Provenance,
}

/// Correctable fractions `β_j` at one channel bias.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaProfile {
    pub bias: f64,
    pub entries: Vec<BetaEntry>,
}

impl BetaProfile {
    pub fn beta(&self, j: usize) -> Option<&BigRational> {
        self.entries.iter().find(|e| e.j == j).map(|e| &e.value)
    }

    /// `β_0..β_n` as floats; `β_0 = 1` and missing entries are zero.
    pub fn values(&self, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n + 1];
        v[0] = 1.0;
        for e in &self.entries {
            if e.j <= n {
                v[e.j] = e.value.to_f64().unwrap_or(0.0);
            }
        }
        v
    }

    /// Profile from decimal values `β_j`, e.g. read from a file.
    pub fn from_values(bias: f64, values: &[(usize, f64)]) -> Result<Self, AnalysisError> {
        let entries = values
            .iter()
            .map(|&(j, b)| {
                if !(0.0..=1.0).contains(&b) {
                    return Err(AnalysisError::Domain(format!("beta_{j} = {b} outside [0,1]")));
                }
                Ok(BetaEntry {
                    j,
                    value: decimal(b),
                    provenance: Provenance::Supplied,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(BetaProfile { bias, entries })
    }

    pub fn to_json(&self) -> Value {
        let a = if self.bias.is_infinite() {
            json!("inf")
        } else {
            json!(self.bias)
        };
        let betas: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "j": e.j,
                    "num": e.value.numer().to_string(),
                    "den": e.value.denom().to_string(),
                    "value": e.value.to_f64(),
                    "provenance": e.provenance,
                })
            })
            .collect();
        json!({"A": a, "betas": betas})
    }

    /// Reads `{A, betas: [{j, num, den} | {j, value}]}`.
    pub fn from_json(v: &Value) -> Result<Self, AnalysisError> {
        let bad = |m: &str| AnalysisError::Domain(format!("beta profile: {m}"));
        let bias = match &v["A"] {
            Value::String(s) if s == "inf" => f64::INFINITY,
            Value::Number(x) => x.as_f64().ok_or_else(|| bad("A"))?,
            _ => return Err(bad("missing A")),
        };
        let mut entries = Vec::new();
        for b in v["betas"].as_array().ok_or_else(|| bad("missing betas"))? {
            let j = b["j"].as_u64().ok_or_else(|| bad("missing j"))? as usize;
            let value = match (&b["num"], &b["den"]) {
                (Value::Null, _) | (_, Value::Null) => {
                    decimal(b["value"].as_f64().ok_or_else(|| bad("missing value"))?)
                }
                (num, den) => {
                    let int = |x: &Value| -> Result<BigInt, AnalysisError> {
                        match x {
                            Value::String(s) => s.parse().map_err(|_| bad("bad integer")),
                            Value::Number(k) => k.as_i64().map(BigInt::from).ok_or_else(|| bad("bad integer")),
                            _ => Err(bad("bad integer")),
                        }
                    };
                    let den = int(den)?;
                    if den.is_zero() {
                        return Err(bad("zero denominator"));
                    }
                    BigRational::new(int(num)?, den)
                }
            };
            if value < BigRational::zero() || value > BigRational::one() {
                return Err(bad("beta outside [0,1]"));
            }
            let provenance = match &b["provenance"] {
                Value::Null => Provenance::Supplied,
                p => serde_json::from_value(p.clone()).map_err(|_| bad("provenance"))?,
            };
            entries.push(BetaEntry { j, value, provenance });
        }
        entries.sort_by_key(|e| e.j);
        Ok(BetaProfile { bias, entries })
    }
}

/// Rational with the shortest decimal expansion that round-trips `x`.
fn decimal(x: f64) -> BigRational {
    let s = format!("{x}");
    let (int, frac) = s.split_once('.').unwrap_or((&s, ""));
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    let num: BigInt = format!("{int}{frac}").parse().expect("float formats as decimal");
    BigRational::new(num, den)
}

fn exact(a: f64) -> Result<BigRational, AnalysisError> {
    if a.is_nan() || a < 0.0 {
        return Err(AnalysisError::Domain(format!("bias {a}")));
    }
    if a.is_infinite() {
        return Err(AnalysisError::InfiniteBias);
    }
    Ok(decimal(a))
}

fn pow(a: &BigRational, e: usize) -> BigRational {
    num_traits::pow(a.clone(), e)
}

/// `β_j` at bias `a` for `j = 1..=j_max` from class fractions:
/// `1 - β_j = (A+2)^{-j} Σ_i A^i Σ_l C(j,i) C(j-i,l) f_j(i,l)`, and
/// `1 - β_j = f_j(j,0)` when `A = ∞`.
pub fn beta_from_fractions(table: &ErrorClassTable, a: f64) -> Result<BetaProfile, AnalysisError> {
    let mut entries = Vec::with_capacity(table.j_max);
    for j in 1..=table.j_max {
        let fail = if a.is_infinite() {
            table
                .fraction(j, j, 0)
                .ok_or(AnalysisError::MissingClass { j, i: j, l: 0 })?
        } else {
            let ar = exact(a)?;
            let mut acc = BigRational::zero();
            for i in 0..=j {
                for l in 0..=j - i {
                    let f = table
                        .fraction(j, i, l)
                        .ok_or(AnalysisError::MissingClass { j, i, l })?;
                    let mult = BigInt::from(binom(j, i) * binom(j - i, l));
                    acc += pow(&ar, i) * BigRational::from_integer(mult) * f;
                }
            }
            acc / pow(&(ar + BigRational::from_integer(2.into())), j)
        };
        entries.push(BetaEntry {
            j,
            value: BigRational::one() - fail,
            provenance: Provenance::Exhaustive,
        });
    }
    Ok(BetaProfile { bias: a, entries })
}

/// `β_j` of a bounded-distance decoder correcting `e_g` generic errors plus
/// `e_z` Z errors, at bias `a`.
pub fn beta_bd(e_g: usize, e_z: usize, a: f64, j: usize) -> Result<BigRational, AnalysisError> {
    if a.is_infinite() {
        return Ok(if bd_accepts(e_g, e_z, j, j, 0) {
            BigRational::one()
        } else {
            BigRational::zero()
        });
    }
    let ar = exact(a)?;
    let mut acc = BigRational::zero();
    for i in 0..=j {
        if bd_accepts(e_g, e_z, j, i, 0) {
            // X and Y letters weigh 1 each, Z weighs A.
            let mult = BigInt::from(binom(j, i) << (j - i));
            acc += pow(&ar, i) * BigRational::from_integer(mult);
        }
    }
    Ok(acc / pow(&(ar + BigRational::from_integer(2.into())), j))
}

/// Bounded-distance profile `β_1..β_n`.
pub fn bd_profile(n: usize, e_g: usize, e_z: usize, a: f64) -> Result<BetaProfile, AnalysisError> {
    let entries = (1..=n)
        .map(|j| {
            Ok(BetaEntry {
                j,
                value: beta_bd(e_g, e_z, a, j)?,
                provenance: Provenance::AnalyticBd,
            })
        })
        .collect::<Result<_, AnalysisError>>()?;
    Ok(BetaProfile { bias: a, entries })
}

/// `C_j = (1 - β_j) C(n,j) (A+2)^j`, which must be an integer.
pub fn c_j_from_beta(n: usize, j: usize, a: f64, beta: &BigRational) -> Result<BigUint, AnalysisError> {
    let ar = exact(a)?;
    let c = (BigRational::one() - beta)
        * BigRational::from_integer(BigInt::from(binom(n, j)))
        * pow(&(ar + BigRational::from_integer(2.into())), j);
    if !c.is_integer() || c < BigRational::zero() {
        return Err(AnalysisError::NonIntegral(c.to_string()));
    }
    Ok(c.to_integer().to_biguint().expect("non-negative"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::QubitChannel;
    use crate::decoder::MlDecoder;
    use crate::registry::builtin;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn class_sizes() {
        assert_eq!(class_size(13, 2, 0, 2), 78);
        assert_eq!(class_size(13, 2, 1, 1), 156);
        assert_eq!(sweep_size(41, 3), 41 * 3 + 820 * 9 + 10660 * 27);
        assert_eq!(class_label(3, 1, 1), "XZY");
        assert_eq!(class_label(2, 0, 2), "XX");
    }

    #[test]
    fn steane_ml_beta_two() {
        let code = builtin("steane").unwrap();
        let dec = MlDecoder::new(&code, QubitChannel::depolarizing(REFERENCE_RHO)).unwrap();
        let t = exhaustive_fractions(&dec, SweepOptions::new(2)).unwrap();
        assert_eq!(t.weight_totals(1).failed, 0);
        let p = beta_from_fractions(&t, 1.0).unwrap();
        assert_eq!(p.beta(2).unwrap(), &r(2, 9));
        assert_eq!(c_j_from_beta(7, 2, 1.0, p.beta(2).unwrap()).unwrap(), BigUint::from(147u32));
    }

    #[test]
    fn five_qubit_is_perfect() {
        assert_eq!(c_j_from_beta(5, 2, 1.0, &BigRational::zero()).unwrap(), BigUint::from(90u32));
        assert_eq!(c_j_from_beta(5, 2, 1.0, &BigRational::one()).unwrap(), BigUint::zero());
        assert!(matches!(
            c_j_from_beta(5, 2, 1.0, &r(1, 7)),
            Err(AnalysisError::NonIntegral(_))
        ));
        assert!(matches!(
            c_j_from_beta(5, 2, f64::INFINITY, &r(1, 7)),
            Err(AnalysisError::InfiniteBias)
        ));
    }

    #[test]
    fn bd_betas() {
        assert_eq!(beta_bd(1, 0, 7.0, 1).unwrap(), BigRational::one());
        assert_eq!(beta_bd(1, 0, 1.0, 2).unwrap(), BigRational::zero());
        assert_eq!(beta_bd(1, 1, 1.0, 2).unwrap(), r(5, 9));
        assert_eq!(beta_bd(1, 1, f64::INFINITY, 2).unwrap(), BigRational::one());
        assert_eq!(beta_bd(1, 1, f64::INFINITY, 3).unwrap(), BigRational::zero());
    }

    #[test]
    fn z_only_sweep_gives_infinite_bias() {
        let code = builtin("surface-3x3").unwrap();
        let dec = MwpmDecoder::new(&code).unwrap();
        let full = exhaustive_fractions(&dec, SweepOptions::new(2)).unwrap();
        let z = exhaustive_fractions(
            &dec,
            SweepOptions {
                z_only: true,
                ..SweepOptions::new(2)
            },
        )
        .unwrap();
        assert_eq!(z.counts.len(), 2);
        assert_eq!(z.get(2, 2, 0), full.get(2, 2, 0));
        let inf = beta_from_fractions(&z, f64::INFINITY).unwrap();
        assert_eq!(inf.beta(2), beta_from_fractions(&full, f64::INFINITY).unwrap().beta(2));
        assert!(matches!(
            beta_from_fractions(&z, 1.0),
            Err(AnalysisError::MissingClass { j: 1, .. })
        ));
    }

    #[test]
    fn fast_and_generic_paths_agree() {
        struct Wrap(MwpmDecoder);
        impl SyndromeDecoder for Wrap {
            fn code(&self) -> &crate::code::StabilizerCode {
                self.0.code()
            }
            fn decode(&self, s: &crate::code::Syndrome) -> Result<crate::decoder::Correction, crate::error::DecodeError> {
                self.0.decode(s)
            }
        }
        let code = builtin("surface-3x3").unwrap();
        let dec = MwpmDecoder::new(&code).unwrap();
        let fast = exhaustive_fractions(&dec, SweepOptions::new(3)).unwrap();
        let slow = exhaustive_fractions(&Wrap(dec), SweepOptions::new(3)).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn split_matches_sweep() {
        let code = builtin("surface-3x3").unwrap();
        let dec = MwpmDecoder::new(&code).unwrap();
        let split = matching_weight_split(&dec).unwrap();
        let t = exhaustive_fractions(&dec, SweepOptions::new(4)).unwrap();
        for j in 1..=4 {
            for i in 0..=j {
                let f: u64 = (0..=j - i).map(|l| t.get(j, i, l).unwrap().failed).sum();
                assert_eq!(split.failed[j][i], f, "j={j} i={i}");
            }
        }
        for a in [1.0, 10.0, f64::INFINITY] {
            let p = split.profile(a).unwrap();
            let q = beta_from_fractions(&t, a).unwrap();
            for j in 1..=4 {
                assert_eq!(p.beta(j), q.beta(j));
            }
        }
        // Weight 0 and the identity coset never fail.
        assert_eq!(split.failed[0][0], 0);
    }

    #[test]
    fn budget_refusal() {
        let code = builtin("surface-5x5").unwrap();
        let dec = MwpmDecoder::new(&code).unwrap();
        let opts = SweepOptions {
            budget: 1000,
            ..SweepOptions::new(3)
        };
        assert!(matches!(
            exhaustive_fractions(&dec, opts),
            Err(AnalysisError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn profile_json_round_trip() {
        let p = bd_profile(5, 1, 1, 10.0).unwrap();
        let back = BetaProfile::from_json(&p.to_json()).unwrap();
        assert_eq!(p, back);
        let inf = BetaProfile::from_values(f64::INFINITY, &[(3, 0.92), (4, 0.76)]).unwrap();
        let back = BetaProfile::from_json(&inf.to_json()).unwrap();
        assert_eq!(back.beta(3).unwrap(), &r(23, 25));
        assert!(back.bias.is_infinite());
        let v = inf.values(5);
        assert_eq!(v, vec![1.0, 0.0, 0.0, 0.92, 0.76, 0.0]);
    }
}
