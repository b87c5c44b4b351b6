//! Degenerate maximum-likelihood decoding by explicit coset sums.
//!
//! For a syndrome `s` the candidate errors are `T(s) · L · S` with `T(s)` the
//! pure error, `L` one of the `4^k` logical classes and `S` any stabilizer.
//! Each class is scored by the total probability of its `2^{n-k}` members.
//! The members are walked in Gray-code order and binned by their
//! `(X, Y, Z)` letter counts, so the probability sum reduces to a short
//! log-sum-exp over the bins.

use std::sync::OnceLock;

use crate::channel::QubitChannel;
use crate::code::{StabilizerCode, Syndrome};
use crate::error::DecodeError;
use crate::pauli::PauliOperator;

use super::{Correction, SyndromeDecoder};

/// Default limit on `n - k`.
pub const DEFAULT_ML_CAP_LOG2: usize = 24;
/// Syndrome tables are cached when `n - k` is at most this.
const CACHE_LOG2: usize = 20;
const TIE_TOLERANCE: f64 = 1e-12;

pub struct MlDecoder {
    code: StabilizerCode,
    channel: QubitChannel,
    log_p: [f64; 4],
    /// Logical representatives sorted by signature, identity first.
    logicals: Vec<PauliOperator>,
    cache: Option<Vec<OnceLock<(u32, bool)>>>,
}

impl MlDecoder {
    pub fn new(code: &StabilizerCode, channel: QubitChannel) -> Result<Self, DecodeError> {
        Self::with_cap(code, channel, DEFAULT_ML_CAP_LOG2)
    }

    pub fn with_cap(
        code: &StabilizerCode,
        channel: QubitChannel,
        cap_log2: usize,
    ) -> Result<Self, DecodeError> {
        let r = code.num_generators();
        if r > cap_log2 {
            return Err(DecodeError::CapExceeded {
                log2_size: r,
                cap_log2,
            });
        }
        let channel = QubitChannel::new(channel.p_x, channel.p_y, channel.p_z)?;
        if channel.rho() <= 0.0 {
            return Err(DecodeError::ZeroChannel);
        }
        let mut logicals: Vec<(u64, PauliOperator)> = (0..1u64 << (2 * code.k()))
            .map(|m| {
                let l = code.logical_by_index(m);
                (code.logical_signature(&l), l)
            })
            .collect();
        logicals.sort_by_key(|(sig, _)| *sig);
        let cache = (r <= CACHE_LOG2).then(|| (0..1usize << r).map(|_| OnceLock::new()).collect());
        Ok(MlDecoder {
            code: code.clone(),
            channel,
            log_p: [
                (1.0 - channel.rho()).ln(),
                channel.p_x.ln(),
                channel.p_y.ln(),
                channel.p_z.ln(),
            ],
            logicals: logicals.into_iter().map(|(_, l)| l).collect(),
            cache,
        })
    }

    pub fn channel(&self) -> QubitChannel {
        self.channel
    }

    /// Natural-log probability of every logical coset consistent with `s`,
    /// paired with the coset representative, in tie-break order.
    pub fn coset_log_probabilities(&self, s: &Syndrome) -> Vec<(PauliOperator, f64)> {
        let base = self.code.pure_error(s);
        self.logicals
            .iter()
            .map(|l| {
                let rep = &base * l;
                let lp = self.coset_log_probability(&rep);
                (rep, lp)
            })
            .collect()
    }

    fn coset_log_probability(&self, rep: &PauliOperator) -> f64 {
        let n = self.code.n();
        let side = n + 1;
        let mut bins = vec![0u32; side * side * side];
        let gens = self.code.generators();
        let mut x = rep.x_words().to_vec();
        let mut z = rep.z_words().to_vec();
        let count = |x: &[u64], z: &[u64]| {
            let mut c = [0usize; 3];
            for (a, b) in x.iter().zip(z) {
                c[0] += (a & !b).count_ones() as usize;
                c[1] += (a & b).count_ones() as usize;
                c[2] += (b & !a).count_ones() as usize;
            }
            (c[0] * side + c[1]) * side + c[2]
        };
        bins[count(&x, &z)] += 1;
        for step in 1u64..(1u64 << gens.len()) {
            let g = &gens[step.trailing_zeros() as usize];
            for (w, gw) in x.iter_mut().zip(g.x_words()) {
                *w ^= gw;
            }
            for (w, gw) in z.iter_mut().zip(g.z_words()) {
                *w ^= gw;
            }
            bins[count(&x, &z)] += 1;
        }
        let mut terms = Vec::new();
        for (idx, &c) in bins.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let nz = idx % side;
            let ny = (idx / side) % side;
            let nx = idx / (side * side);
            let ni = n - nx - ny - nz;
            let mut v = (c as f64).ln();
            for (cnt, lp) in [(ni, self.log_p[0]), (nx, self.log_p[1]), (ny, self.log_p[2]), (nz, self.log_p[3])] {
                if cnt > 0 {
                    v += cnt as f64 * lp;
                }
            }
            terms.push(v);
        }
        log_sum_exp(&terms)
    }

    fn choose(&self, s: &Syndrome) -> (u32, bool) {
        let probs = self.coset_log_probabilities(s);
        let mut best = 0usize;
        for (i, (_, lp)) in probs.iter().enumerate() {
            if *lp > probs[best].1 {
                best = i;
            }
        }
        let top = probs[best].1;
        let tie = probs.iter().enumerate().any(|(i, (_, lp))| {
            i != best && (*lp == top || (top.is_finite() && top - lp <= TIE_TOLERANCE))
        });
        (best as u32, tie)
    }
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

impl SyndromeDecoder for MlDecoder {
    fn code(&self) -> &StabilizerCode {
        &self.code
    }

    fn decode(&self, s: &Syndrome) -> Result<Correction, DecodeError> {
        if s.len() != self.code.num_generators() {
            return Err(DecodeError::SyndromeMismatch);
        }
        let (class, tie) = match (&self.cache, s.index()) {
            (Some(cache), Some(idx)) => *cache[idx as usize].get_or_init(|| self.choose(s)),
            _ => self.choose(s),
        };
        Ok(Correction {
            operator: &self.code.pure_error(s) * &self.logicals[class as usize],
            tie,
        })
    }
}
