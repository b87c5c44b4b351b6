//! Monte Carlo estimation of logical error rates.
//!
//! Trials are grouped in fixed blocks; block `b` draws from the ChaCha8
//! stream `b` of the seed, so a trial's error never depends on which worker
//! runs it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::QubitChannel;
use crate::decoder::{decode_and_classify, SyndromeDecoder};
use crate::error::DecodeError;
use crate::pauli::{Pauli, PauliOperator};

/// Trials per random stream.
pub const BLOCK: u64 = 4096;
/// Blocks per early-stop check.
const ROUND_BLOCKS: u64 = 16;
/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// One I.I.D. Pauli error on `n` qubits.
pub fn sample_error<R: Rng + ?Sized>(ch: &QubitChannel, n: usize, rng: &mut R) -> PauliOperator {
    let mut e = PauliOperator::identity(n);
    let (a, b, c) = (ch.p_x, ch.p_x + ch.p_y, ch.rho());
    for q in 0..n {
        let u: f64 = rng.gen();
        if u < a {
            e.set(q, Pauli::X);
        } else if u < b {
            e.set(q, Pauli::Y);
        } else if u < c {
            e.set(q, Pauli::Z);
        }
    }
    e
}

/// Wilson score interval `(low, high)` for `k` successes in `n` trials.
pub fn wilson(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let z2 = z * z;
    let den = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / den;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / den;
    ((centre - half).clamp(0.0, p), (centre + half).clamp(p, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    /// Stop once the 95% interval's half-width falls below this fraction of
    /// the estimate.
    pub target_rel_width: Option<f64>,
}

impl SimConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        SimConfig {
            trials,
            seed,
            target_rel_width: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub trials: u64,
    pub failures: u64,
    pub rho_l_hat: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    /// Trials whose decode broke a tie.
    pub ties: u64,
    pub seed: u64,
}

impl SimResult {
    fn from_counts(trials: u64, failures: u64, ties: u64, seed: u64) -> Self {
        let (lo, hi) = wilson(failures, trials, Z95);
        SimResult {
            trials,
            failures,
            rho_l_hat: if trials == 0 { 0.0 } else { failures as f64 / trials as f64 },
            ci95_low: lo,
            ci95_high: hi,
            ties,
            seed,
        }
    }

    pub fn covers(&self, value: f64) -> bool {
        self.ci95_low <= value && value <= self.ci95_high
    }

    /// Half-widths `(below, above)` of the interval around the estimate.
    pub fn half_widths(&self) -> (f64, f64) {
        (self.rho_l_hat - self.ci95_low, self.ci95_high - self.rho_l_hat)
    }
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Runs trials through `trial(rng) -> (failed, tie)`; shared by the decoder
/// path and by tests with synthetic outcomes.
pub fn run_trials<F>(cfg: SimConfig, trial: F) -> Result<SimResult, DecodeError>
where
    F: Fn(&mut ChaCha8Rng) -> Result<(bool, bool), DecodeError> + Sync,
{
    let blocks = cfg.trials.div_ceil(BLOCK);
    let (mut done, mut failures, mut ties) = (0u64, 0u64, 0u64);
    let mut next = 0u64;
    while next < blocks {
        let end = if cfg.target_rel_width.is_some() {
            (next + ROUND_BLOCKS).min(blocks)
        } else {
            blocks
        };
        let (d, f, t) = (next..end)
            .into_par_iter()
            .map(|b| -> Result<(u64, u64, u64), DecodeError> {
                let mut rng = block_rng(cfg.seed, b);
                let count = BLOCK.min(cfg.trials - b * BLOCK);
                let (mut f, mut t) = (0, 0);
                for _ in 0..count {
                    let (fail, tie) = trial(&mut rng)?;
                    f += fail as u64;
                    t += tie as u64;
                }
                Ok((count, f, t))
            })
            .try_reduce(|| (0, 0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1, a.2 + b.2)))?;
        done += d;
        failures += f;
        ties += t;
        next = end;
        if let Some(target) = cfg.target_rel_width {
            if failures > 0 {
                let (lo, hi) = wilson(failures, done, Z95);
                let p = failures as f64 / done as f64;
                if (hi - lo) / 2.0 <= target * p {
                    break;
                }
            }
        }
    }
    Ok(SimResult::from_counts(done, failures, ties, cfg.seed))
}

/// Estimates the logical error rate of `decoder` over channel `ch`.
pub fn estimate_rho_l(
    decoder: &dyn SyndromeDecoder,
    ch: &QubitChannel,
    cfg: SimConfig,
) -> Result<SimResult, DecodeError> {
    let code = decoder.code();
    let n = code.n();
    let ch = QubitChannel::new(ch.p_x, ch.p_y, ch.p_z)?;
    if let Some(dec) = decoder.as_matching().filter(|_| n <= 64) {
        if dec.x_residual_fast(0).is_some() && dec.z_residual_fast(0).is_some() {
            let logicals: Vec<(u64, u64)> = code
                .logical_x()
                .iter()
                .chain(code.logical_z())
                .map(|l| (l.x_words()[0], l.z_words()[0]))
                .collect();
            return run_trials(cfg, |rng| {
                let e = sample_error(&ch, n, rng);
                let (rx, tx) = dec.x_residual_fast(e.x_words()[0]).expect("checked");
                let (rz, tz) = dec.z_residual_fast(e.z_words()[0]).expect("checked");
                let fail = logicals
                    .iter()
                    .any(|&(lx, lz)| ((rx & lz).count_ones() + (rz & lx).count_ones()) % 2 == 1);
                Ok((fail, tx || tz))
            });
        }
    }
    run_trials(cfg, |rng| {
        let e = sample_error(&ch, n, rng);
        let r = decode_and_classify(decoder, &e)?;
        Ok((!r.is_success(), false))
    })
}
