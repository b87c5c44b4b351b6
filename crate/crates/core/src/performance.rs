//! Closed-form logical error rates, bounds, asymptotes and code-effective
//! thresholds.
//!
//! Binomial terms are evaluated in the log domain and failure probabilities
//! are summed over the failing weights directly, so curves stay accurate
//! down to very small `ρ`.

use std::io;

use serde::Serialize;
use statrs::function::factorial::ln_binomial;

use crate::channel::{ChannelFamily, QubitChannel};
use crate::decoder::bd_accepts;
use crate::error::AnalysisError;

/// Lower end of the threshold search interval.
pub const SEARCH_LOW: f64 = 1e-8;
/// Upper end of the threshold search interval.
pub const SEARCH_HIGH: f64 = 0.5;

/// `C(n,j) ρ^j (1-ρ)^{n-j}`.
pub fn binomial_term(n: usize, j: usize, rho: f64) -> f64 {
    if j > n {
        return 0.0;
    }
    if rho <= 0.0 {
        return (j == 0) as u8 as f64;
    }
    if rho >= 1.0 {
        return (j == n) as u8 as f64;
    }
    let ln = ln_binomial(n as u64, j as u64) + j as f64 * rho.ln() + (n - j) as f64 * (-rho).ln_1p();
    ln.exp()
}

fn kahan(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for t in terms {
        let y = t - c;
        let s = sum + y;
        c = (s - sum) - y;
        sum = s;
    }
    sum
}

/// Bounded-distance decoding of `t` generic errors:
/// `1 - Σ_{j≤t} C(n,j) ρ^j (1-ρ)^{n-j}`.
pub fn rho_l_bd(n: usize, t: usize, rho: f64) -> f64 {
    kahan((t + 1..=n).map(|j| binomial_term(n, j, rho))).clamp(0.0, 1.0)
}

/// Bounded-distance decoding of `e_g` generic plus `e_z` Z errors over an
/// arbitrary Pauli channel.
pub fn rho_l_bd_asym(n: usize, e_g: usize, e_z: usize, ch: &QubitChannel) -> f64 {
    let rho = ch.rho();
    let (pz, rest) = (ch.p_z, rho - ch.p_z);
    let terms = (1..=n).map(|j| {
        if j <= e_g {
            return 0.0;
        }
        if j > e_g + e_z {
            return binomial_term(n, j, rho);
        }
        // Patterns with fewer than j - e_g Z's fail.
        let lead = ln_binomial(n as u64, j as u64) + (n - j) as f64 * (-rho).ln_1p();
        kahan((0..j - e_g).map(|i| {
            let zi = if i == 0 { 0.0 } else { i as f64 * pz.ln() };
            let ri = if j == i { 0.0 } else { (j - i) as f64 * rest.ln() };
            (lead + ln_binomial(j as u64, i as u64) + zi + ri).exp()
        }))
    });
    kahan(terms).clamp(0.0, 1.0)
}

/// Fraction `α_j` of weight-`j` patterns accepted by the asymmetric
/// bounded-distance decoder at bias `a` (`p_X = p_Y`).
pub fn alpha_j(e_g: usize, e_z: usize, a: f64, j: usize) -> f64 {
    if j <= e_g {
        return 1.0;
    }
    if j > e_g + e_z {
        return 0.0;
    }
    if a.is_infinite() {
        return 1.0;
    }
    let base = (2.0 / (a + 2.0)).powi(j as i32);
    base * kahan((j - e_g..=j).map(|i| {
        debug_assert!(bd_accepts(e_g, e_z, j, i, 0));
        ln_binomial(j as u64, i as u64).exp() * (a / 2.0).powi(i as i32)
    }))
}

/// The same rate through `α_j`: `1 - Σ_{j≤e_g+e_z} α_j C(n,j) ρ^j (1-ρ)^{n-j}`,
/// summed as `Σ_j (1-α_j) C(n,j) ρ^j (1-ρ)^{n-j}`.
pub fn rho_l_bd_asym_alpha(n: usize, e_g: usize, e_z: usize, a: f64, rho: f64) -> f64 {
    kahan((1..=n).map(|j| (1.0 - alpha_j(e_g, e_z, a, j)) * binomial_term(n, j, rho))).clamp(0.0, 1.0)
}

/// Complete decoding: `Σ_j C(n,j) ρ^j (1-ρ)^{n-j} (1-β_j)` with `betas`
/// indexed by weight; weights past the end count as `β_j = 0`.
pub fn rho_l_complete(n: usize, betas: &[f64], rho: f64) -> f64 {
    kahan((1..=n).map(|j| {
        let b = betas.get(j).copied().unwrap_or(0.0);
        binomial_term(n, j, rho) * (1.0 - b)
    }))
    .clamp(0.0, 1.0)
}

/// Upper bound that corrects a fraction `β_{t+1}` at weight `t+1` and
/// nothing heavier.
pub fn rho_l_upper(n: usize, t: usize, beta_t1: f64, rho: f64) -> f64 {
    let head = (1.0 - beta_t1) * binomial_term(n, t + 1, rho);
    (head + kahan((t + 2..=n).map(|j| binomial_term(n, j, rho)))).clamp(0.0, 1.0)
}

/// Leading-order approximations for `ρ ≪ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Asymptote {
    /// `C(n,t+1) ρ^{t+1}`.
    BdSymmetric { n: usize, t: usize },
    /// `C(n,e_g+1) (2ρ/(A+2))^{e_g+1}` for finite `A`,
    /// `C(n,e_g+e_z+1) ρ^{e_g+e_z+1}` when `A = ∞`.
    BdAsymmetric { n: usize, e_g: usize, e_z: usize, bias: f64 },
    /// `(1-β_{t+1}) C(n,t+1) ρ^{t+1}`.
    Complete { n: usize, t: usize, beta_t1: f64 },
    /// `(1-β_{e_g+e_z+1}) C(n,e_g+e_z+1) ρ^{e_g+e_z+1} + (1-β_{e_g+1}) C(n,e_g+1) ρ^{e_g+1}`.
    CompleteAsymmetric {
        n: usize,
        e_g: usize,
        e_z: usize,
        beta_g1: f64,
        beta_gz1: f64,
    },
}

fn monomial(c: f64, n: usize, w: usize, rho: f64) -> f64 {
    if w > n {
        return 0.0;
    }
    c * (ln_binomial(n as u64, w as u64) + w as f64 * rho.ln()).exp()
}

impl Asymptote {
    pub fn eval(&self, rho: f64) -> f64 {
        match *self {
            Asymptote::BdSymmetric { n, t } => monomial(1.0, n, t + 1, rho),
            Asymptote::BdAsymmetric { n, e_g, e_z, bias } => {
                if bias.is_infinite() {
                    monomial(1.0, n, e_g + e_z + 1, rho)
                } else {
                    monomial(1.0, n, e_g + 1, 2.0 * rho / (bias + 2.0))
                }
            }
            Asymptote::Complete { n, t, beta_t1 } => monomial(1.0 - beta_t1, n, t + 1, rho),
            Asymptote::CompleteAsymmetric {
                n,
                e_g,
                e_z,
                beta_g1,
                beta_gz1,
            } => monomial(1.0 - beta_gz1, n, e_g + e_z + 1, rho) + monomial(1.0 - beta_g1, n, e_g + 1, rho),
        }
    }

    /// Coefficient of the leading power, e.g. `(1-β_{t+1}) C(n,t+1)`.
    pub fn coefficient(&self) -> f64 {
        self.eval(1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Threshold {
    /// `None` when the curve never drops below `10^{-γ} ρ`.
    pub rho: Option<f64>,
    /// Set when the condition holds across the whole search interval, e.g.
    /// for `ρ_L = ρ` at `γ = 0`.
    pub degenerate: bool,
}

/// `max { ρ : ρ_L(ρ) ≤ 10^{-γ} ρ }` over the search interval, by a
/// logarithmic scan followed by bisection to `1e-9` relative.
pub fn threshold_exact(curve: impl Fn(f64) -> f64, gamma: f64) -> Threshold {
    let scale = 10f64.powf(-gamma);
    let ok = |rho: f64| curve(rho) <= scale * rho * (1.0 + 1e-12);
    if ok(SEARCH_HIGH) {
        return Threshold {
            rho: Some(SEARCH_HIGH),
            degenerate: true,
        };
    }
    const STEPS: usize = 4000;
    let (l0, l1) = (SEARCH_LOW.ln(), SEARCH_HIGH.ln());
    let at = |k: usize| (l0 + (l1 - l0) * k as f64 / STEPS as f64).exp();
    let Some(k) = (0..STEPS).rev().find(|&k| ok(at(k))) else {
        return Threshold {
            rho: None,
            degenerate: false,
        };
    };
    let (mut lo, mut hi) = (at(k), at(k + 1));
    while (hi - lo) > 1e-9 * lo {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Threshold {
        rho: Some(lo),
        degenerate: false,
    }
}

/// `[10^γ (1-β_{t+1}) C(n,t+1)]^{-1/t}`.
pub fn threshold_approx(n: usize, t: usize, beta_t1: f64, gamma: f64) -> Result<f64, AnalysisError> {
    if t == 0 {
        return Err(AnalysisError::Domain("t must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&beta_t1) {
        return Err(AnalysisError::Domain(format!("beta_t+1 = {beta_t1} must lie in [0,1)")));
    }
    let c = 10f64.powf(gamma) * (1.0 - beta_t1) * ln_binomial(n as u64, (t + 1) as u64).exp();
    Ok(c.powf(-1.0 / t as f64))
}

/// How a curve is evaluated.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum CurveMode {
    BdSymmetric { t: usize },
    BdAsymmetric { e_g: usize, e_z: usize },
    /// `β_0..β_n` at the family's bias.
    Complete { betas: Vec<f64> },
    Upper { t: usize, beta_t1: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveSpec {
    pub n: usize,
    pub mode: CurveMode,
    #[serde(serialize_with = "family_string")]
    pub family: ChannelFamily,
    pub grid: Vec<f64>,
}

fn family_string<S: serde::Serializer>(f: &ChannelFamily, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

impl CurveSpec {
    pub fn new(n: usize, mode: CurveMode, family: ChannelFamily, grid: Vec<f64>) -> Result<Self, AnalysisError> {
        if grid.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(AnalysisError::Domain("rho values must lie in (0,1)".into()));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AnalysisError::Domain("rho grid must be strictly increasing".into()));
        }
        if let CurveMode::Complete { betas } = &mode {
            if betas.len() > n + 1 {
                return Err(AnalysisError::ProfileLength {
                    expected: n,
                    found: betas.len() - 1,
                });
            }
        }
        Ok(CurveSpec { n, mode, family, grid })
    }

    pub fn eval(&self, rho: f64) -> f64 {
        match &self.mode {
            CurveMode::BdSymmetric { t } => rho_l_bd(self.n, *t, rho),
            CurveMode::BdAsymmetric { e_g, e_z } => rho_l_bd_asym(self.n, *e_g, *e_z, &self.family.at(rho)),
            CurveMode::Complete { betas } => rho_l_complete(self.n, betas, rho),
            CurveMode::Upper { t, beta_t1 } => rho_l_upper(self.n, *t, *beta_t1, rho),
        }
    }

    pub fn mode_name(&self) -> &'static str {
        match self.mode {
            CurveMode::BdSymmetric { .. } => "bd-symmetric",
            CurveMode::BdAsymmetric { .. } => "bd-asymmetric",
            CurveMode::Complete { .. } => "complete",
            CurveMode::Upper { .. } => "upper",
        }
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.grid.iter().map(|&r| (r, self.eval(r))).collect()
    }

    /// Rows `rho, rho_L, mode, channel, n` plus an `asymptote` column when
    /// one is given.
    pub fn write_csv<W: io::Write>(&self, out: W, asymptote: Option<&Asymptote>) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["rho", "rho_L", "mode", "channel", "n"];
        if asymptote.is_some() {
            header.push("asymptote");
        }
        w.write_record(&header)?;
        for (rho, v) in self.points() {
            let mut row = vec![
                format!("{rho:e}"),
                format!("{v:e}"),
                self.mode_name().to_string(),
                self.family.to_string(),
                self.n.to_string(),
            ];
            if let Some(a) = asymptote {
                row.push(format!("{:e}", a.eval(rho)));
            }
            w.write_record(&row)?;
        }
        w.flush()
    }
}

/// Logarithmically spaced grid of `points` values from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    let last = points - 1;
    (0..points)
        .map(|k| match k {
            0 => lo,
            k if k == last => hi,
            k => 10f64.powf(a + (b - a) * k as f64 / last as f64),
        })
        .collect()
}
