use std::fmt::Write as _;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use stabperf::beta::{
    bd_profile, beta_from_fractions, class_label, exhaustive_fractions, matching_weight_split, sweep_size,
    BetaProfile, ErrorClassTable, SweepOptions, DEFAULT_BUDGET,
};
use stabperf::codefile::load_code_file;
use stabperf::decoder::{DecoderSelector, MlDecoder, MwpmDecoder, SyndromeDecoder, TieOrder};
use stabperf::enumerator::code_enumerators;
use stabperf::montecarlo::{estimate_rho_l, SimConfig};
use stabperf::performance::{
    log_grid, rho_l_bd, rho_l_bd_asym, rho_l_complete, threshold_approx, threshold_exact, Asymptote, CurveMode,
    CurveSpec,
};
use stabperf::registry;
use stabperf::{ChannelFamily, Distance, StabilizerCode};

use crate::manifest::{manifest_path, CodeIdentity, RunManifest};
use crate::{BetaArgs, Cli, CliError, Command, CurveArgs, Format, SimulateArgs, ThresholdArgs, TieArg, WeArgs};

/// Output of one command before it is written.
struct Output {
    body: String,
    code: Option<(String, StabilizerCode)>,
    seed: Option<u64>,
}

pub fn dispatch(cli: &Cli, args: &[String]) -> Result<(), CliError> {
    let format = |default: Format| cli.format.unwrap_or(default);
    let (name, out) = match &cli.command {
        Command::Codes => ("codes", codes(format(Format::Text))?),
        Command::We(a) => ("we", we(a, format(Format::Text))?),
        Command::Beta(a) => ("beta", beta(a, format(Format::Csv))?),
        Command::Curve(a) => ("curve", curve(a, format(Format::Csv))?),
        Command::Threshold(a) => ("threshold", threshold(a, format(Format::Text))?),
        Command::Simulate(a) => ("simulate", simulate(a, format(Format::Json))?),
        Command::Replay(a) => return replay(&a.manifest, cli.out.as_deref()),
    };
    match &cli.out {
        None => print!("{}", out.body),
        Some(path) => {
            std::fs::write(path, &out.body)?;
            RunManifest {
                command: name.to_string(),
                args: args.to_vec(),
                code_ref: out.code.as_ref().map(|(r, _)| r.clone()),
                code: out.code.as_ref().map(|(_, c)| CodeIdentity::of(c)),
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                seed: out.seed,
                timestamp: chrono::Utc::now().to_rfc3339(),
                output: path.clone(),
            }
            .write()?;
            eprintln!("wrote {} and {}", path.display(), manifest_path(path).display());
        }
    }
    Ok(())
}

fn replay(manifest: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let m = RunManifest::read(manifest)?;
    if let (Some(r), Some(id)) = (&m.code_ref, &m.code) {
        let now = CodeIdentity::of(&load_code(r)?);
        if &now != id {
            return Err(CliError::Validation(format!(
                "code {r} changed since the manifest was written (sha256 {} != {})",
                now.sha256, id.sha256
            )));
        }
    }
    let mut args = Vec::with_capacity(m.args.len() + 2);
    let mut it = m.args.iter();
    while let Some(a) = it.next() {
        if a == "--out" {
            it.next();
        } else if !a.starts_with("--out=") {
            args.push(a.clone());
        }
    }
    let target = out.map(Path::to_path_buf).unwrap_or(m.output);
    args.insert(0, target.display().to_string());
    args.insert(0, "--out".to_string());
    crate::run(args)
}

pub fn load_code(r: &str) -> Result<StabilizerCode, CliError> {
    match registry::builtin(r) {
        Ok(c) => Ok(c),
        Err(e) => {
            if Path::new(r).exists() {
                Ok(load_code_file(r)?)
            } else {
                Err(e.into())
            }
        }
    }
}

fn family(s: &str) -> Result<ChannelFamily, CliError> {
    Ok(s.parse::<ChannelFamily>()?)
}

fn parse_bias(s: &str) -> Result<f64, CliError> {
    match s.trim() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => t
            .parse::<f64>()
            .ok()
            .filter(|a| *a >= 0.0)
            .ok_or_else(|| CliError::Usage(format!("bad bias {t:?}"))),
    }
}

fn bias_string(a: f64) -> String {
    if a.is_infinite() {
        "inf".into()
    } else {
        a.to_string()
    }
}

/// `LO:HI:POINTS` on a log scale, or a comma-separated list.
fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("bad rho grid {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let grid = if parts.len() == 3 {
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let k: usize = parts[2].parse().map_err(|_| bad())?;
        if !(lo > 0.0 && hi > lo && k >= 1) {
            return Err(bad());
        }
        log_grid(lo, hi, k)
    } else {
        s.split(',')
            .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?
    };
    if grid.is_empty() || grid.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(CliError::Usage(format!("rho values must lie in (0,1): {s:?}")));
    }
    Ok(grid)
}

fn tie_order(t: TieArg) -> TieOrder {
    match t {
        TieArg::PartnersFirst => TieOrder::PartnersFirst,
        TieArg::BoundaryFirst => TieOrder::BoundaryFirst,
    }
}

fn frac(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn csv_line(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

fn json_body(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

/// `(e_g, e_z)` from a declared distance; `e_z` counts the extra Z errors
/// corrected when the Z distance is larger.
fn radii(d: Distance) -> (usize, usize) {
    match d {
        Distance::Symmetric(d) => ((d - 1) / 2, 0),
        Distance::Asymmetric { d_x, d_z } => {
            let e_g = (d_x.min(d_z) - 1) / 2;
            (e_g, ((d_z - 1) / 2).saturating_sub(e_g))
        }
    }
}

fn code_radii(code: &StabilizerCode) -> Result<(usize, usize), CliError> {
    if let Some(d) = code.declared_distance() {
        return Ok(radii(d));
    }
    let e = code_enumerators(code, stabperf::enumerator::DEFAULT_ENUMERATION_CAP)?;
    Ok(radii(Distance::Symmetric(e.distance()?)))
}

fn codes(format: Format) -> Result<Output, CliError> {
    let mut rows = Vec::new();
    for name in registry::names() {
        let c = registry::builtin(name)?;
        rows.push((name, c));
    }
    let body = match format {
        Format::Text => rows.iter().map(|(n, c)| format!("{n} {}\n", c.label())).collect(),
        Format::Csv => {
            let mut s = csv_line(&["name".into(), "n".into(), "k".into(), "distance".into()]);
            for (n, c) in &rows {
                let d = c.declared_distance().map(|d| d.to_string()).unwrap_or_default();
                s += &csv_line(&[n.to_string(), c.n().to_string(), c.k().to_string(), d]);
            }
            s
        }
        Format::Json => json_body(&Value::Array(
            rows.iter()
                .map(|(n, c)| {
                    json!({"name": n, "n": c.n(), "k": c.k(),
                           "distance": c.declared_distance().map(|d| d.to_string())})
                })
                .collect(),
        )),
    };
    Ok(Output {
        body,
        code: None,
        seed: None,
    })
}

fn we(a: &WeArgs, format: Format) -> Result<Output, CliError> {
    let code = load_code(&a.code)?;
    let cap = 1u64.checked_shl(a.cap_log2).filter(|_| a.cap_log2 < 64).unwrap_or(u64::MAX);
    let e = code_enumerators(&code, cap)?;
    let d = e.distance().ok();
    let body = match format {
        Format::Text => {
            let l = &e.logical;
            let nz: Vec<usize> = (0..=l.n).filter(|&w| !l.coeff(w).is_zero_big()).collect();
            let mut s = format!("{} {}\n", code.name(), code.label());
            let _ = writeln!(s, "A(z) = {}", e.stabilizer);
            let _ = writeln!(s, "B(z) = {}", e.normalizer);
            let _ = writeln!(s, "L(z) = {}", e.logical);
            let _ = writeln!(
                s,
                "L: {} at weights {}",
                nz.iter().map(|&w| l.coeff(w).to_string()).collect::<Vec<_>>().join(" "),
                nz.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
            );
            let _ = writeln!(s, "distance: {}", d.map(|d| d.to_string()).unwrap_or("none".into()));
            s
        }
        Format::Csv => {
            let mut s = csv_line(&["w".into(), "A".into(), "B".into(), "L".into()]);
            for w in 0..=code.n() {
                s += &csv_line(&[
                    w.to_string(),
                    e.stabilizer.coeff(w).to_string(),
                    e.normalizer.coeff(w).to_string(),
                    e.logical.coeff(w).to_string(),
                ]);
            }
            s
        }
        Format::Json => json_body(&json!({
            "code": code.name(), "n": code.n(), "k": code.k(), "distance": d,
            "stabilizer": e.stabilizer.to_json(),
            "normalizer": e.normalizer.to_json(),
            "logical": e.logical.to_json(),
        })),
    };
    Ok(Output {
        body,
        code: Some((a.code.clone(), code)),
        seed: None,
    })
}

trait IsZeroBig {
    fn is_zero_big(&self) -> bool;
}

impl IsZeroBig for num_bigint::BigUint {
    fn is_zero_big(&self) -> bool {
        Zero::is_zero(self)
    }
}

fn build_syndrome_decoder(
    code: &StabilizerCode,
    sel: DecoderSelector,
    ch: stabperf::QubitChannel,
    tie: TieArg,
) -> Result<Box<dyn SyndromeDecoder>, CliError> {
    Ok(match sel {
        DecoderSelector::Ml => Box::new(MlDecoder::new(code, ch)?),
        DecoderSelector::Mwpm => Box::new(MwpmDecoder::with_tie_order(code, tie_order(tie))?),
        DecoderSelector::Bd { .. } => return Err(CliError::Usage("bd has no syndrome decoder".into())),
    })
}

fn beta(a: &BetaArgs, format: Format) -> Result<Output, CliError> {
    let code = load_code(&a.code)?;
    let n = code.n();
    let sel: DecoderSelector = a.decoder.parse()?;
    let biases = a.bias.iter().map(|b| parse_bias(b)).collect::<Result<Vec<_>, _>>()?;
    let mut table: Option<ErrorClassTable> = None;
    let mut split = None;
    let mut profiles = Vec::new();
    match sel {
        DecoderSelector::Bd { e_g, e_z } => {
            for &b in &biases {
                let mut p = bd_profile(n, e_g, e_z, b)?;
                p.entries.retain(|e| e.j <= a.jmax);
                profiles.push(p);
            }
        }
        _ => {
            let ch = family(&a.channel)?.at(a.rho_ref);
            let dec = build_syndrome_decoder(&code, sel, ch, a.tie_order)?;
            if a.full {
                let m = dec
                    .as_matching()
                    .ok_or_else(|| CliError::Usage("--full needs the mwpm decoder".into()))?;
                let s = matching_weight_split(m)?;
                for &b in &biases {
                    profiles.push(s.profile(b)?);
                }
                split = Some(s);
            } else {
                let required = if a.z_only {
                    (1..=a.jmax.min(n)).map(|j| stabperf::beta::class_size(n, j, j, 0)).sum()
                } else {
                    sweep_size(n, a.jmax)
                };
                eprintln!("sweeping {required} patterns");
                let opts = SweepOptions {
                    j_max: a.jmax,
                    budget: if a.confirm { u128::MAX } else { DEFAULT_BUDGET },
                    z_only: a.z_only,
                };
                let t = exhaustive_fractions(dec.as_ref(), opts)?;
                for &b in &biases {
                    if a.z_only && b.is_finite() {
                        eprintln!("skipping A={b}: a Z-only sweep gives infinite bias only");
                        continue;
                    }
                    profiles.push(beta_from_fractions(&t, b)?);
                }
                table = Some(t);
            }
        }
    }
    if let Some(path) = &a.profile_out {
        let v: Vec<Value> = profiles
            .iter()
            .map(|p| {
                let mut v = p.to_json();
                v["code"] = json!(code.name());
                v["n"] = json!(n);
                v["decoder"] = json!(sel.to_string());
                v
            })
            .collect();
        std::fs::write(path, json_body(&Value::Array(v)))?;
    }
    let body = match format {
        Format::Csv => beta_csv(code.name(), table.as_ref(), split.as_ref(), &profiles),
        Format::Json => {
            let mut v = json!({"code": code.name(), "label": code.label(), "decoder": sel.to_string()});
            if let Some(t) = &table {
                v["table"] = t.to_json();
            }
            v["profiles"] = Value::Array(profiles.iter().map(BetaProfile::to_json).collect());
            json_body(&v)
        }
        Format::Text => {
            let mut s = format!("{} {} decoder {}\n", code.name(), code.label(), sel);
            if let Some(t) = &table {
                let _ = writeln!(s, "{:>3} {:>3} {:>3} {:<8} {:>16} {:>9} {:>8}", "j", "i", "l", "class", "failed/total", "fraction", "ties");
                for (&(j, i, l), c) in &t.counts {
                    let _ = writeln!(
                        s,
                        "{j:>3} {i:>3} {l:>3} {:<8} {:>16} {:>9.4} {:>8}",
                        class_label(j, i, l),
                        format!("{}/{}", c.failed, c.total),
                        c.failed as f64 / c.total as f64,
                        c.ties
                    );
                }
            }
            for p in &profiles {
                let _ = write!(s, "A={}:", bias_string(p.bias));
                for e in &p.entries {
                    let _ = write!(s, " beta_{} = {} ({:.4})", e.j, frac(&e.value), e.value.to_f64().unwrap_or(f64::NAN));
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Output {
        body,
        code: Some((a.code.clone(), code)),
        seed: None,
    })
}

fn beta_csv(
    code: &str,
    table: Option<&ErrorClassTable>,
    split: Option<&stabperf::beta::WeightSplit>,
    profiles: &[BetaProfile],
) -> String {
    let header = [
        "record", "code", "A", "j", "i", "l", "class", "failed", "total", "fraction", "exact", "beta", "ties", "provenance",
    ];
    let mut s = csv_line(&header.map(String::from));
    if let Some(t) = table {
        for (&(j, i, l), c) in &t.counts {
            s += &csv_line(&[
                "class".into(),
                code.into(),
                String::new(),
                j.to_string(),
                i.to_string(),
                l.to_string(),
                class_label(j, i, l),
                c.failed.to_string(),
                c.total.to_string(),
                format!("{:.6}", c.failed as f64 / c.total as f64),
                frac(&c.fraction()),
                String::new(),
                c.ties.to_string(),
                "exhaustive".into(),
            ]);
        }
    }
    if let Some(sp) = split {
        for j in 1..=sp.n {
            for i in 0..=j {
                let total = sp.total(j, i);
                s += &csv_line(&[
                    "split".into(),
                    code.into(),
                    String::new(),
                    j.to_string(),
                    i.to_string(),
                    String::new(),
                    String::new(),
                    sp.failed[j][i].to_string(),
                    total.to_string(),
                    format!("{:.6}", sp.failed[j][i] as f64 / total as f64),
                    frac(&BigRational::new(sp.failed[j][i].into(), total.into())),
                    String::new(),
                    String::new(),
                    "exhaustive".into(),
                ]);
            }
        }
    }
    for p in profiles {
        for e in &p.entries {
            let fail = BigRational::one() - &e.value;
            s += &csv_line(&[
                "beta".into(),
                code.into(),
                bias_string(p.bias),
                e.j.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                format!("{:.6}", fail.to_f64().unwrap_or(f64::NAN)),
                frac(&fail),
                frac(&e.value),
                String::new(),
                e.provenance.to_string(),
            ]);
        }
    }
    s
}

fn read_profile(path: &Path, n: usize) -> Result<BetaProfile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text)?;
    // Files written by `beta --profile-out` hold one profile per bias.
    let v = match v {
        Value::Array(mut items) if !items.is_empty() => items.remove(0),
        other => other,
    };
    if let Some(m) = v.get("n").and_then(Value::as_u64) {
        if m as usize != n {
            return Err(CliError::Validation(format!(
                "beta file is for n = {m}, curve has n = {n}"
            )));
        }
    }
    let p = BetaProfile::from_json(&v)?;
    if let Some(e) = p.entries.iter().find(|e| e.j > n) {
        return Err(CliError::Validation(format!("beta file has j = {} beyond n = {n}", e.j)));
    }
    Ok(p)
}

type Series = (String, String, Vec<(f64, f64)>);

fn curve(a: &CurveArgs, format: Format) -> Result<Output, CliError> {
    let code = a.code.as_deref().map(load_code).transpose()?;
    let n = match (&code, a.n) {
        (Some(c), None) => c.n(),
        (Some(c), Some(m)) if m == c.n() => m,
        (Some(c), Some(m)) => return Err(CliError::Usage(format!("--n {m} contradicts {} with n = {}", c.name(), c.n()))),
        (None, Some(m)) => m,
        (None, None) => return Err(CliError::Usage("give a code or --n".into())),
    };
    let (mut e_g, mut e_z) = match &code {
        Some(c) => code_radii(c)?,
        None => (a.t.unwrap_or(0), 0),
    };
    if let Some(t) = a.t {
        e_g = t;
    }
    if let Some(g) = a.eg {
        e_g = g;
    }
    if let Some(z) = a.ez {
        e_z = z;
    }
    let fam = family(&a.channel)?;
    let bias = fam.bias();
    let grid = parse_grid(&a.rho_grid)?;
    let profile = a.beta_file.as_deref().map(|p| read_profile(p, n)).transpose()?;
    if let Some(p) = &profile {
        if (p.bias.is_infinite() != bias.is_infinite()) || (bias.is_finite() && (p.bias - bias).abs() > 1e-12) {
            eprintln!("note: beta file is for A={}, channel has A={}", bias_string(p.bias), bias_string(bias));
        }
    }
    // Phase flips see the combined Z radius.
    let t_eff = if bias.is_infinite() { e_g + e_z } else { e_g };
    let beta_at = |j: usize| -> Option<f64> {
        profile
            .as_ref()
            .and_then(|p| p.beta(j).and_then(|b| b.to_f64()))
            .or(if j == t_eff + 1 { a.beta_t1 } else { None })
    };
    let mut series: Vec<Series> = Vec::new();
    for mode in &a.mode {
        let (label, params, points): (&str, String, Vec<(f64, f64)>) = match mode.as_str() {
            "bd" | "bd-symmetric" => {
                let spec = CurveSpec::new(n, CurveMode::BdSymmetric { t: t_eff }, fam, grid.clone())?;
                ("bd-symmetric", format!("t={t_eff}"), spec.points())
            }
            "bd-asym" | "bd-asymmetric" => {
                let spec = CurveSpec::new(n, CurveMode::BdAsymmetric { e_g, e_z }, fam, grid.clone())?;
                ("bd-asymmetric", format!("e_g={e_g};e_z={e_z}"), spec.points())
            }
            "complete" => {
                let p = profile
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("complete mode needs --beta-file".into()))?;
                let spec = CurveSpec::new(n, CurveMode::Complete { betas: p.values(n) }, fam, grid.clone())?;
                let js: Vec<String> = p.entries.iter().map(|e| e.j.to_string()).collect();
                ("complete", format!("betas=j{}", js.join("|")), spec.points())
            }
            "upper" => {
                let b = beta_at(t_eff + 1)
                    .ok_or_else(|| CliError::Usage("upper mode needs --beta-t1 or --beta-file".into()))?;
                let spec = CurveSpec::new(n, CurveMode::Upper { t: t_eff, beta_t1: b }, fam, grid.clone())?;
                ("upper", format!("t={t_eff};beta_t1={b}"), spec.points())
            }
            "asymptotic" => {
                let asym = if e_z > 0 && bias.is_finite() {
                    match (beta_at(e_g + 1), beta_at(e_g + e_z + 1)) {
                        (Some(b1), Some(b2)) => Asymptote::CompleteAsymmetric {
                            n,
                            e_g,
                            e_z,
                            beta_g1: b1,
                            beta_gz1: b2,
                        },
                        _ => Asymptote::BdAsymmetric { n, e_g, e_z, bias },
                    }
                } else {
                    match beta_at(t_eff + 1) {
                        Some(b) => Asymptote::Complete {
                            n,
                            t: t_eff,
                            beta_t1: b,
                        },
                        None => Asymptote::BdSymmetric { n, t: t_eff },
                    }
                };
                let params = asymptote_params(&asym);
                ("asymptotic", params, grid.iter().map(|&r| (r, asym.eval(r))).collect())
            }
            other => return Err(CliError::Usage(format!("unknown curve mode {other:?}"))),
        };
        series.push((label.to_string(), params, points));
    }
    let channel = fam.to_string();
    let body = match format {
        Format::Csv => {
            let mut s = csv_line(&["rho", "rho_L", "mode", "channel", "n", "params"].map(String::from));
            for (mode, params, pts) in &series {
                for &(r, v) in pts {
                    s += &csv_line(&[
                        format!("{r:e}"),
                        format!("{v:e}"),
                        mode.clone(),
                        channel.clone(),
                        n.to_string(),
                        params.clone(),
                    ]);
                }
            }
            s
        }
        Format::Json => json_body(&Value::Array(
            series
                .iter()
                .map(|(mode, params, pts)| {
                    json!({"mode": mode, "params": params, "channel": channel, "n": n,
                           "points": pts.iter().map(|(r, v)| json!({"rho": r, "rho_L": v})).collect::<Vec<_>>()})
                })
                .collect(),
        )),
        Format::Text => {
            let mut s = String::new();
            for (mode, params, pts) in &series {
                let _ = writeln!(s, "# {mode} ({params}) channel {channel} n={n}");
                for &(r, v) in pts {
                    let _ = writeln!(s, "{r:<12.4e} {v:.6e}");
                }
            }
            s
        }
    };
    Ok(Output {
        body,
        code: code.map(|c| (a.code.clone().unwrap_or_default(), c)),
        seed: None,
    })
}

fn asymptote_params(a: &Asymptote) -> String {
    match *a {
        Asymptote::BdSymmetric { t, .. } => format!("bd;t={t}"),
        Asymptote::BdAsymmetric { e_g, e_z, bias, .. } => format!("bd;e_g={e_g};e_z={e_z};A={}", bias_string(bias)),
        Asymptote::Complete { t, beta_t1, .. } => format!("complete;t={t};beta_t1={beta_t1}"),
        Asymptote::CompleteAsymmetric { e_g, e_z, beta_g1, beta_gz1, .. } => {
            format!("complete;e_g={e_g};e_z={e_z};beta_g1={beta_g1};beta_gz1={beta_gz1}")
        }
    }
}

fn threshold(a: &ThresholdArgs, format: Format) -> Result<Output, CliError> {
    let code = load_code(&a.code)?;
    let n = code.n();
    let fam = family(&a.channel)?;
    let bias = fam.bias();
    let (e_g, e_z) = code_radii(&code)?;
    let t = if bias.is_infinite() { e_g + e_z } else { e_g };
    let (profile, source): (Vec<f64>, String) = if let Some(path) = &a.beta_file {
        (read_profile(path, n)?.values(n), format!("file {}", path.display()))
    } else {
        let sel = match a.decoder.as_deref() {
            Some("bd") => None,
            Some(s) => Some(s.parse::<DecoderSelector>()?),
            None if MwpmDecoder::new(&code).is_ok() => Some(DecoderSelector::Mwpm),
            None => Some(DecoderSelector::Ml),
        };
        match sel {
            None | Some(DecoderSelector::Bd { .. }) => {
                let mut v = vec![0.0; n + 1];
                v.iter_mut().take(t + 1).for_each(|b| *b = 1.0);
                (v, "bounded distance".into())
            }
            Some(sel) => {
                let dec = build_syndrome_decoder(&code, sel, fam.at(a.rho_ref), TieArg::PartnersFirst)?;
                let opts = SweepOptions {
                    j_max: t + 1,
                    budget: if a.confirm { u128::MAX } else { DEFAULT_BUDGET },
                    z_only: bias.is_infinite(),
                };
                let table = exhaustive_fractions(dec.as_ref(), opts)?;
                (beta_from_fractions(&table, bias)?.values(n), format!("exhaustive {sel} to j={}", t + 1))
            }
        }
    };
    let beta_t1 = profile.get(t + 1).copied().unwrap_or(0.0);
    let approx = threshold_approx(n, t, beta_t1, a.gamma).ok();
    let exact = if source == "bounded distance" {
        if e_z > 0 && bias.is_finite() {
            threshold_exact(|r| rho_l_bd_asym(n, e_g, e_z, &fam.at(r)), a.gamma)
        } else {
            threshold_exact(|r| rho_l_bd(n, t, r), a.gamma)
        }
    } else {
        threshold_exact(|r| rho_l_complete(n, &profile, r), a.gamma)
    };
    let coefficient = (1.0 - beta_t1) * stabperf::beta::class_size(n, t + 1, 0, 0) as f64;
    let show = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_else(|| "none".into());
    let body = match format {
        Format::Text => format!(
            "{} {} channel {} gamma {}\nt = {t}, 1-beta_{} = {:.6} ({source})\nasymptotic coefficient: {:.4}\napprox threshold: {}\nexact threshold: {}{}\n",
            code.name(),
            code.label(),
            fam,
            a.gamma,
            t + 1,
            1.0 - beta_t1,
            coefficient,
            show(approx),
            show(exact.rho),
            if exact.degenerate { " (degenerate)" } else { "" }
        ),
        Format::Json => json_body(&json!({
            "code": code.name(), "channel": fam.to_string(), "gamma": a.gamma, "t": t,
            "beta_t1": beta_t1, "coefficient": coefficient, "source": source,
            "approx": approx, "exact": exact.rho, "exact_degenerate": exact.degenerate,
        })),
        Format::Csv => {
            let mut s = csv_line(&["code", "channel", "gamma", "t", "beta_t1", "coefficient", "approx", "exact", "degenerate"].map(String::from));
            s += &csv_line(&[
                code.name().into(),
                fam.to_string(),
                a.gamma.to_string(),
                t.to_string(),
                beta_t1.to_string(),
                coefficient.to_string(),
                approx.map(|v| v.to_string()).unwrap_or_else(|| "none".into()),
                exact.rho.map(|v| v.to_string()).unwrap_or_else(|| "none".into()),
                exact.degenerate.to_string(),
            ]);
            s
        }
    };
    Ok(Output {
        body,
        code: Some((a.code.clone(), code)),
        seed: None,
    })
}

fn simulate(a: &SimulateArgs, format: Format) -> Result<Output, CliError> {
    let code = load_code(&a.code)?;
    let sel: DecoderSelector = a.decoder.parse()?;
    let fam = family(&a.channel)?;
    let grid = parse_grid(&a.rho)?;
    let mut results = Vec::new();
    for &rho in &grid {
        let ch = fam.at(rho);
        let dec = build_syndrome_decoder(&code, sel, ch, a.tie_order)?;
        let cfg = SimConfig {
            target_rel_width: a.early_stop,
            ..SimConfig::new(a.trials, a.seed)
        };
        results.push((rho, estimate_rho_l(dec.as_ref(), &ch, cfg)?));
    }
    let record = |rho: f64, r: &stabperf::montecarlo::SimResult| {
        let mut v = serde_json::to_value(r).expect("results serialize");
        v["code"] = json!(code.name());
        v["decoder"] = json!(sel.to_string());
        v["channel"] = json!(fam.to_string());
        v["rho"] = json!(rho);
        v
    };
    let body = match format {
        Format::Json if results.len() == 1 => json_body(&record(results[0].0, &results[0].1)),
        Format::Json => json_body(&Value::Array(results.iter().map(|(r, s)| record(*r, s)).collect())),
        Format::Csv => {
            let mut s = csv_line(
                &["rho", "rho_L", "mode", "channel", "n", "params", "trials", "failures", "ci95_low", "ci95_high", "seed", "ties"]
                    .map(String::from),
            );
            for (rho, r) in &results {
                s += &csv_line(&[
                    format!("{rho:e}"),
                    format!("{:e}", r.rho_l_hat),
                    "simulation".into(),
                    fam.to_string(),
                    code.n().to_string(),
                    format!("decoder={sel}"),
                    r.trials.to_string(),
                    r.failures.to_string(),
                    format!("{:e}", r.ci95_low),
                    format!("{:e}", r.ci95_high),
                    r.seed.to_string(),
                    r.ties.to_string(),
                ]);
            }
            s
        }
        Format::Text => results
            .iter()
            .map(|(rho, r)| {
                format!(
                    "rho={rho} rho_L={:.6e} [{:.6e}, {:.6e}] failures={}/{} seed={}\n",
                    r.rho_l_hat, r.ci95_low, r.ci95_high, r.failures, r.trials, r.seed
                )
            })
            .collect(),
    };
    Ok(Output {
        body,
        code: Some((a.code.clone(), code)),
        seed: Some(a.seed),
    })
}
