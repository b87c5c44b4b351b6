//! Built-in codes.

use crate::code::{Distance, StabilizerCode};
use crate::codefile::parse_code;
use crate::error::CodeError;
use crate::surface::build_surface_code;

const BUNDLED: [(&str, &str, Option<usize>); 4] = [
    ("repetition-3", include_str!("../codes/repetition-3.stab"), Some(1)),
    ("five-qubit", include_str!("../codes/five-qubit.stab"), Some(3)),
    ("steane", include_str!("../codes/steane.stab"), Some(3)),
    ("shor", include_str!("../codes/shor.stab"), Some(3)),
];

/// Names of every built-in code, in listing order.
pub fn names() -> Vec<&'static str> {
    vec![
        "repetition-3",
        "five-qubit",
        "steane",
        "shor",
        "surface-3x3",
        "surface-3x5",
        "surface-3x7",
        "surface-5x5",
    ]
}

/// Bundled `.stab` source text for the non-surface built-ins.
pub fn bundled_source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _, _)| *n == name).map(|(_, s, _)| *s)
}

pub fn builtin(name: &str) -> Result<StabilizerCode, CodeError> {
    if let Some((_, text, d)) = BUNDLED.iter().find(|(n, _, _)| *n == name) {
        let code = parse_code(text)?;
        return Ok(match d {
            Some(d) => code.with_distance(Distance::Symmetric(*d)),
            None => code,
        });
    }
    if let Some((dx, dz)) = parse_surface_name(name) {
        return build_surface_code(dx, dz);
    }
    Err(CodeError::UnknownCode(name.to_string()))
}

fn parse_surface_name(name: &str) -> Option<(usize, usize)> {
    let dims = name.strip_prefix("surface-")?;
    let (a, b) = dims.split_once('x')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

/// Restores lattice geometry for a loaded code whose name and generators
/// match a buildable surface code.
pub(crate) fn attach_surface_layout(code: StabilizerCode) -> StabilizerCode {
    let Some((dx, dz)) = parse_surface_name(code.name()) else {
        return code;
    };
    match build_surface_code(dx, dz) {
        Ok(built) if built == code => built,
        _ => code,
    }
}
