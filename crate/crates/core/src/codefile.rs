//! Line-oriented `.stab` code files.
//!
//! ```text
//! # comment
//! 3 1 repetition-3
//! G ZZI
//! G IZZ
//! LX XXX
//! LZ ZII
//! ```
//!
//! The header is `n k name`, followed by `n-k` generator lines, `k` `LX`
//! lines and `k` `LZ` lines. Blank lines and `#` comments are ignored.

use std::fs;
use std::path::Path;

use crate::code::{CodeSpec, StabilizerCode};
use crate::error::CodeError;
use crate::pauli::PauliOperator;

pub fn parse_code_spec(text: &str) -> Result<CodeSpec, CodeError> {
    let mut header: Option<(usize, usize, String)> = None;
    let mut generators = Vec::new();
    let mut logical_x = Vec::new();
    let mut logical_z = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CodeError::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some((n, _, _)) = &header else {
            if fields.len() != 3 {
                return Err(err(format!("expected header \"n k name\", found {line:?}")));
            }
            let n: usize = fields[0]
                .parse()
                .map_err(|_| err(format!("bad qubit count {:?}", fields[0])))?;
            let k: usize = fields[1]
                .parse()
                .map_err(|_| err(format!("bad logical count {:?}", fields[1])))?;
            if n == 0 {
                return Err(err("qubit count must be positive".into()));
            }
            header = Some((n, k, fields[2].to_string()));
            continue;
        };
        if fields.len() != 2 {
            return Err(err(format!("expected \"<tag> <pauli>\", found {line:?}")));
        }
        let op = PauliOperator::parse(fields[1]).map_err(|e| err(e.to_string()))?;
        if op.num_qubits() != *n {
            return Err(err(format!(
                "operator has {} qubits, header says {n}",
                op.num_qubits()
            )));
        }
        match fields[0] {
            "G" => generators.push(op),
            "LX" => logical_x.push(op),
            "LZ" => logical_z.push(op),
            other => return Err(err(format!("unknown tag {other:?}"))),
        }
    }
    let (n, k, name) = header.ok_or(CodeError::Parse {
        line: text.lines().count().max(1),
        message: "missing header".into(),
    })?;
    Ok(CodeSpec {
        name,
        n,
        k,
        generators,
        logical_x,
        logical_z,
    })
}

pub fn parse_code(text: &str) -> Result<StabilizerCode, CodeError> {
    StabilizerCode::new(parse_code_spec(text)?)
}

pub fn format_code(code: &StabilizerCode) -> String {
    format_spec(&code.to_spec())
}

pub fn format_spec(spec: &CodeSpec) -> String {
    let mut out = format!("{} {} {}\n", spec.n, spec.k, spec.name);
    for g in &spec.generators {
        out.push_str(&format!("G {g}\n"));
    }
    for l in &spec.logical_x {
        out.push_str(&format!("LX {l}\n"));
    }
    for l in &spec.logical_z {
        out.push_str(&format!("LZ {l}\n"));
    }
    out
}

/// Reads and validates a code file. Files whose generators match a built
/// surface code of the same name regain its lattice layout.
pub fn load_code_file(path: impl AsRef<Path>) -> Result<StabilizerCode, CodeError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| CodeError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let code = parse_code(&text)?;
    Ok(crate::registry::attach_surface_layout(code))
}

pub fn save_code_file(code: &StabilizerCode, path: impl AsRef<Path>) -> Result<(), CodeError> {
    let path = path.as_ref();
    fs::write(path, format_code(code)).map_err(|source| CodeError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry;

    #[test]
    fn canonical_text_roundtrips_bit_exactly() {
        let text = "3 1 repetition-3\nG ZZI\nG IZZ\nLX XXX\nLZ ZII\n";
        let code = parse_code(text).unwrap();
        assert_eq!(format_code(&code), text);
    }

    #[test]
    fn builtins_roundtrip() {
        for name in registry::names() {
            let code = registry::builtin(name).unwrap();
            let again = parse_code(&format_code(&code)).unwrap();
            assert_eq!(again, code, "{name}");
        }
    }

    #[test]
    fn generator_count_mismatch_fails_validation() {
        let text = "5 3 bad\nG XZZXI\nG IXZZX\nG XIXZZ\nLX XXXXX\nLX XXXXX\nLX XXXXX\nLZ ZZZZZ\nLZ ZZZZZ\nLZ ZZZZZ\n";
        match parse_code(text) {
            Err(CodeError::Validation(r)) => assert!(r.to_string().contains("3 generators given")),
            other => panic!("expected validation failure, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "# header next\n3 1 rep\nG ZZI\nG IZQ\n";
        match parse_code_spec(text) {
            Err(CodeError::Parse { line, message }) => {
                assert_eq!(line, 4);
                assert!(message.contains("position 3"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_code_spec("3 1 rep\nQ ZZI\n"),
            Err(CodeError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_code_spec("3 1 rep\nG ZZII\n"),
            Err(CodeError::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_code_spec("# nothing\n"), Err(CodeError::Parse { .. })));
    }

    #[test]
    fn file_io() {
        let dir = std::env::temp_dir().join(format!("stabperf-codefile-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("s33.stab");
        let code = registry::builtin("surface-3x3").unwrap();
        save_code_file(&code, &path).unwrap();
        let loaded = load_code_file(&path).unwrap();
        assert_eq!(loaded, code);
        assert!(loaded.layout().is_some());
        assert!(matches!(
            load_code_file(dir.join("missing.stab")),
            Err(CodeError::Io { .. })
        ));
        fs::remove_dir_all(&dir).ok();
    }
}
