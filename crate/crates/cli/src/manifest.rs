use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use stabperf::codefile::format_code;
use stabperf::StabilizerCode;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeIdentity {
    pub name: String,
    /// SHA-256 of the canonical `.stab` text.
    pub sha256: String,
}

impl CodeIdentity {
    pub fn of(code: &StabilizerCode) -> Self {
        CodeIdentity {
            name: code.name().to_string(),
            sha256: hex::encode(Sha256::digest(format_code(code).as_bytes())),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, as given.
    pub args: Vec<String>,
    /// Code reference as given on the command line.
    pub code_ref: Option<String>,
    pub code: Option<CodeIdentity>,
    pub tool_version: String,
    pub seed: Option<u64>,
    pub timestamp: String,
    pub output: PathBuf,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

impl RunManifest {
    pub fn write(&self) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(manifest_path(&self.output), text + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }
}
