use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{RunConfig, FORMAT_VERSION};
use crate::error::CliError;

/// A run directory; every file written through it is listed in the manifest.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<String>,
}

impl OutputDir {
    /// Creates the directory; an existing non-empty directory needs `overwrite`.
    pub fn prepare(root: &Path, overwrite: bool) -> Result<Self, CliError> {
        if root.exists() {
            let nonempty = fs::read_dir(root)
                .map_err(|e| CliError::io(root, e))?
                .next()
                .is_some();
            if nonempty && !overwrite {
                return Err(CliError::OutputExists(root.display().to_string()));
            }
        }
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            files: vec![],
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn write(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        let p = self.path(name);
        fs::write(&p, text).map_err(|e| CliError::io(&p, e))?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// CSV with a units comment row, a header row, and full-precision values.
    pub fn csv(&mut self, name: &str, columns: &[(&str, &str)], rows: &[Vec<f64>]) -> Result<(), CliError> {
        let mut s = String::new();
        let units: Vec<String> = columns.iter().map(|(c, u)| format!("{c} [{u}]")).collect();
        writeln!(s, "# units: {}", units.join(", ")).unwrap();
        let names: Vec<&str> = columns.iter().map(|(c, _)| *c).collect();
        writeln!(s, "{}", names.join(",")).unwrap();
        for r in rows {
            let cells: Vec<String> = r.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(s, "{}", cells.join(",")).unwrap();
        }
        self.write(name, &s)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(value).expect("serializable");
        self.write(name, &(text + "\n"))
    }

    pub fn text(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        self.write(name, text)
    }

    /// Writes the echoed config and the manifest; call last.
    pub fn finish(mut self, cfg: &RunConfig, command: &str, seconds: f64, status: &str) -> Result<(), CliError> {
        let echo = cfg.echo();
        self.text("config.toml", &echo)?;
        let manifest = serde_json::json!({
            "format_version": FORMAT_VERSION,
            "command": command,
            "status": status,
            "config_sha256": config_hash(&echo),
            "versions": {
                "pnsolve": env!("CARGO_PKG_VERSION"),
            },
            "timings": { "total_seconds": seconds },
            "files": self.files,
        });
        let p = self.path("manifest.json");
        let text = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
        fs::write(&p, text).map_err(|e| CliError::io(&p, e))
    }
}

pub fn config_hash(echo: &str) -> String {
    Sha256::digest(echo.as_bytes())
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            write!(s, "{b:02x}").unwrap();
            s
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_of_empty_string() {
        assert_eq!(
            config_hash(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
