use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::Config;

/// Provenance record written next to every output file.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub command: &'a str,
    pub config: &'a Config,
    pub seed: u64,
    pub tool_version: &'static str,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub output: &'a Path,
}

impl<'a> RunManifest<'a> {
    pub fn new(command: &'a str, config: &'a Config, output: &'a Path) -> Self {
        Self {
            command,
            config,
            seed: config.run.seed,
            tool_version: env!("CARGO_PKG_VERSION"),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            output,
        }
    }

    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
        name.push(".manifest.json");
        output.with_file_name(name)
    }

    pub fn write(&self) -> std::io::Result<PathBuf> {
        let path = Self::path_for(self.output);
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(&path, text + "\n")?;
        Ok(path)
    }
}
