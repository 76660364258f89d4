//! Output files: everything is rendered in memory first, then each file is
//! written to a temporary sibling and renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliResult;

pub const SCHEMA: u32 = 1;

/// Rendered outputs of one command, written together.
#[derive(Debug, Default)]
pub struct OutputSet {
    files: Vec<(String, String)>,
}

impl OutputSet {
    pub fn add(&mut self, name: impl Into<String>, contents: String) {
        self.files.push((name.into(), contents));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn write_all(&self, dir: &Path) -> CliResult<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        self.files.iter().map(|(name, body)| write_atomic(&dir.join(name), body)).collect()
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> CliResult<PathBuf> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(path.to_path_buf())
}

/// `# schema` and `# config` comment lines that open every CSV.
pub fn csv_preamble(config_echo: &str) -> String {
    format!("# schema: {SCHEMA}\n# config: {config_echo}\n")
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}
