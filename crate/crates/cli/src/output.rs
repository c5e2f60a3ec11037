use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use tempfile::NamedTempFile;

/// Where a command's JSON goes: stdout, or a file replaced atomically.
pub struct Sink<'a> {
    path: Option<&'a Path>,
}

impl<'a> Sink<'a> {
    pub fn new(path: Option<&'a Path>) -> Self {
        Sink { path }
    }

    pub fn write(&self, text: &str) -> Result<()> {
        match self.path {
            Some(path) => write_atomic(path, text.as_bytes()),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }
}

/// Writes to a temp file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// `theta` column on the `n`-point grid followed by `rows`.
pub fn write_csv(path: &Path, header: &[&str], n: usize, rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut text = header.join(",");
    text.push('\n');
    for (k, row) in rows.enumerate() {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        text.push_str(&format!("{theta:.16e}"));
        for v in row {
            text.push_str(&format!(",{v:.16e}"));
        }
        text.push('\n');
    }
    write_atomic(path, text.as_bytes())
}
