use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use hardy_core::circlefn::DEFAULT_N;
use hardy_core::io::parse_json;

use crate::GlobalArgs;

/// Contents of `--config`; every field optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    n_samples: Option<usize>,
    seed: Option<u64>,
    #[serde(default)]
    tol: BTreeMap<String, f64>,
    output_path: Option<PathBuf>,
    emit_plot_data: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Explicit grid; `None` keeps each input file's own grid.
    pub n_samples: Option<usize>,
    pub seed: u64,
    pub tol: BTreeMap<String, f64>,
    pub output_path: Option<PathBuf>,
    emit_plot_data: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(args: &GlobalArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                parse_json::<ConfigFile>(&text, &path.display().to_string())?
            }
            None => ConfigFile::default(),
        };
        let mut tol = file.tol;
        tol.extend(args.tol.iter().cloned());
        if let Some((name, v)) = tol.iter().find(|(_, v)| !(**v > 0.0)) {
            bail!("tolerance {name} must be positive, got {v}");
        }
        let n_samples = args.n_samples.or(file.n_samples);
        if let Some(n) = n_samples {
            if !n.is_power_of_two() || n < 8 {
                bail!("n_samples must be a power of two >= 8, got {n}");
            }
        }
        Ok(RunConfig {
            n_samples,
            seed: args.seed.or(file.seed).unwrap_or(0),
            tol,
            output_path: args.out.clone().or(file.output_path),
            emit_plot_data: file.emit_plot_data,
        })
    }

    /// Grid for commands that generate their own functions.
    pub fn grid(&self) -> usize {
        self.n_samples.unwrap_or(DEFAULT_N)
    }

    pub fn tol(&self, name: &str, default: f64) -> f64 {
        self.tol.get(name).copied().unwrap_or(default)
    }

    pub fn plot_path(&self) -> Option<PathBuf> {
        self.emit_plot_data.clone()
    }
}

pub fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let value: f64 = value.parse().map_err(|e| format!("bad tolerance '{value}': {e}"))?;
    Ok((name.to_string(), value))
}
