//! Experiment configuration files.
//!
//! A configuration is a TOML document with one `[[experiment]]` table per
//! named run:
//!
//! ```toml
//! [[experiment]]
//! name = "A"
//! mu = 10.0        # population mean
//! var_d = 10.0     # between-source variance
//! mu_d = 9.0       # mean of the named source
//! var_u = 2.0      # within-source variance of the trace
//! var_s = 1.0      # within-source variance of the control
//! n_reps = 1000    # replicates per truth column
//! comparison = "cs_vs_ss"
//! seed = 42
//! ```
//!
//! `comparison` selects the column plotted against `lr_ss`:
//! `cs_vs_ss`, `slr_cs_vs_ss`, `slr_es_vs_ss`, `asy_vs_ss` or `all`.

use crate::cli_error::{CliError, CliResult};
use evidentia_core::{Comparison, ExperimentConfig, SpecificSourceParams};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub experiment: Vec<ExperimentEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentEntry {
    pub name: String,
    pub mu: f64,
    pub var_d: f64,
    pub mu_d: f64,
    pub var_u: f64,
    pub var_s: f64,
    pub n_reps: usize,
    pub comparison: ComparisonName,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonName {
    CsVsSs,
    SlrCsVsSs,
    SlrEsVsSs,
    AsyVsSs,
    All,
}

impl From<ComparisonName> for Comparison {
    fn from(c: ComparisonName) -> Comparison {
        match c {
            ComparisonName::CsVsSs => Comparison::CsVsSs,
            ComparisonName::SlrCsVsSs => Comparison::SlrCsVsSs,
            ComparisonName::SlrEsVsSs => Comparison::SlrEsVsSs,
            ComparisonName::AsyVsSs => Comparison::AsyVsSs,
            ComparisonName::All => Comparison::All,
        }
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let file: ConfigFile = toml::from_str(text)
            .map_err(|e| CliError::Usage(format!("config parse error: {e}")))?;
        if file.experiment.is_empty() {
            return Err(CliError::Usage("config defines no [[experiment]] entries".into()));
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Usage(m) => CliError::Usage(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

impl ExperimentEntry {
    /// Resolve into a runnable configuration, applying CLI overrides.
    pub fn to_config(
        &self,
        seed_override: Option<u64>,
        reps_override: Option<usize>,
    ) -> CliResult<ExperimentConfig> {
        let params = SpecificSourceParams::new(self.mu, self.var_d, self.mu_d, self.var_u, self.var_s)
            .map_err(|e| CliError::Usage(format!("experiment '{}': {e}", self.name)))?;
        ExperimentConfig::new(
            self.name.clone(),
            params,
            reps_override.unwrap_or(self.n_reps),
            self.comparison.into(),
            seed_override.unwrap_or(self.seed),
        )
        .map_err(|e| CliError::Usage(format!("experiment '{}': {e}", self.name)))
    }
}
