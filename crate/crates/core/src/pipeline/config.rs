use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::distances::{Feature, LogBase};
use crate::error::{Error, Result};

/// Run configuration, usually read from a TOML file. Relative input paths and
/// `out` are resolved against the directory of the configuration file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub papers: Option<PathBuf>,
    pub affiliations: Option<PathBuf>,
    pub conferences: Option<PathBuf>,
    pub metadata: Option<PathBuf>,
    /// GeoJSON country polygons. Only needed when some affiliation or
    /// conference row carries no ISO code.
    pub boundaries: Option<PathBuf>,
    pub industrial_ids: Option<PathBuf>,
    pub log_base: LogBase,
    pub top_k: usize,
    pub bins: usize,
    /// Fit the per-period panel in the regress stage.
    pub periods: bool,
    /// Countries whose pairs are left out of the extra density variants.
    pub exclude: Vec<String>,
    pub out: PathBuf,
    pub seed: u64,
    /// Regression columns by name; all fifteen when absent.
    pub regression_features: Option<Vec<String>>,
    /// Multiplier applied to DIC for the full-table OLS fit.
    pub ols_scale: f64,
    pub synth_countries: usize,
    pub synth_rows: Option<usize>,
    /// Constant zero probability for the synthetic response; the default
    /// zero component depends on the distances.
    pub synth_zero_share: Option<f64>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            papers: None,
            affiliations: None,
            conferences: None,
            metadata: None,
            boundaries: None,
            industrial_ids: None,
            log_base: LogBase::Ten,
            top_k: 30,
            bins: 20,
            periods: true,
            exclude: Vec::new(),
            out: PathBuf::from("out"),
            seed: 20_190_101,
            regression_features: None,
            ols_scale: 1.0,
            synth_countries: 101,
            synth_rows: Some(5000),
            synth_zero_share: None,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Invalid(format!("configuration: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml_str(&text).map_err(|e| Error::format(path, e.to_string()))?;
        if let Some(dir) = path.parent() {
            config.rebase(dir);
        }
        Ok(config)
    }

    /// Prefixes every relative path with `dir`.
    pub fn rebase(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        for p in [
            &mut self.papers,
            &mut self.affiliations,
            &mut self.conferences,
            &mut self.metadata,
            &mut self.boundaries,
            &mut self.industrial_ids,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
        fix(&mut self.out);
    }

    /// Parsed regression columns, in the order given.
    pub fn features(&self) -> Result<Vec<Feature>> {
        match &self.regression_features {
            None => Ok(Feature::ALL.to_vec()),
            Some(names) if names.is_empty() => Err(Error::Invalid("regression_features is empty".into())),
            Some(names) => names.iter().map(|n| n.parse()).collect(),
        }
    }

    /// Checks values that do not depend on the file system.
    pub fn validate(&self) -> Result<()> {
        if self.bins < 2 {
            return Err(Error::TooFewBins(self.bins));
        }
        if self.top_k == 0 {
            return Err(Error::Invalid("top_k must be at least 1".into()));
        }
        if !(self.ols_scale.is_finite() && self.ols_scale > 0.0) {
            return Err(Error::Invalid("ols_scale must be positive".into()));
        }
        if let Some(share) = self.synth_zero_share {
            if !(share > 0.0 && share < 1.0) {
                return Err(Error::Invalid("synth_zero_share must lie in (0, 1)".into()));
            }
        }
        if self.synth_countries < 3 {
            return Err(Error::Invalid("synth_countries must be at least 3".into()));
        }
        self.features()?;
        Ok(())
    }
}
