use std::collections::BTreeMap;

use serde::Serialize;

use super::{regress_pairs, ModelOutcome};
use crate::distances::{build_pair_table, Feature, LogBase};
use crate::error::{Error, Result};
use crate::ingest::{Corpus, MAX_YEAR, MIN_YEAR};
use crate::network::joint_counts;
use crate::profiles::{build_profiles, ConferenceCounts, CountryMeta};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Period {
    pub label: String,
    pub from: i32,
    pub to: i32,
}

impl Period {
    pub fn new(label: &str, from: i32, to: i32) -> Self {
        Period {
            label: label.to_string(),
            from,
            to,
        }
    }
}

/// Labelled, disjoint year ranges covering the admitted publication years.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodPartition {
    pub periods: Vec<Period>,
}

impl Default for PeriodPartition {
    fn default() -> Self {
        PeriodPartition {
            periods: vec![
                Period::new("Embryo", 1950, 1999),
                Period::new("Stable", 2000, 2007),
                Period::new("Machine Learning", 2008, 2013),
                Period::new("Deep learning", 2014, 2019),
            ],
        }
    }
}

impl PeriodPartition {
    pub fn single() -> Self {
        PeriodPartition {
            periods: vec![Period::new("Total", MIN_YEAR, MAX_YEAR)],
        }
    }

    /// Periods must be ordered, contiguous, and span exactly
    /// [`MIN_YEAR`]..=[`MAX_YEAR`].
    pub fn validate(&self) -> Result<()> {
        let mut next = MIN_YEAR;
        for p in &self.periods {
            if p.from != next || p.to < p.from {
                return Err(Error::Invalid(format!(
                    "period {} ({}-{}) breaks the partition at year {next}",
                    p.label, p.from, p.to
                )));
            }
            next = p.to + 1;
        }
        if next != MAX_YEAR + 1 {
            return Err(Error::Invalid(format!(
                "partition must end at {MAX_YEAR}, ends at {}",
                next - 1
            )));
        }
        Ok(())
    }
}

/// Static country attributes reused by every period.
#[derive(Debug, Clone, Copy)]
pub struct PanelContext<'a> {
    pub metadata: &'a BTreeMap<String, CountryMeta>,
    pub conferences: &'a ConferenceCounts,
    pub log_base: LogBase,
    pub features: &'a [Feature],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelEntry {
    pub period: Period,
    pub n_papers: usize,
    pub n_international: usize,
    /// International share of the period's papers, in percent.
    pub percentage: f64,
    pub n_pairs: usize,
    /// Response multiplied by 100.
    pub ols: ModelOutcome,
    pub zibeta: ModelOutcome,
    pub warnings: Vec<String>,
}

/// Rebuilds profiles and the pair table from each period's papers alone and
/// fits both models on it.
pub fn fit_panel(corpus: &Corpus, partition: &PeriodPartition, ctx: PanelContext<'_>) -> Result<Vec<PanelEntry>> {
    partition.validate()?;
    partition
        .periods
        .iter()
        .map(|period| {
            let sub = corpus.restrict_years(period.from, period.to);
            let n_papers = sub.papers.len();
            let n_international = sub.papers.iter().filter(|p| sub.is_international(p)).count();
            let percentage = if n_papers == 0 {
                0.0
            } else {
                100.0 * n_international as f64 / n_papers as f64
            };
            let mut entry = PanelEntry {
                period: period.clone(),
                n_papers,
                n_international,
                percentage,
                n_pairs: 0,
                ols: ModelOutcome::skipped("empty period"),
                zibeta: ModelOutcome::skipped("empty period"),
                warnings: Vec::new(),
            };
            if n_papers == 0 {
                return Ok(entry);
            }
            let (profiles, mut warnings) = build_profiles(&sub, ctx.metadata, ctx.conferences)?;
            let pairs = build_pair_table(&profiles, &joint_counts(&sub), ctx.log_base)?;
            entry.n_pairs = pairs.len();
            if pairs.is_empty() {
                entry.ols = ModelOutcome::skipped("fewer than two countries");
                entry.zibeta = ModelOutcome::skipped("fewer than two countries");
                entry.warnings = warnings;
                return Ok(entry);
            }
            let outcome = regress_pairs(&pairs, ctx.features, 100.0)?;
            entry.ols = outcome.ols;
            entry.zibeta = if n_international == 0 {
                ModelOutcome::skipped("no international papers in period")
            } else {
                outcome.zibeta
            };
            warnings.extend(outcome.warnings);
            entry.warnings = warnings;
            Ok(entry)
        })
        .collect()
}
