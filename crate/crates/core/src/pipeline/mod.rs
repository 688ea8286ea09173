//! File-based stages: `ingest` → `features` → `analyze` / `regress`, plus
//! `synth`. Each stage reads only the configured inputs or files written by
//! earlier stages into the output directory, and records its warnings and
//! counts in `run_log.jsonl` there.

mod config;
pub mod io;

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::distances::{build_pair_table, masking_summary, Feature, PairFeatures};
use crate::error::Error;
use crate::inference::{
    fit_panel, regress_pairs, ModelOutcome, PanelContext, PanelEntry, PeriodPartition, RegressionOutcome, INTERCEPT,
};
use crate::ingest::{
    assemble_corpus, flag_industrial, load_boundaries, load_industrial_ids, parse_affiliations, parse_corpus,
    parse_papers, Corpus, DropReason, IngestReport,
};
use crate::network::{centralities, joint_counts, top_k_subnetwork, CollabNetwork, PairKey};
use crate::profiles::{
    build_profiles, conferences_per_country, load_metadata, ConferenceCounts, CountryMeta, CountryProfile,
};
use crate::synth::{synthesize, SynthConfig};
use crate::trends::{annual_series, copub_distance_density, year_correlations};

pub use config::PipelineConfig;

pub const CORPUS_FILE: &str = "corpus.csv";
pub const AFFILIATIONS_FILE: &str = "affiliations.csv";
pub const CONFERENCES_FILE: &str = "conferences.csv";
pub const PROFILES_FILE: &str = "profiles.csv";
pub const DROP_REPORT_FILE: &str = "drop_report.csv";
pub const PAIRS_FILE: &str = "pair_features.csv";
pub const MASKING_FILE: &str = "masking_summary.csv";
pub const REGRESSION_FILE: &str = "regression_report.json";
pub const TRUTH_FILE: &str = "truth.json";
pub const RUN_LOG_FILE: &str = "run_log.jsonl";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Ingest,
    Features,
    Analyze,
    Regress,
    Synth,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Ingest => "ingest",
            Stage::Features => "features",
            Stage::Analyze => "analyze",
            Stage::Regress => "regress",
            Stage::Synth => "synth",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    /// Missing, unreadable or malformed inputs and configuration.
    Input,
    /// The inputs were read but the computation could not complete.
    Stage,
}

#[derive(Debug)]
pub struct PipelineError {
    pub stage: Stage,
    pub kind: FailureKind,
    pub error: Error,
}

impl PipelineError {
    fn input(stage: Stage, error: Error) -> Self {
        PipelineError {
            stage,
            kind: FailureKind::Input,
            error,
        }
    }

    /// Classifies by error variant: reading problems are input errors,
    /// everything else is a stage failure.
    fn from_error(stage: Stage, error: Error) -> Self {
        let kind = match error {
            Error::Io { .. } | Error::Format { .. } | Error::MissingColumn { .. } | Error::Csv(_) => FailureKind::Input,
            _ => FailureKind::Stage,
        };
        PipelineError { stage, kind, error }
    }

    /// 2 for input errors, 3 for stage failures.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            FailureKind::Input => 2,
            FailureKind::Stage => 3,
        }
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {} failed: {}", self.stage, self.error)
    }
}

impl std::error::Error for PipelineError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

pub type StageResult<T> = std::result::Result<T, PipelineError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Info,
    Warning,
}

/// One line of `run_log.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRecord {
    pub stage: Stage,
    pub level: Level,
    pub message: String,
}

/// What a stage wrote and reported.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StageOutput {
    pub files: Vec<PathBuf>,
    pub log: Vec<LogRecord>,
}

impl StageOutput {
    pub fn warnings(&self) -> impl Iterator<Item = &str> {
        self.log
            .iter()
            .filter(|r| r.level == Level::Warning)
            .map(|r| r.message.as_str())
    }
}

struct Recorder {
    stage: Stage,
    out: PathBuf,
    output: StageOutput,
}

impl Recorder {
    fn new(stage: Stage, config: &PipelineConfig) -> StageResult<Self> {
        config.validate().map_err(|e| PipelineError::input(stage, e))?;
        std::fs::create_dir_all(&config.out).map_err(|e| PipelineError::input(stage, Error::io(&config.out, e)))?;
        Ok(Recorder {
            stage,
            out: config.out.clone(),
            output: StageOutput::default(),
        })
    }

    fn info(&mut self, message: impl Into<String>) {
        self.push(Level::Info, message.into());
    }

    fn warn(&mut self, message: impl Into<String>) {
        self.push(Level::Warning, message.into());
    }

    fn push(&mut self, level: Level, message: String) {
        self.output.log.push(LogRecord {
            stage: self.stage,
            level,
            message,
        });
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    /// Runs a writer for `name` and remembers the file.
    fn write(&mut self, name: &str, f: impl FnOnce(&Path) -> crate::Result<()>) -> StageResult<()> {
        let path = self.path(name);
        f(&path).map_err(|e| PipelineError::from_error(self.stage, e))?;
        self.output.files.push(path);
        Ok(())
    }

    fn fail(&self, error: Error) -> PipelineError {
        PipelineError::from_error(self.stage, error)
    }

    fn input(&self, error: Error) -> PipelineError {
        PipelineError::input(self.stage, error)
    }

    /// Path of an intermediate that an earlier stage must have written.
    fn intermediate(&self, name: &str, producer: &str) -> StageResult<PathBuf> {
        let path = self.path(name);
        if path.is_file() {
            Ok(path)
        } else {
            Err(self.input(Error::Invalid(format!(
                "missing intermediate {}; run `collabdist {producer}` first",
                path.display()
            ))))
        }
    }

    /// Replaces this stage's records in the run log, keeping the others, and
    /// orders the file by stage.
    fn finish(mut self) -> StageResult<StageOutput> {
        let path = self.path(RUN_LOG_FILE);
        let mut records: Vec<LogRecord> = match std::fs::read_to_string(&path) {
            Ok(text) => text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .filter_map(|l| serde_json::from_str::<LogRecord>(l).ok())
                .filter(|r| r.stage != self.stage)
                .collect(),
            Err(_) => Vec::new(),
        };
        records.extend(self.output.log.iter().cloned());
        records.sort_by_key(|r| r.stage);
        let mut text = String::new();
        for r in &records {
            text.push_str(&serde_json::to_string(r).map_err(|e| self.fail(e.into()))?);
            text.push('\n');
        }
        std::fs::write(&path, text).map_err(|e| self.fail(Error::io(&path, e)))?;
        self.output.files.push(path);
        Ok(self.output)
    }
}

fn required_input<'a>(rec: &Recorder, value: &'a Option<PathBuf>, key: &str) -> StageResult<&'a Path> {
    let path = value
        .as_deref()
        .ok_or_else(|| rec.input(Error::Invalid(format!("configuration does not set `{key}`"))))?;
    check_file(rec, path)?;
    Ok(path)
}

fn check_file(rec: &Recorder, path: &Path) -> StageResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(rec.input(Error::Invalid(format!("input file {} does not exist", path.display()))))
    }
}

/// Inputs of the ingest stage, all checked before anything is read.
struct IngestInputs<'a> {
    papers: &'a Path,
    affiliations: &'a Path,
    conferences: &'a Path,
    metadata: &'a Path,
    boundaries: Option<&'a Path>,
    industrial_ids: Option<&'a Path>,
}

fn ingest_inputs<'a>(rec: &Recorder, config: &'a PipelineConfig) -> StageResult<IngestInputs<'a>> {
    let inputs = IngestInputs {
        papers: required_input(rec, &config.papers, "papers")?,
        affiliations: required_input(rec, &config.affiliations, "affiliations")?,
        conferences: required_input(rec, &config.conferences, "conferences")?,
        metadata: required_input(rec, &config.metadata, "metadata")?,
        boundaries: config.boundaries.as_deref(),
        industrial_ids: config.industrial_ids.as_deref(),
    };
    for path in inputs.boundaries.iter().chain(inputs.industrial_ids.iter()) {
        check_file(rec, path)?;
    }
    Ok(inputs)
}

fn log_ingest_report(rec: &mut Recorder, report: &IngestReport) {
    rec.info(format!("paper rows read: {}", report.paper_rows));
    rec.info(format!("papers kept: {}", report.kept));
    for reason in DropReason::ALL {
        let n = report.count(reason);
        if n > 0 {
            rec.info(format!("papers dropped ({reason}): {n}"));
        }
    }
    rec.info(format!("affiliation rows read: {}", report.affiliation_rows));
    rec.info(format!("affiliations geocoded: {}", report.affiliations_geocoded));
    if report.affiliations_malformed > 0 {
        rec.warn(format!(
            "malformed affiliation rows skipped: {}",
            report.affiliations_malformed
        ));
    }
    if report.affiliations_unresolved > 0 {
        rec.warn(format!(
            "affiliations outside every boundary: {}",
            report.affiliations_unresolved
        ));
    }
    if report.unknown_industrial_ids > 0 {
        rec.warn(format!(
            "industrial ids matching no affiliation: {}",
            report.unknown_industrial_ids
        ));
    }
}

/// Parses, filters and geocodes the corpus, then builds country profiles.
///
/// Writes `corpus.csv`, `affiliations.csv` (with ISO codes and industrial
/// flags), `conferences.csv`, `profiles.csv` and `drop_report.csv`. Because
/// the written tables carry their ISO codes, running ingest again on them
/// needs no boundaries and reproduces the same corpus.
pub fn cmd_ingest(config: &PipelineConfig) -> StageResult<StageOutput> {
    let mut rec = Recorder::new(Stage::Ingest, config)?;
    let inputs = ingest_inputs(&rec, config)?;

    let (papers, affiliations, mut report) =
        parse_corpus(inputs.papers, inputs.affiliations).map_err(|e| rec.fail(e))?;
    let affiliations = match inputs.industrial_ids {
        Some(path) => {
            let ids = load_industrial_ids(path).map_err(|e| rec.fail(e))?;
            let (flagged, unknown) = flag_industrial(affiliations, &ids);
            report.unknown_industrial_ids = unknown;
            flagged
        }
        None => affiliations,
    };
    let boundaries = match inputs.boundaries {
        Some(path) => load_boundaries(path).map_err(|e| rec.fail(e))?,
        None => {
            if affiliations.iter().any(|a| a.country.is_none()) {
                return Err(rec.input(Error::Invalid(
                    "some affiliations have no iso3 code and no boundaries file is configured".into(),
                )));
            }
            Vec::new()
        }
    };
    let corpus = assemble_corpus(papers, affiliations, &boundaries, &mut report);
    log_ingest_report(&mut rec, &report);

    let conferences = conferences_per_country(inputs.conferences, &boundaries).map_err(|e| rec.fail(e))?;
    if inputs.boundaries.is_none() && conferences.unresolved > 0 {
        return Err(rec.input(Error::Invalid(
            "some conference rows have no iso3 code and no boundaries file is configured".into(),
        )));
    }
    rec.info(format!("conferences attributed: {}", conferences.attributed()));
    if conferences.unresolved > 0 {
        rec.warn(format!(
            "conferences outside every boundary: {}",
            conferences.unresolved
        ));
    }
    if conferences.malformed > 0 {
        rec.warn(format!("malformed conference rows skipped: {}", conferences.malformed));
    }

    let metadata = load_metadata(inputs.metadata).map_err(|e| rec.fail(e))?;
    let (profiles, warnings) = build_profiles(&corpus, &metadata, &conferences).map_err(|e| rec.fail(e))?;
    for w in warnings {
        rec.warn(w);
    }
    rec.info(format!("countries: {}", profiles.len()));

    rec.write(CORPUS_FILE, |p| io::write_corpus(p, &corpus.papers))?;
    rec.write(AFFILIATIONS_FILE, |p| io::write_affiliations(p, &corpus.affiliations))?;
    rec.write(CONFERENCES_FILE, |p| io::write_conferences(p, &conferences.sites))?;
    rec.write(PROFILES_FILE, |p| io::write_profiles(p, &profiles))?;
    rec.write(DROP_REPORT_FILE, |p| io::write_drop_report(p, &report))?;
    rec.finish()
}

fn load_corpus_intermediates(rec: &Recorder) -> StageResult<Corpus> {
    let corpus_path = rec.intermediate(CORPUS_FILE, "ingest")?;
    let affiliations_path = rec.intermediate(AFFILIATIONS_FILE, "ingest")?;
    let mut report = IngestReport::default();
    let papers = parse_papers(&corpus_path, &mut report).map_err(|e| rec.fail(e))?;
    let affiliations = parse_affiliations(&affiliations_path, &mut report).map_err(|e| rec.fail(e))?;
    if report.dropped_total() > 0 || report.affiliations_malformed > 0 {
        return Err(rec.input(Error::format(
            &corpus_path,
            "intermediate corpus contains rows that do not pass ingestion; rerun ingest",
        )));
    }
    let corpus = Corpus::new(papers, affiliations);
    if let Some(paper) = corpus.papers.iter().find(|p| {
        p.affiliation_ids
            .iter()
            .any(|id| corpus.affiliation(id).and_then(|a| a.country.as_ref()).is_none())
    }) {
        return Err(rec.input(Error::format(
            &affiliations_path,
            format!(
                "paper {} links an affiliation without a country; rerun ingest",
                paper.paper_id
            ),
        )));
    }
    Ok(corpus)
}

fn load_profiles(rec: &Recorder, producer: &str) -> StageResult<Vec<CountryProfile>> {
    let path = rec.intermediate(PROFILES_FILE, producer)?;
    io::read_profiles(&path).map_err(|e| rec.fail(e))
}

fn load_pairs(rec: &Recorder) -> StageResult<Vec<PairFeatures>> {
    let path = rec.intermediate(PAIRS_FILE, "features")?;
    io::read_pairs(&path).map_err(|e| rec.fail(e))
}

/// Builds the pair table from the ingest intermediates and writes
/// `pair_features.csv` and `masking_summary.csv`.
pub fn cmd_features(config: &PipelineConfig) -> StageResult<StageOutput> {
    let mut rec = Recorder::new(Stage::Features, config)?;
    let profiles = load_profiles(&rec, "ingest")?;
    let corpus = load_corpus_intermediates(&rec)?;
    let pairs = build_pair_table(&profiles, &joint_counts(&corpus), config.log_base).map_err(|e| rec.fail(e))?;
    let summary = masking_summary(&pairs);
    rec.info(format!("pairs: {} (dECO log base {})", pairs.len(), config.log_base));
    for (feature, n) in &summary {
        if *n > 0 {
            rec.warn(format!("{feature} masked in {n} pairs"));
        }
    }
    rec.write(PAIRS_FILE, |p| io::write_pairs(p, &pairs))?;
    rec.write(MASKING_FILE, |p| io::write_masking_summary(p, &summary))?;
    rec.finish()
}

/// Trends, correlations, co-publication densities (plus one variant per
/// excluded country) and centralities of the top-k network.
pub fn cmd_analyze(config: &PipelineConfig) -> StageResult<StageOutput> {
    let mut rec = Recorder::new(Stage::Analyze, config)?;
    let profiles = load_profiles(&rec, "ingest")?;
    let corpus = load_corpus_intermediates(&rec)?;
    let pairs = load_pairs(&rec)?;

    let series = annual_series(&corpus, &pairs);
    rec.write("trends.csv", |p| io::write_trends(p, &series))?;
    let correlations = year_correlations(&series);
    rec.write("correlations.csv", |p| io::write_correlations(p, &correlations))?;

    let excluded: Vec<String> = config.exclude.iter().map(|c| c.trim().to_ascii_uppercase()).collect();
    for code in &excluded {
        if !profiles.iter().any(|p| &p.country == code) {
            rec.warn(format!("excluded country {code} is not in the corpus"));
        }
    }
    for feature in Feature::DISTANCES {
        let variants = std::iter::once(None).chain(excluded.iter().map(|c| Some(c.as_str())));
        for exclude in variants {
            let name = match exclude {
                None => format!("density_{}.csv", feature.name()),
                Some(code) => format!("density_{}_excl_{code}.csv", feature.name()),
            };
            match copub_distance_density(&pairs, feature, config.bins, exclude) {
                Ok(h) => rec.write(&name, |p| io::write_histogram(p, &h))?,
                Err(Error::NoCopublications) => {
                    rec.warn(format!("{name} not written: no co-publications with a valid {feature}"))
                }
                Err(e) => return Err(rec.fail(e)),
            }
        }
    }

    let counts: std::collections::BTreeMap<PairKey, u64> = pairs
        .iter()
        .filter(|p| p.c_ij > 0)
        .map(|p| (PairKey::new(&p.a, &p.b), p.c_ij))
        .collect();
    let network = CollabNetwork::new(
        profiles.iter().filter(|p| p.n_papers >= 1).map(|p| p.country.clone()),
        &counts,
    );
    let top = top_k_subnetwork(&network, &profiles, config.top_k);
    if config.top_k < network.nodes.len() {
        rec.info(format!(
            "network restricted to the top {} of {} countries",
            config.top_k,
            network.nodes.len()
        ));
    }
    let scores = centralities(&top);
    let papers = profiles.iter().map(|p| (p.country.clone(), p.n_papers)).collect();
    rec.write("network.csv", |p| io::write_network(p, &top))?;
    rec.write("centrality.csv", |p| io::write_centrality(p, &scores, &papers))?;
    rec.finish()
}

/// Contents of `regression_report.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionReport {
    pub log_base: String,
    pub features: Vec<String>,
    pub ols_scale: f64,
    pub full: RegressionOutcome,
    /// Per-period fits; absent when the panel is disabled or unavailable.
    pub panel: Option<Vec<PanelEntry>>,
}

/// Country attributes recovered from `profiles.csv` for the panel.
fn panel_context_inputs(
    profiles: &[CountryProfile],
) -> (std::collections::BTreeMap<String, CountryMeta>, ConferenceCounts) {
    let metadata = profiles
        .iter()
        .map(|p| {
            (
                p.country.clone(),
                CountryMeta {
                    gdp_per_capita: p.gdp_per_capita,
                    hofstede: p.hofstede,
                    english_official: p.english_official,
                },
            )
        })
        .collect();
    let conferences = ConferenceCounts {
        counts: profiles.iter().map(|p| (p.country.clone(), p.n_conferences)).collect(),
        ..ConferenceCounts::default()
    };
    (metadata, conferences)
}

/// OLS, ZIBeta and VIF on the full pair table and, when `periods` is on and
/// the corpus intermediates exist, on each period's own table.
pub fn cmd_regress(config: &PipelineConfig) -> StageResult<StageOutput> {
    let mut rec = Recorder::new(Stage::Regress, config)?;
    let features = config.features().map_err(|e| rec.input(e))?;
    let pairs = load_pairs(&rec)?;
    let full = regress_pairs(&pairs, &features, config.ols_scale).map_err(|e| rec.fail(e))?;
    for w in &full.warnings {
        rec.warn(w.clone());
    }
    for (name, outcome) in [("OLS", &full.ols), ("ZIBeta", &full.zibeta)] {
        match outcome.fit() {
            Some(fit) => {
                rec.info(format!(
                    "{name}: n = {}, converged = {}, AIC = {}",
                    fit.n_rows,
                    fit.converged,
                    crate::fmt::sig10(fit.aic)
                ));
                for w in &fit.warnings {
                    rec.warn(format!("{name}: {w}"));
                }
            }
            None => rec.warn(format!("{name} not fitted")),
        }
    }
    if let (ModelOutcome::Skipped { skipped: ols }, ModelOutcome::Skipped { skipped: zi }) = (&full.ols, &full.zibeta) {
        return Err(rec.fail(Error::Invalid(format!(
            "no model could be fitted on the pair table (OLS: {ols}; ZIBeta: {zi})"
        ))));
    }

    let panel = if config.periods {
        let have_corpus = [CORPUS_FILE, AFFILIATIONS_FILE, PROFILES_FILE]
            .iter()
            .all(|f| rec.path(f).is_file());
        if have_corpus {
            let corpus = load_corpus_intermediates(&rec)?;
            let profiles = load_profiles(&rec, "ingest")?;
            let (metadata, conferences) = panel_context_inputs(&profiles);
            let ctx = PanelContext {
                metadata: &metadata,
                conferences: &conferences,
                log_base: config.log_base,
                features: &features,
            };
            let entries = fit_panel(&corpus, &PeriodPartition::default(), ctx).map_err(|e| rec.fail(e))?;
            for entry in &entries {
                for w in &entry.warnings {
                    rec.warn(format!("{}: {w}", entry.period.label));
                }
            }
            Some(entries)
        } else {
            rec.warn("period panel skipped: corpus intermediates not found");
            None
        }
    } else {
        None
    };

    let report = RegressionReport {
        log_base: config.log_base.to_string(),
        features: features.iter().map(|f| f.name().to_string()).collect(),
        ols_scale: config.ols_scale,
        full,
        panel,
    };
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| rec.fail(e.into()))?;
    text.push('\n');
    rec.write(REGRESSION_FILE, |p| {
        std::fs::write(p, &text).map_err(|e| Error::io(p, e))
    })?;
    rec.finish()
}

#[derive(Serialize)]
struct NamedValue<'a> {
    name: &'a str,
    value: f64,
}

#[derive(Serialize)]
struct Truth<'a> {
    seed: u64,
    n_countries: usize,
    n_rows: usize,
    zero: Vec<NamedValue<'a>>,
    mean: Vec<NamedValue<'a>>,
    phi: f64,
    empirical_zero_share: f64,
}

/// Synthetic profiles and pair table with DIC drawn from a planted ZIBeta
/// model, plus `truth.json` holding the parameters on the min-max rescaled
/// design.
pub fn cmd_synth(config: &PipelineConfig) -> StageResult<StageOutput> {
    let mut rec = Recorder::new(Stage::Synth, config)?;
    let mut synth = SynthConfig {
        seed: config.seed,
        n_countries: config.synth_countries,
        n_rows: config.synth_rows,
        ..SynthConfig::default()
    };
    if let Some(share) = config.synth_zero_share {
        synth = synth.with_zero_share(share);
    }
    let data = synthesize(&synth).map_err(|e| rec.fail(e))?;
    let names: Vec<&str> = std::iter::once(INTERCEPT)
        .chain(Feature::ALL.iter().map(Feature::name))
        .collect();
    let named = |coef: &[f64]| -> Vec<NamedValue> {
        names
            .iter()
            .zip(coef)
            .map(|(n, v)| NamedValue { name: n, value: *v })
            .collect()
    };
    let truth = Truth {
        seed: synth.seed,
        n_countries: synth.n_countries,
        n_rows: data.pairs.len(),
        zero: named(&synth.zero),
        mean: named(&synth.mean),
        phi: synth.phi,
        empirical_zero_share: data.zero_share(),
    };
    rec.info(format!(
        "synthetic pairs: {}, zero share {}",
        data.pairs.len(),
        crate::fmt::sig10(data.zero_share())
    ));
    let mut text = serde_json::to_string_pretty(&truth).map_err(|e| rec.fail(e.into()))?;
    text.push('\n');
    rec.write(PROFILES_FILE, |p| io::write_profiles(p, &data.profiles))?;
    rec.write(PAIRS_FILE, |p| io::write_pairs(p, &data.pairs))?;
    rec.write(TRUTH_FILE, |p| std::fs::write(p, &text).map_err(|e| Error::io(p, e)))?;
    rec.finish()
}

/// ingest → features → analyze → regress. All inputs are checked before
/// the first stage starts.
pub fn run_all(config: &PipelineConfig) -> StageResult<Vec<StageOutput>> {
    let rec = Recorder::new(Stage::Ingest, config)?;
    ingest_inputs(&rec, config)?;
    Ok(vec![
        cmd_ingest(config)?,
        cmd_features(config)?,
        cmd_analyze(config)?,
        cmd_regress(config)?,
    ])
}
