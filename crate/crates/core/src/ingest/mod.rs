//! Corpus ingestion: tab-separated paper and affiliation tables, record
//! filtering, country attribution and industrial flags.
//!
//! Parsing never silently discards input. Every raw row ends up either as a
//! kept record or under exactly one [`DropReason`] in the [`IngestReport`].

mod geocode;
mod table;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use geocode::{load_boundaries, resolve_country, ring_contains, CountryBoundary, FALLBACK_RADIUS_KM};
pub use table::{read_table, Table};

/// Earliest publication year admitted by the filter.
pub const MIN_YEAR: i32 = 1950;
/// Latest publication year admitted by the filter.
pub const MAX_YEAR: i32 = 2019;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub latitude: f64,
    pub longitude: f64,
}

impl GeoPoint {
    pub fn new(latitude: f64, longitude: f64) -> Result<Self> {
        let point = GeoPoint { latitude, longitude };
        if point.is_valid() {
            Ok(point)
        } else {
            Err(Error::Invalid(format!(
                "coordinate ({latitude}, {longitude}) out of range"
            )))
        }
    }

    pub fn is_valid(&self) -> bool {
        (-90.0..=90.0).contains(&self.latitude) && (-180.0..=180.0).contains(&self.longitude)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocType {
    Journal,
    Conference,
    Patent,
}

impl DocType {
    /// Maps a raw document-type label onto an admitted kind. Anything else
    /// (book, book chapter, thesis, ...) is inadmissible.
    pub fn parse(label: &str) -> Option<DocType> {
        match label.trim().to_ascii_lowercase().as_str() {
            "journal" | "journal paper" | "journal_paper" => Some(DocType::Journal),
            "conference" | "conference paper" | "conference_paper" => Some(DocType::Conference),
            "patent" => Some(DocType::Patent),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DocType::Journal => "journal",
            DocType::Conference => "conference",
            DocType::Patent => "patent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicationRecord {
    pub paper_id: String,
    pub year: i32,
    pub doc_type: DocType,
    pub citation_count: u64,
    /// One entry per authorship; the same affiliation may appear repeatedly.
    pub affiliation_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Affiliation {
    pub affiliation_id: String,
    pub name: String,
    pub location: GeoPoint,
    pub country: Option<String>,
    pub industrial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DropReason {
    /// Wrong column count or an unparseable numeric field.
    Malformed,
    DocType,
    YearOutOfRange,
    SingleAuthor,
    MissingMetadata,
    /// The paper links an affiliation id absent from the affiliation table.
    UnknownAffiliation,
    /// One of the paper's affiliations could not be placed in any country.
    UnresolvedCountry,
}

impl DropReason {
    pub const ALL: [DropReason; 7] = [
        DropReason::Malformed,
        DropReason::DocType,
        DropReason::YearOutOfRange,
        DropReason::SingleAuthor,
        DropReason::MissingMetadata,
        DropReason::UnknownAffiliation,
        DropReason::UnresolvedCountry,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DropReason::Malformed => "malformed",
            DropReason::DocType => "doc_type",
            DropReason::YearOutOfRange => "year_out_of_range",
            DropReason::SingleAuthor => "single_author",
            DropReason::MissingMetadata => "missing_metadata",
            DropReason::UnknownAffiliation => "unknown_affiliation",
            DropReason::UnresolvedCountry => "unresolved_country",
        }
    }
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A paper row after column splitting but before any filtering. Empty cells
/// are `None`; cells that were present but unparseable never reach this type.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawPaperRow {
    pub paper_id: Option<String>,
    pub year: Option<i32>,
    pub doc_type: Option<String>,
    pub citation_count: Option<u64>,
    pub affiliation_ids: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Keep(PublicationRecord),
    Drop(DropReason),
}

/// Applies the admission rules to one parsed row. Total: every row gets a
/// verdict.
pub fn filter_record(row: &RawPaperRow) -> Verdict {
    let (Some(paper_id), Some(year), Some(doc_label), Some(citation_count)) = (
        row.paper_id.as_ref(),
        row.year,
        row.doc_type.as_ref(),
        row.citation_count,
    ) else {
        return Verdict::Drop(DropReason::MissingMetadata);
    };
    if row.affiliation_ids.is_empty() {
        return Verdict::Drop(DropReason::MissingMetadata);
    }
    let Some(doc_type) = DocType::parse(doc_label) else {
        return Verdict::Drop(DropReason::DocType);
    };
    if !(MIN_YEAR..=MAX_YEAR).contains(&year) {
        return Verdict::Drop(DropReason::YearOutOfRange);
    }
    if row.affiliation_ids.len() < 2 {
        return Verdict::Drop(DropReason::SingleAuthor);
    }
    Verdict::Keep(PublicationRecord {
        paper_id: paper_id.clone(),
        year,
        doc_type,
        citation_count,
        affiliation_ids: row.affiliation_ids.clone(),
    })
}

/// Row accounting for one ingest run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestReport {
    pub paper_rows: usize,
    pub kept: usize,
    pub dropped: BTreeMap<DropReason, usize>,
    pub affiliation_rows: usize,
    pub affiliations_malformed: usize,
    pub affiliations_geocoded: usize,
    pub affiliations_unresolved: usize,
    pub unknown_industrial_ids: usize,
}

impl IngestReport {
    pub fn dropped_total(&self) -> usize {
        self.dropped.values().sum()
    }

    pub fn count(&self, reason: DropReason) -> usize {
        self.dropped.get(&reason).copied().unwrap_or(0)
    }

    fn drop(&mut self, reason: DropReason) {
        *self.dropped.entry(reason).or_default() += 1;
    }
}

fn cell(value: &str) -> Option<String> {
    let trimmed = value.trim();
    (!trimmed.is_empty()).then(|| trimmed.to_string())
}

fn split_ids(value: &str) -> Vec<String> {
    value
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

fn parse_optional<T: std::str::FromStr>(value: &str) -> std::result::Result<Option<T>, ()> {
    match cell(value) {
        None => Ok(None),
        Some(text) => text.parse().map(Some).map_err(|_| ()),
    }
}

/// Splits one data row of the paper table. `None` means the row is malformed.
pub fn parse_paper_row(table: &Table, fields: &[String]) -> Option<RawPaperRow> {
    if fields.len() != table.headers.len() {
        return None;
    }
    let get = |name: &str| table.column(name).map(|i| fields[i].as_str()).unwrap_or("");
    Some(RawPaperRow {
        paper_id: cell(get("paper_id")),
        year: parse_optional(get("year")).ok()?,
        doc_type: cell(get("doc_type")),
        citation_count: parse_optional(get("citation_count")).ok()?,
        affiliation_ids: split_ids(get("affiliation_ids")),
    })
}

/// Parses the paper table and applies [`filter_record`] to each row.
pub fn parse_papers(path: &Path, report: &mut IngestReport) -> Result<Vec<PublicationRecord>> {
    let table = read_table(path)?;
    table.require(
        path,
        &["paper_id", "year", "doc_type", "citation_count", "affiliation_ids"],
    )?;
    let mut records = Vec::new();
    for fields in &table.rows {
        report.paper_rows += 1;
        let verdict = match parse_paper_row(&table, fields) {
            Some(row) => filter_record(&row),
            None => Verdict::Drop(DropReason::Malformed),
        };
        match verdict {
            Verdict::Keep(record) => records.push(record),
            Verdict::Drop(reason) => report.drop(reason),
        }
    }
    Ok(records)
}

/// Parses the affiliation table. An optional `industrial` column (0/1) is
/// honoured so the tool can re-read its own intermediates.
pub fn parse_affiliations(path: &Path, report: &mut IngestReport) -> Result<Vec<Affiliation>> {
    let table = read_table(path)?;
    table.require(path, &["affiliation_id", "name", "latitude", "longitude"])?;
    let mut out = Vec::new();
    for fields in &table.rows {
        report.affiliation_rows += 1;
        match parse_affiliation_row(&table, fields) {
            Some(affiliation) => out.push(affiliation),
            None => report.affiliations_malformed += 1,
        }
    }
    Ok(out)
}

fn parse_affiliation_row(table: &Table, fields: &[String]) -> Option<Affiliation> {
    if fields.len() != table.headers.len() {
        return None;
    }
    let get = |name: &str| table.column(name).map(|i| fields[i].as_str()).unwrap_or("");
    let affiliation_id = cell(get("affiliation_id"))?;
    let latitude: f64 = get("latitude").trim().parse().ok()?;
    let longitude: f64 = get("longitude").trim().parse().ok()?;
    let location = GeoPoint::new(latitude, longitude).ok()?;
    let industrial = match get("industrial").trim() {
        "" | "0" | "false" => false,
        "1" | "true" => true,
        _ => return None,
    };
    Some(Affiliation {
        affiliation_id,
        name: get("name").trim().to_string(),
        location,
        country: cell(get("iso3")).map(|c| c.to_ascii_uppercase()),
        industrial,
    })
}

/// Parses both corpus tables. Rows are filtered; affiliations are returned
/// as read, without country resolution.
pub fn parse_corpus(
    papers_file: &Path,
    affiliations_file: &Path,
) -> Result<(Vec<PublicationRecord>, Vec<Affiliation>, IngestReport)> {
    let mut report = IngestReport::default();
    let papers = parse_papers(papers_file, &mut report)?;
    let affiliations = parse_affiliations(affiliations_file, &mut report)?;
    report.kept = papers.len();
    Ok((papers, affiliations, report))
}

/// Reads an industrial-id list: one affiliation id per line, blanks ignored.
pub fn load_industrial_ids(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect())
}

/// Sets `industrial` to true exactly for the listed ids. Returns the updated
/// list and the number of listed ids that match no affiliation.
pub fn flag_industrial(mut affiliations: Vec<Affiliation>, ids: &[String]) -> (Vec<Affiliation>, usize) {
    let listed: BTreeSet<&str> = ids.iter().map(String::as_str).collect();
    let known: BTreeSet<String> = affiliations.iter().map(|a| a.affiliation_id.clone()).collect();
    for affiliation in &mut affiliations {
        affiliation.industrial = listed.contains(affiliation.affiliation_id.as_str());
    }
    let unknown = listed.iter().filter(|id| !known.contains(**id)).count();
    (affiliations, unknown)
}

/// A filtered corpus whose every authorship resolves to a country.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub papers: Vec<PublicationRecord>,
    pub affiliations: Vec<Affiliation>,
    index: HashMap<String, usize>,
}

impl Corpus {
    pub fn new(papers: Vec<PublicationRecord>, affiliations: Vec<Affiliation>) -> Self {
        let index = affiliations
            .iter()
            .enumerate()
            .map(|(i, a)| (a.affiliation_id.clone(), i))
            .collect();
        Corpus {
            papers,
            affiliations,
            index,
        }
    }

    pub fn affiliation(&self, id: &str) -> Option<&Affiliation> {
        self.index.get(id).map(|&i| &self.affiliations[i])
    }

    /// Distinct countries on a paper, sorted.
    pub fn countries_of(&self, paper: &PublicationRecord) -> BTreeSet<&str> {
        paper
            .affiliation_ids
            .iter()
            .filter_map(|id| self.affiliation(id))
            .filter_map(|a| a.country.as_deref())
            .collect()
    }

    pub fn is_international(&self, paper: &PublicationRecord) -> bool {
        self.countries_of(paper).len() >= 2
    }

    /// Sub-corpus of papers whose year lies in `[from, to]`.
    pub fn restrict_years(&self, from: i32, to: i32) -> Corpus {
        let papers = self
            .papers
            .iter()
            .filter(|p| (from..=to).contains(&p.year))
            .cloned()
            .collect();
        Corpus::new(papers, self.affiliations.clone())
    }
}

/// Attributes countries to affiliations that lack one and drops papers whose
/// authorships cannot all be placed. Affiliations carrying an ISO code are
/// never geocoded.
pub fn assemble_corpus(
    papers: Vec<PublicationRecord>,
    mut affiliations: Vec<Affiliation>,
    boundaries: &[CountryBoundary],
    report: &mut IngestReport,
) -> Corpus {
    for affiliation in affiliations.iter_mut().filter(|a| a.country.is_none()) {
        match resolve_country(affiliation.location, boundaries) {
            Some(code) => {
                affiliation.country = Some(code);
                report.affiliations_geocoded += 1;
            }
            None => report.affiliations_unresolved += 1,
        }
    }
    let staging = Corpus::new(Vec::new(), affiliations);
    let mut kept = Vec::with_capacity(papers.len());
    for paper in papers {
        let mut reason = None;
        for id in &paper.affiliation_ids {
            match staging.affiliation(id) {
                None => {
                    reason = Some(DropReason::UnknownAffiliation);
                    break;
                }
                Some(a) if a.country.is_none() => reason = Some(DropReason::UnresolvedCountry),
                Some(_) => {}
            }
        }
        match reason {
            Some(reason) => report.drop(reason),
            None => kept.push(paper),
        }
    }
    report.kept = kept.len();
    Corpus::new(kept, staging.affiliations)
}
