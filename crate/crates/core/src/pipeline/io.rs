//! Reading and writing the CSV intermediates and reports. Every float goes
//! through [`sig10`]; missing values are empty cells.

use std::collections::BTreeMap;
use std::path::Path;

use crate::distances::{Feature, PairFeatures};
use crate::error::{Error, Result};
use crate::fmt::{opt10, sig10};
use crate::ingest::{read_table, Affiliation, DropReason, GeoPoint, IngestReport, PublicationRecord, Table};
use crate::network::{CentralityScores, CollabNetwork};
use crate::profiles::{ConferenceSite, CountryProfile, Dimension};
use crate::trends::{stars, AnnualSeries, CorrelationReport, Histogram};

/// Writes a header and rows to `path` in one go.
pub fn write_csv<I>(path: &Path, headers: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(headers)?;
    for row in rows {
        writer.write_record(&row)?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

pub fn write_corpus(path: &Path, papers: &[PublicationRecord]) -> Result<()> {
    write_csv(
        path,
        &["paper_id", "year", "doc_type", "citation_count", "affiliation_ids"],
        papers.iter().map(|p| {
            vec![
                p.paper_id.clone(),
                p.year.to_string(),
                p.doc_type.as_str().to_string(),
                p.citation_count.to_string(),
                p.affiliation_ids.join(";"),
            ]
        }),
    )
}

/// Only affiliations with a country are written, so the file can be read
/// back without boundaries.
pub fn write_affiliations(path: &Path, affiliations: &[Affiliation]) -> Result<()> {
    write_csv(
        path,
        &["affiliation_id", "name", "latitude", "longitude", "iso3", "industrial"],
        affiliations.iter().filter_map(|a| {
            Some(vec![
                a.affiliation_id.clone(),
                a.name.clone(),
                sig10(a.location.latitude),
                sig10(a.location.longitude),
                a.country.clone()?,
                flag(a.industrial),
            ])
        }),
    )
}

pub fn write_conferences(path: &Path, sites: &[ConferenceSite]) -> Result<()> {
    write_csv(
        path,
        &["conference_id", "latitude", "longitude", "iso3"],
        sites.iter().map(|s| {
            vec![
                s.conference_id.clone(),
                sig10(s.location.latitude),
                sig10(s.location.longitude),
                s.country.clone(),
            ]
        }),
    )
}

pub fn write_drop_report(path: &Path, report: &IngestReport) -> Result<()> {
    let mut rows = vec![
        vec!["paper_rows".to_string(), report.paper_rows.to_string()],
        vec!["kept".to_string(), report.kept.to_string()],
    ];
    rows.extend(
        DropReason::ALL
            .iter()
            .map(|r| vec![r.as_str().to_string(), report.count(*r).to_string()]),
    );
    write_csv(path, &["reason", "count"], rows)
}

const PROFILE_COLUMNS: [&str; 18] = [
    "country",
    "latitude",
    "longitude",
    "gdp_per_capita",
    "po",
    "ua",
    "ic",
    "mf",
    "lt",
    "ir",
    "english",
    "n_papers",
    "n_international",
    "n_citations",
    "n_intl_citations",
    "n_affiliations",
    "n_conferences",
    "industry_share",
];

pub fn write_profiles(path: &Path, profiles: &[CountryProfile]) -> Result<()> {
    write_csv(
        path,
        &PROFILE_COLUMNS,
        profiles.iter().map(|p| {
            let mut row = vec![
                p.country.clone(),
                sig10(p.centroid.latitude),
                sig10(p.centroid.longitude),
                opt10(p.gdp_per_capita),
            ];
            row.extend(p.hofstede.iter().map(|h| opt10(*h)));
            row.push(p.english_official.map(flag).unwrap_or_default());
            row.extend(
                [
                    p.n_papers,
                    p.n_international,
                    p.n_citations,
                    p.n_intl_citations,
                    p.n_affiliations,
                    p.n_conferences,
                ]
                .map(|n| n.to_string()),
            );
            row.push(sig10(p.industry_share));
            row
        }),
    )
}

/// Typed cell access for the intermediates, with row numbers in errors.
struct Cells<'a> {
    path: &'a Path,
    table: &'a Table,
    fields: &'a [String],
    line: usize,
}

impl Cells<'_> {
    fn raw(&self, column: &str) -> &str {
        self.fields[self.table.column(column).expect("required column")].trim()
    }

    fn bad(&self, column: &str) -> Error {
        Error::format(
            self.path,
            format!("row {}: bad value `{}` in column {column}", self.line, self.raw(column)),
        )
    }

    fn parse<T: std::str::FromStr>(&self, column: &str) -> Result<T> {
        self.raw(column).parse().map_err(|_| self.bad(column))
    }

    fn optional(&self, column: &str) -> Result<Option<f64>> {
        match self.raw(column) {
            "" => Ok(None),
            text => text.parse().map(Some).map_err(|_| self.bad(column)),
        }
    }
}

fn rows<'a>(path: &'a Path, table: &'a Table) -> impl Iterator<Item = Result<Cells<'a>>> + 'a {
    table.rows.iter().enumerate().map(move |(i, fields)| {
        let line = i + 2;
        if fields.len() != table.headers.len() {
            return Err(Error::format(path, format!("row {line}: wrong column count")));
        }
        Ok(Cells {
            path,
            table,
            fields,
            line,
        })
    })
}

pub fn read_profiles(path: &Path) -> Result<Vec<CountryProfile>> {
    let table = read_table(path)?;
    table.require(path, &PROFILE_COLUMNS)?;
    rows(path, &table)
        .map(|cells| {
            let c = cells?;
            let mut hofstede = [None; 6];
            for dim in Dimension::ALL {
                hofstede[dim as usize] = c.optional(dim.column())?;
            }
            let english_official = match c.raw("english") {
                "" => None,
                "1" => Some(true),
                "0" => Some(false),
                _ => return Err(c.bad("english")),
            };
            let centroid = GeoPoint::new(c.parse("latitude")?, c.parse("longitude")?).map_err(|_| c.bad("latitude"))?;
            Ok(CountryProfile {
                country: c.raw("country").to_string(),
                centroid,
                gdp_per_capita: c.optional("gdp_per_capita")?,
                hofstede,
                english_official,
                n_papers: c.parse("n_papers")?,
                n_international: c.parse("n_international")?,
                n_citations: c.parse("n_citations")?,
                n_intl_citations: c.parse("n_intl_citations")?,
                n_affiliations: c.parse("n_affiliations")?,
                n_conferences: c.parse("n_conferences")?,
                industry_share: c.parse("industry_share")?,
            })
        })
        .collect()
}

fn pair_headers() -> Vec<&'static str> {
    let mut headers = vec!["a", "b"];
    headers.extend(Feature::ALL.iter().map(Feature::name));
    headers.extend(["c_ij", "dic"]);
    headers
}

pub fn write_pairs(path: &Path, pairs: &[PairFeatures]) -> Result<()> {
    write_csv(
        path,
        &pair_headers(),
        pairs.iter().map(|p| {
            let mut row = vec![p.a.clone(), p.b.clone()];
            row.extend(p.values.iter().map(|v| opt10(*v)));
            row.push(p.c_ij.to_string());
            row.push(sig10(p.dic));
            row
        }),
    )
}

pub fn read_pairs(path: &Path) -> Result<Vec<PairFeatures>> {
    let table = read_table(path)?;
    table.require(path, &pair_headers())?;
    rows(path, &table)
        .map(|cells| {
            let c = cells?;
            let mut values = [None; 15];
            for f in Feature::ALL {
                values[f as usize] = c.optional(f.name())?;
            }
            Ok(PairFeatures {
                a: c.raw("a").to_string(),
                b: c.raw("b").to_string(),
                values,
                c_ij: c.parse("c_ij")?,
                dic: c.parse("dic")?,
            })
        })
        .collect()
}

pub fn write_masking_summary(path: &Path, summary: &BTreeMap<Feature, usize>) -> Result<()> {
    write_csv(
        path,
        &["feature", "masked_pairs"],
        summary.iter().map(|(f, n)| vec![f.name().to_string(), n.to_string()]),
    )
}

pub fn write_trends(path: &Path, series: &[AnnualSeries]) -> Result<()> {
    let mut headers = vec![
        "year".to_string(),
        "n_papers".into(),
        "n_international".into(),
        "intl_paper_share".into(),
        "intl_citation_share".into(),
    ];
    headers.extend(Feature::DISTANCES.iter().map(|f| format!("mean_{}", f.name())));
    let headers: Vec<&str> = headers.iter().map(String::as_str).collect();
    write_csv(
        path,
        &headers,
        series.iter().map(|s| {
            let mut row = vec![
                s.year.to_string(),
                s.n_papers.to_string(),
                s.n_international.to_string(),
                sig10(s.intl_paper_share),
                sig10(s.intl_citation_share),
            ];
            row.extend(
                Feature::DISTANCES
                    .iter()
                    .map(|f| opt10(s.mean_distance.get(f).copied())),
            );
            row
        }),
    )
}

pub fn write_correlations(path: &Path, reports: &[CorrelationReport]) -> Result<()> {
    let star = |p: Option<f64>| p.map(stars).unwrap_or("").to_string();
    write_csv(
        path,
        &[
            "indicator",
            "n_years",
            "pearson_r",
            "pearson_p",
            "pearson_stars",
            "spearman_rho",
            "spearman_p",
            "spearman_stars",
        ],
        reports.iter().map(|r| {
            vec![
                r.indicator.name().to_string(),
                r.n_years.to_string(),
                opt10(r.pearson_r),
                opt10(r.pearson_p),
                star(r.pearson_p),
                opt10(r.spearman_rho),
                opt10(r.spearman_p),
                star(r.spearman_p),
            ]
        }),
    )
}

pub fn write_histogram(path: &Path, h: &Histogram) -> Result<()> {
    write_csv(
        path,
        &["bin_lower", "bin_upper", "mass"],
        h.mass
            .iter()
            .enumerate()
            .map(|(i, m)| vec![sig10(h.edges[i]), sig10(h.edges[i + 1]), sig10(*m)]),
    )
}

pub fn write_network(path: &Path, network: &CollabNetwork) -> Result<()> {
    write_csv(
        path,
        &["a", "b", "c_ij"],
        network
            .edges
            .iter()
            .map(|(k, w)| vec![k.0.clone(), k.1.clone(), w.to_string()]),
    )
}

pub fn write_centrality(path: &Path, scores: &[CentralityScores], papers: &BTreeMap<String, u64>) -> Result<()> {
    write_csv(
        path,
        &["country", "n_papers", "degree", "rdc", "betweenness", "closeness"],
        scores.iter().map(|s| {
            vec![
                s.country.clone(),
                papers.get(&s.country).copied().unwrap_or(0).to_string(),
                s.degree.to_string(),
                sig10(s.rdc),
                sig10(s.betweenness),
                sig10(s.closeness),
            ]
        }),
    )
}
