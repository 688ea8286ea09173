//! Per-country aggregates: the inputs of every pair indicator.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{read_table, resolve_country, Corpus, CountryBoundary, GeoPoint};

/// Hofstede's six national-culture dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dimension {
    PowerDistance,
    UncertaintyAvoidance,
    Individualism,
    Masculinity,
    LongTermOrientation,
    Indulgence,
}

impl Dimension {
    pub const ALL: [Dimension; 6] = [
        Dimension::PowerDistance,
        Dimension::UncertaintyAvoidance,
        Dimension::Individualism,
        Dimension::Masculinity,
        Dimension::LongTermOrientation,
        Dimension::Indulgence,
    ];

    /// Column name in the metadata file.
    pub fn column(&self) -> &'static str {
        match self {
            Dimension::PowerDistance => "po",
            Dimension::UncertaintyAvoidance => "ua",
            Dimension::Individualism => "ic",
            Dimension::Masculinity => "mf",
            Dimension::LongTermOrientation => "lt",
            Dimension::Indulgence => "ir",
        }
    }
}

pub type Hofstede = [Option<f64>; 6];

/// Static per-country attributes supplied from outside the corpus.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CountryMeta {
    pub gdp_per_capita: Option<f64>,
    pub hofstede: Hofstede,
    pub english_official: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountryProfile {
    pub country: String,
    pub centroid: GeoPoint,
    pub gdp_per_capita: Option<f64>,
    pub hofstede: Hofstede,
    pub english_official: Option<bool>,
    pub n_papers: u64,
    pub n_international: u64,
    pub n_citations: u64,
    pub n_intl_citations: u64,
    pub n_affiliations: u64,
    pub n_conferences: u64,
    pub industry_share: f64,
}

impl CountryProfile {
    pub fn hofstede(&self, dim: Dimension) -> Option<f64> {
        self.hofstede[dim as usize]
    }
}

fn parse_cell<T: std::str::FromStr>(path: &Path, line: usize, column: &str, text: &str) -> Result<Option<T>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(None);
    }
    text.parse()
        .map(Some)
        .map_err(|_| Error::format(path, format!("row {line}: bad value `{text}` in column {column}")))
}

/// Reads `country_metadata.csv` (iso3, gdp_per_capita, po, ua, ic, mf, lt,
/// ir, english). Empty cells are missing values.
pub fn load_metadata(path: &Path) -> Result<BTreeMap<String, CountryMeta>> {
    let table = read_table(path)?;
    let mut columns = vec!["iso3", "gdp_per_capita", "english"];
    columns.extend(Dimension::ALL.iter().map(Dimension::column));
    table.require(path, &columns)?;
    let mut out = BTreeMap::new();
    for (i, fields) in table.rows.iter().enumerate() {
        let line = i + 2;
        if fields.len() != table.headers.len() {
            return Err(Error::format(path, format!("row {line}: wrong column count")));
        }
        let get = |name: &str| fields[table.column(name).unwrap()].as_str();
        let iso = get("iso3").trim().to_ascii_uppercase();
        if iso.is_empty() {
            return Err(Error::format(path, format!("row {line}: empty iso3")));
        }
        let mut hofstede = [None; 6];
        for dim in Dimension::ALL {
            hofstede[dim as usize] = parse_cell(path, line, dim.column(), get(dim.column()))?;
        }
        let english = match get("english").trim() {
            "" => None,
            "1" => Some(true),
            "0" => Some(false),
            other => {
                return Err(Error::format(
                    path,
                    format!("row {line}: english must be 0/1, got `{other}`"),
                ))
            }
        };
        out.insert(
            iso,
            CountryMeta {
                gdp_per_capita: parse_cell(path, line, "gdp_per_capita", get("gdp_per_capita"))?,
                hofstede,
                english_official: english,
            },
        );
    }
    Ok(out)
}

/// A conference row placed in a country.
#[derive(Debug, Clone, PartialEq)]
pub struct ConferenceSite {
    pub conference_id: String,
    pub location: GeoPoint,
    pub country: String,
}

/// Conference tally produced by [`conferences_per_country`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConferenceCounts {
    pub counts: BTreeMap<String, u64>,
    /// Attributed rows in input order.
    pub sites: Vec<ConferenceSite>,
    pub unresolved: usize,
    pub malformed: usize,
}

impl ConferenceCounts {
    pub fn get(&self, country: &str) -> u64 {
        self.counts.get(country).copied().unwrap_or(0)
    }

    pub fn attributed(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Attributes each conference row to one country. A non-empty optional
/// `iso3` column bypasses geocoding, as for affiliations.
pub fn conferences_per_country(path: &Path, boundaries: &[CountryBoundary]) -> Result<ConferenceCounts> {
    let table = read_table(path)?;
    table.require(path, &["conference_id", "latitude", "longitude"])?;
    let iso_col = table.column("iso3");
    let id_col = table.column("conference_id").unwrap();
    let (lat_col, lon_col) = (table.column("latitude").unwrap(), table.column("longitude").unwrap());
    let mut out = ConferenceCounts::default();
    for fields in &table.rows {
        if fields.len() != table.headers.len() {
            out.malformed += 1;
            continue;
        }
        let point = match (fields[lat_col].trim().parse(), fields[lon_col].trim().parse()) {
            (Ok(lat), Ok(lon)) => GeoPoint::new(lat, lon).ok(),
            _ => None,
        };
        let Some(point) = point else {
            out.malformed += 1;
            continue;
        };
        let preset = iso_col
            .map(|i| fields[i].trim())
            .filter(|c| !c.is_empty())
            .map(str::to_ascii_uppercase);
        let Some(code) = preset.or_else(|| resolve_country(point, boundaries)) else {
            out.unresolved += 1;
            continue;
        };
        *out.counts.entry(code.clone()).or_default() += 1;
        out.sites.push(ConferenceSite {
            conference_id: fields[id_col].trim().to_string(),
            location: point,
            country: code,
        });
    }
    Ok(out)
}

/// Publication-weighted mean position of a country's affiliations.
///
/// Longitudes are first unwrapped onto the shortest arc around the weighted
/// circular mean so that points straddling the antimeridian average sensibly.
pub fn country_centroid(affiliations: &[(GeoPoint, u64)]) -> Result<GeoPoint> {
    if affiliations.is_empty() {
        return Err(Error::NoAffiliations);
    }
    let total: f64 = affiliations.iter().map(|(_, w)| *w as f64).sum();
    if total <= 0.0 {
        return Err(Error::Invalid("centroid weights must be positive".into()));
    }
    let (mut s, mut c) = (0.0, 0.0);
    for (p, w) in affiliations {
        let rad = p.longitude.to_radians();
        s += *w as f64 * rad.sin();
        c += *w as f64 * rad.cos();
    }
    let reference = s.atan2(c).to_degrees();
    let mut lat = 0.0;
    let mut lon = 0.0;
    for (p, w) in affiliations {
        let mut delta = p.longitude - reference;
        if delta > 180.0 {
            delta -= 360.0;
        } else if delta < -180.0 {
            delta += 360.0;
        }
        lat += *w as f64 * p.latitude;
        lon += *w as f64 * (reference + delta);
    }
    lat /= total;
    lon /= total;
    if lon > 180.0 {
        lon -= 360.0;
    } else if lon < -180.0 {
        lon += 360.0;
    }
    Ok(GeoPoint {
        latitude: lat,
        longitude: lon,
    })
}

#[derive(Default)]
struct Tally {
    papers: u64,
    international: u64,
    citations: u64,
    intl_citations: u64,
    industry_papers: u64,
    affiliation_papers: BTreeMap<String, u64>,
}

/// One profile per country present in the corpus, sorted by ISO code.
///
/// Counts are per distinct paper: several affiliations of the same country on
/// one paper count once. Countries missing from `metadata` still get a
/// profile; a warning naming them is returned alongside.
pub fn build_profiles(
    corpus: &Corpus,
    metadata: &BTreeMap<String, CountryMeta>,
    conferences: &ConferenceCounts,
) -> Result<(Vec<CountryProfile>, Vec<String>)> {
    let mut tallies: BTreeMap<String, Tally> = BTreeMap::new();
    for paper in &corpus.papers {
        let countries = corpus.countries_of(paper);
        let international = countries.len() >= 2;
        let mut industrial: BTreeSet<&str> = BTreeSet::new();
        let mut seen_affiliations: BTreeSet<&str> = BTreeSet::new();
        for id in &paper.affiliation_ids {
            let Some(aff) = corpus.affiliation(id) else { continue };
            let Some(country) = aff.country.as_deref() else {
                continue;
            };
            if aff.industrial {
                industrial.insert(country);
            }
            if seen_affiliations.insert(&aff.affiliation_id) {
                *tallies
                    .entry(country.to_string())
                    .or_default()
                    .affiliation_papers
                    .entry(aff.affiliation_id.clone())
                    .or_default() += 1;
            }
        }
        for country in countries {
            let t = tallies.entry(country.to_string()).or_default();
            t.papers += 1;
            t.citations += paper.citation_count;
            if international {
                t.international += 1;
                t.intl_citations += paper.citation_count;
            }
            if industrial.contains(country) {
                t.industry_papers += 1;
            }
        }
    }

    let mut warnings = Vec::new();
    let mut profiles = Vec::with_capacity(tallies.len());
    for (country, t) in tallies {
        let points: Vec<(GeoPoint, u64)> = t
            .affiliation_papers
            .iter()
            .map(|(id, n)| (corpus.affiliation(id).expect("tallied affiliation").location, *n))
            .collect();
        let centroid = country_centroid(&points)?;
        let meta = match metadata.get(&country) {
            Some(m) => m.clone(),
            None => {
                warnings.push(format!("country {country} has no metadata row"));
                CountryMeta::default()
            }
        };
        profiles.push(CountryProfile {
            centroid,
            gdp_per_capita: meta.gdp_per_capita,
            hofstede: meta.hofstede,
            english_official: meta.english_official,
            n_papers: t.papers,
            n_international: t.international,
            n_citations: t.citations,
            n_intl_citations: t.intl_citations,
            n_affiliations: t.affiliation_papers.len() as u64,
            n_conferences: conferences.get(&country),
            industry_share: if t.papers == 0 {
                0.0
            } else {
                t.industry_papers as f64 / t.papers as f64
            },
            country,
        });
    }
    Ok((profiles, warnings))
}
