//! Country-pair distance indicators and dummy variables.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::GeoPoint;
use crate::network::{dic, PairKey};
use crate::profiles::{CountryProfile, Dimension};

/// Earth radius used by the great-circle formula, in km.
pub const EARTH_RADIUS_KM: f64 = 6377.0;

/// Great-circle distance via the spherical law of cosines. The inner
/// product is clamped to [-1, 1] so rounding never leaves the arccos domain.
pub fn geo_distance(a: GeoPoint, b: GeoPoint) -> f64 {
    let (lat_a, lat_b) = (a.latitude.to_radians(), b.latitude.to_radians());
    let dlon = a.longitude.to_radians() - b.longitude.to_radians();
    let inner = lat_a.sin() * lat_b.sin() + lat_a.cos() * lat_b.cos() * dlon.cos();
    EARTH_RADIUS_KM * inner.clamp(-1.0, 1.0).acos()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    #[serde(rename = "10")]
    Ten,
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    pub fn log(&self, x: f64) -> f64 {
        match self {
            LogBase::Ten => x.log10(),
            LogBase::E => x.ln(),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "10" => Ok(LogBase::Ten),
            "e" | "E" | "ln" => Ok(LogBase::E),
            other => Err(Error::Invalid(format!("log base must be 10 or e, got `{other}`"))),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Ten => "10",
            LogBase::E => "e",
        })
    }
}

/// |log(a) - log(b)| of two GDP per capita values.
pub fn eco_distance(gdp_a: f64, gdp_b: f64, base: LogBase) -> Result<f64> {
    for g in [gdp_a, gdp_b] {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidGdp(g));
        }
    }
    Ok((base.log(gdp_a) - base.log(gdp_b)).abs())
}

/// Absolute index difference for one cultural dimension; `None` (masked)
/// when either index is missing.
pub fn cultural_distance(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some((a? - b?).abs())
}

fn rate(numerator: u64, denominator: u64) -> Option<f64> {
    (denominator > 0).then(|| numerator as f64 / denominator as f64)
}

fn abs_diff(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some((a? - b?).abs())
}

/// Academic production, influence and communication distances:
/// papers per affiliation, citations per paper, conferences per affiliation.
pub fn academic_distances(a: &CountryProfile, b: &CountryProfile) -> (Option<f64>, Option<f64>, Option<f64>) {
    (
        abs_diff(rate(a.n_papers, a.n_affiliations), rate(b.n_papers, b.n_affiliations)),
        abs_diff(rate(a.n_citations, a.n_papers), rate(b.n_citations, b.n_papers)),
        abs_diff(
            rate(a.n_conferences, a.n_affiliations),
            rate(b.n_conferences, b.n_affiliations),
        ),
    )
}

pub fn industrial_distance(share_a: f64, share_b: f64) -> f64 {
    (share_a - share_b).abs()
}

/// (ENG, CoUS, CoCN). ENG is `None` when either language flag is unknown.
pub fn dummies(
    country_a: &str,
    country_b: &str,
    english_a: Option<bool>,
    english_b: Option<bool>,
) -> (Option<u8>, u8, u8) {
    let eng = match (english_a, english_b) {
        (Some(a), Some(b)) => Some(a as u8 + b as u8),
        _ => None,
    };
    let member = |code: &str| (country_a == code || country_b == code) as u8;
    (eng, member("USA"), member("CHN"))
}

/// Explanatory variables of the pair table, in regression column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Feature {
    Geo,
    Eco,
    Po,
    Ua,
    Ic,
    Mf,
    Lt,
    Ir,
    Eng,
    Ap,
    Ai,
    Ac,
    Ind,
    CoUs,
    CoCn,
}

impl Feature {
    pub const ALL: [Feature; 15] = [
        Feature::Geo,
        Feature::Eco,
        Feature::Po,
        Feature::Ua,
        Feature::Ic,
        Feature::Mf,
        Feature::Lt,
        Feature::Ir,
        Feature::Eng,
        Feature::Ap,
        Feature::Ai,
        Feature::Ac,
        Feature::Ind,
        Feature::CoUs,
        Feature::CoCn,
    ];

    /// The twelve continuous distances (everything except the dummies).
    pub const DISTANCES: [Feature; 12] = [
        Feature::Geo,
        Feature::Eco,
        Feature::Po,
        Feature::Ua,
        Feature::Ic,
        Feature::Mf,
        Feature::Lt,
        Feature::Ir,
        Feature::Ap,
        Feature::Ai,
        Feature::Ac,
        Feature::Ind,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Feature::Geo => "dGEO",
            Feature::Eco => "dECO",
            Feature::Po => "dPO",
            Feature::Ua => "dUA",
            Feature::Ic => "dIC",
            Feature::Mf => "dMF",
            Feature::Lt => "dLT",
            Feature::Ir => "dIR",
            Feature::Eng => "ENG",
            Feature::Ap => "dAP",
            Feature::Ai => "dAI",
            Feature::Ac => "dAC",
            Feature::Ind => "dIND",
            Feature::CoUs => "CoUS",
            Feature::CoCn => "CoCN",
        }
    }

    pub fn cultural(dim: Dimension) -> Feature {
        match dim {
            Dimension::PowerDistance => Feature::Po,
            Dimension::UncertaintyAvoidance => Feature::Ua,
            Dimension::Individualism => Feature::Ic,
            Dimension::Masculinity => Feature::Mf,
            Dimension::LongTermOrientation => Feature::Lt,
            Dimension::Indulgence => Feature::Ir,
        }
    }

    fn index(&self) -> usize {
        *self as usize
    }
}

impl FromStr for Feature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Feature::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown feature `{s}`")))
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One regression row: an unordered country pair with `a < b`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFeatures {
    pub a: String,
    pub b: String,
    pub values: [Option<f64>; 15],
    pub c_ij: u64,
    pub dic: f64,
}

impl PairFeatures {
    pub fn get(&self, feature: Feature) -> Option<f64> {
        self.values[feature.index()]
    }

    pub fn set(&mut self, feature: Feature, value: Option<f64>) {
        self.values[feature.index()] = value;
    }

    pub fn missing_mask(&self) -> Vec<Feature> {
        Feature::ALL.into_iter().filter(|f| self.get(*f).is_none()).collect()
    }

    pub fn involves(&self, country: &str) -> bool {
        self.a == country || self.b == country
    }
}

/// Computes every indicator for one pair of profiles.
pub fn pair_features(a: &CountryProfile, b: &CountryProfile, c_ij: u64, base: LogBase) -> Result<PairFeatures> {
    let (a, b) = if a.country <= b.country { (a, b) } else { (b, a) };
    let mut row = PairFeatures {
        a: a.country.clone(),
        b: b.country.clone(),
        values: [None; 15],
        c_ij,
        dic: dic(a.n_papers, b.n_papers, c_ij)?,
    };
    row.set(Feature::Geo, Some(geo_distance(a.centroid, b.centroid)));
    let eco = match (a.gdp_per_capita, b.gdp_per_capita) {
        (Some(ga), Some(gb)) => eco_distance(ga, gb, base).ok(),
        _ => None,
    };
    row.set(Feature::Eco, eco);
    for dim in Dimension::ALL {
        row.set(
            Feature::cultural(dim),
            cultural_distance(a.hofstede(dim), b.hofstede(dim)),
        );
    }
    let (ap, ai, ac) = academic_distances(a, b);
    row.set(Feature::Ap, ap);
    row.set(Feature::Ai, ai);
    row.set(Feature::Ac, ac);
    row.set(
        Feature::Ind,
        Some(industrial_distance(a.industry_share, b.industry_share)),
    );
    let (eng, us, cn) = dummies(&a.country, &b.country, a.english_official, b.english_official);
    row.set(Feature::Eng, eng.map(f64::from));
    row.set(Feature::CoUs, Some(us.into()));
    row.set(Feature::CoCn, Some(cn.into()));
    Ok(row)
}

/// One row per unordered pair of countries with at least one paper, ordered
/// lexicographically by (a, b). Pairs absent from `joint` have C_ij = 0.
pub fn build_pair_table(
    profiles: &[CountryProfile],
    joint: &BTreeMap<PairKey, u64>,
    base: LogBase,
) -> Result<Vec<PairFeatures>> {
    let mut active: Vec<&CountryProfile> = profiles.iter().filter(|p| p.n_papers >= 1).collect();
    active.sort_by(|x, y| x.country.cmp(&y.country));
    let mut rows = Vec::with_capacity(active.len() * active.len().saturating_sub(1) / 2);
    for (i, a) in active.iter().enumerate() {
        for b in &active[i + 1..] {
            let key = PairKey::new(&a.country, &b.country);
            let c_ij = joint.get(&key).copied().unwrap_or(0);
            rows.push(pair_features(a, b, c_ij, base)?);
        }
    }
    Ok(rows)
}

/// Per-feature count of rows where the feature is masked.
pub fn masking_summary(rows: &[PairFeatures]) -> BTreeMap<Feature, usize> {
    let mut out: BTreeMap<Feature, usize> = Feature::ALL.into_iter().map(|f| (f, 0)).collect();
    for row in rows {
        for f in row.missing_mask() {
            *out.get_mut(&f).unwrap() += 1;
        }
    }
    out
}
