//! Annual collaboration shares, annual mean separations, their correlation
//! with time, and C_ij-weighted co-publication distributions.

use std::collections::BTreeMap;

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::distances::{Feature, PairFeatures};
use crate::error::{Error, Result};
use crate::ingest::Corpus;
use crate::network::PairKey;

#[derive(Debug, Clone, PartialEq)]
pub struct AnnualSeries {
    pub year: i32,
    pub n_papers: u64,
    pub n_international: u64,
    pub intl_paper_share: f64,
    pub intl_citation_share: f64,
    /// Only indicators with at least one valid pair that year.
    pub mean_distance: BTreeMap<Feature, f64>,
}

/// Per publication year: share of papers spanning two or more countries and
/// the share of that year's citations those papers hold. Years without
/// papers are absent.
pub fn annual_shares(corpus: &Corpus) -> Vec<AnnualSeries> {
    #[derive(Default)]
    struct Acc {
        papers: u64,
        intl: u64,
        cites: u64,
        intl_cites: u64,
    }
    let mut by_year: BTreeMap<i32, Acc> = BTreeMap::new();
    for paper in &corpus.papers {
        let acc = by_year.entry(paper.year).or_default();
        acc.papers += 1;
        acc.cites += paper.citation_count;
        if corpus.is_international(paper) {
            acc.intl += 1;
            acc.intl_cites += paper.citation_count;
        }
    }
    by_year
        .into_iter()
        .map(|(year, a)| AnnualSeries {
            year,
            n_papers: a.papers,
            n_international: a.intl,
            intl_paper_share: a.intl as f64 / a.papers as f64,
            intl_citation_share: if a.cites == 0 {
                0.0
            } else {
                a.intl_cites as f64 / a.cites as f64
            },
            mean_distance: BTreeMap::new(),
        })
        .collect()
}

/// Average separation of international papers per year. Each paper first
/// averages an indicator over its distinct country pairs (skipping masked
/// pairs), then papers are averaged within the year.
pub fn annual_mean_distances(corpus: &Corpus, pairs: &[PairFeatures]) -> BTreeMap<i32, BTreeMap<Feature, f64>> {
    let lookup: BTreeMap<PairKey, &PairFeatures> = pairs.iter().map(|p| (PairKey::new(&p.a, &p.b), p)).collect();
    let mut sums: BTreeMap<i32, BTreeMap<Feature, (f64, u64)>> = BTreeMap::new();
    for paper in &corpus.papers {
        let countries: Vec<&str> = corpus.countries_of(paper).into_iter().collect();
        if countries.len() < 2 {
            continue;
        }
        let year = sums.entry(paper.year).or_default();
        for feature in Feature::DISTANCES {
            let mut total = 0.0;
            let mut n = 0u64;
            for (i, a) in countries.iter().enumerate() {
                for b in &countries[i + 1..] {
                    if let Some(v) = lookup.get(&PairKey::new(a, b)).and_then(|p| p.get(feature)) {
                        total += v;
                        n += 1;
                    }
                }
            }
            if n > 0 {
                let slot = year.entry(feature).or_insert((0.0, 0));
                slot.0 += total / n as f64;
                slot.1 += 1;
            }
        }
    }
    sums.into_iter()
        .map(|(year, m)| (year, m.into_iter().map(|(f, (s, n))| (f, s / n as f64)).collect()))
        .collect()
}

/// [`annual_shares`] with the mean separations filled in.
pub fn annual_series(corpus: &Corpus, pairs: &[PairFeatures]) -> Vec<AnnualSeries> {
    let mut means = annual_mean_distances(corpus, pairs);
    let mut series = annual_shares(corpus);
    for s in &mut series {
        s.mean_distance = means.remove(&s.year).unwrap_or_default();
    }
    series
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub indicator: Feature,
    pub n_years: usize,
    /// `None` when undefined (fewer than 3 years or a constant series).
    pub pearson_r: Option<f64>,
    pub pearson_p: Option<f64>,
    pub spearman_rho: Option<f64>,
    pub spearman_p: Option<f64>,
}

/// Significance stars at 0.05 / 0.01 / 0.001.
pub fn stars(p: f64) -> &'static str {
    if p < 0.001 {
        "***"
    } else if p < 0.01 {
        "**"
    } else if p < 0.05 {
        "*"
    } else {
        ""
    }
}

/// Pearson correlation; `None` if either series is constant or shorter
/// than 2.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Two-sided p-value of a correlation via t = r·sqrt((n-2)/(1-r²)).
pub fn correlation_p_value(r: f64, n: usize) -> f64 {
    if n < 3 {
        return f64::NAN;
    }
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    let t = r * (df / (1.0 - r * r)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

/// Ranks starting at 1, ties sharing their mean rank.
pub fn mid_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

pub fn spearman_rho(x: &[f64], y: &[f64]) -> Option<f64> {
    pearson_r(&mid_ranks(x), &mid_ranks(y))
}

/// Correlation of each distance's annual mean with the year.
pub fn year_correlations(series: &[AnnualSeries]) -> Vec<CorrelationReport> {
    Feature::DISTANCES
        .into_iter()
        .map(|indicator| {
            let (years, values): (Vec<f64>, Vec<f64>) = series
                .iter()
                .filter_map(|s| s.mean_distance.get(&indicator).map(|v| (s.year as f64, *v)))
                .unzip();
            let n = years.len();
            let (pearson, spearman) = if n >= 3 {
                (pearson_r(&years, &values), spearman_rho(&years, &values))
            } else {
                (None, None)
            };
            CorrelationReport {
                indicator,
                n_years: n,
                pearson_r: pearson,
                pearson_p: pearson.map(|r| correlation_p_value(r, n)),
                spearman_rho: spearman,
                spearman_p: spearman.map(|r| correlation_p_value(r, n)),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub indicator: Feature,
    pub excluded: Option<String>,
    /// `bins + 1` ascending edges.
    pub edges: Vec<f64>,
    /// Probability mass per bin; sums to 1.
    pub mass: Vec<f64>,
}

/// C_ij-weighted distribution of pairs over equal-width bins of one
/// indicator.
///
/// Bin edges span the indicator's range over collaborating pairs of the full
/// input, so exclusion variants share the edges of the unexcluded curve.
/// With `exclude`, pairs containing that country are removed before
/// normalizing.
pub fn copub_distance_density(
    pairs: &[PairFeatures],
    indicator: Feature,
    bins: usize,
    exclude: Option<&str>,
) -> Result<Histogram> {
    if bins < 2 {
        return Err(Error::TooFewBins(bins));
    }
    let weighted: Vec<(f64, f64, &PairFeatures)> = pairs
        .iter()
        .filter(|p| p.c_ij > 0)
        .filter_map(|p| p.get(indicator).map(|v| (v, p.c_ij as f64, p)))
        .collect();
    if weighted.is_empty() {
        return Err(Error::NoCopublications);
    }
    let lo = weighted.iter().map(|w| w.0).fold(f64::INFINITY, f64::min);
    let hi = weighted.iter().map(|w| w.0).fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo {
        (hi - lo) / bins as f64
    } else {
        1.0 / bins as f64
    };
    let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();

    let mut mass = vec![0.0; bins];
    for (v, w, p) in &weighted {
        if exclude.is_some_and(|c| p.involves(c)) {
            continue;
        }
        let bin = (((v - lo) / width).floor() as usize).min(bins - 1);
        mass[bin] += w;
    }
    let total: f64 = mass.iter().sum();
    if total == 0.0 {
        return Err(Error::NoCopublications);
    }
    mass.iter_mut().for_each(|m| *m /= total);
    Ok(Histogram {
        indicator,
        excluded: exclude.map(str::to_string),
        edges,
        mass,
    })
}
