//! Synthetic data with planted zero-inflated beta parameters, for checking
//! that the estimators recover what generated the data.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use serde::Serialize;

use crate::distances::{build_pair_table, Feature, LogBase, PairFeatures};
use crate::error::{Error, Result};
use crate::inference::{build_design, DesignMatrix};
use crate::ingest::GeoPoint;
use crate::profiles::CountryProfile;

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Draws one response per row of `x` (no intercept column) from a ZIBeta
/// model with coefficient vectors `zero` and `mean` (intercept first) and
/// precision `phi`. Beta draws are kept strictly inside (0, 1).
pub fn simulate_zibeta<R: Rng>(
    x: &DMatrix<f64>,
    zero: &[f64],
    mean: &[f64],
    phi: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let k = x.ncols() + 1;
    if zero.len() != k || mean.len() != k {
        return Err(Error::Invalid(format!("expected {k} coefficients per component")));
    }
    if !(phi > 0.0) {
        return Err(Error::Invalid("phi must be positive".into()));
    }
    let linear = |coef: &[f64], i: usize| coef[0] + (1..k).map(|j| coef[j] * x[(i, j - 1)]).sum::<f64>();
    (0..x.nrows())
        .map(|i| {
            let pi = sigmoid(linear(zero, i));
            let mu = sigmoid(linear(mean, i));
            let u: f64 = rng.random();
            if u < pi {
                return Ok(0.0);
            }
            let beta = Beta::new(mu * phi, (1.0 - mu) * phi).map_err(|e| Error::Invalid(e.to_string()))?;
            Ok(beta.sample(rng).clamp(f64::EPSILON, 1.0 - f64::EPSILON))
        })
        .collect()
}

/// Intercept followed by one coefficient per feature in [`Feature::ALL`]
/// order: the sign pattern of the headline ZIBeta block (negative
/// geographic, economic and academic distances; positive industrial
/// distance, ENG, CoUS and CoCN). ENG and dAC are planted somewhat larger
/// than the headline estimates so that a single 5000-row draw detects them.
pub fn headline_mean_coefficients() -> Vec<f64> {
    vec![
        -1.5, // intercept
        -0.399, -1.618, -0.150, 0.272, 0.083, 0.076, -0.350, -0.097, 0.3, -0.975, -0.720, -0.4, 1.357, 0.513, 0.617,
    ]
}

/// Zero-component coefficients for the default generator: distant pairs
/// are more often non-collaborating, pairs with the USA or China less often.
pub fn default_zero_coefficients() -> Vec<f64> {
    let mut zero = vec![0.0; Feature::ALL.len() + 1];
    zero[0] = -0.8;
    zero[1 + Feature::Geo as usize] = 0.8;
    zero[1 + Feature::Eco as usize] = 0.6;
    zero[1 + Feature::Ap as usize] = 0.5;
    zero[1 + Feature::CoUs as usize] = -0.7;
    zero[1 + Feature::CoCn as usize] = -0.5;
    zero
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_countries: usize,
    /// Keep only the first `n_rows` pairs (in table order), if set.
    pub n_rows: Option<usize>,
    /// Zero-probability logit coefficients, intercept first.
    pub zero: Vec<f64>,
    /// Beta-mean logit coefficients, intercept first.
    pub mean: Vec<f64>,
    pub phi: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 20_190_101,
            n_countries: 101,
            n_rows: Some(5000),
            zero: default_zero_coefficients(),
            mean: headline_mean_coefficients(),
            phi: 30.0,
        }
    }
}

impl SynthConfig {
    /// Sets the zero component to a constant probability `share`.
    pub fn with_zero_share(mut self, share: f64) -> Self {
        self.zero = vec![0.0; self.mean.len()];
        self.zero[0] = (share / (1.0 - share)).ln();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthData {
    pub profiles: Vec<CountryProfile>,
    /// Pair table whose `dic` holds the simulated responses.
    pub pairs: Vec<PairFeatures>,
    /// Rescaled design the responses were drawn from.
    pub design: DesignMatrix,
}

impl SynthData {
    pub fn zero_share(&self) -> f64 {
        self.pairs.iter().filter(|p| p.dic == 0.0).count() as f64 / self.pairs.len() as f64
    }
}

fn synth_code(i: usize) -> String {
    match i {
        0 => "CHN".into(),
        1 => "USA".into(),
        _ => format!("S{i:02}"),
    }
}

/// Random country profiles.
pub fn synth_profiles<R: Rng>(n: usize, rng: &mut R) -> Vec<CountryProfile> {
    let mut profiles: Vec<CountryProfile> = (0..n)
        .map(|i| {
            let n_affiliations = rng.random_range(1..=200u64);
            let n_papers = n_affiliations * rng.random_range(1..=30u64);
            let n_citations = (n_papers as f64 * rng.random_range(0.5..20.0)).round() as u64;
            let mut hofstede = [None; 6];
            for h in &mut hofstede {
                *h = Some(rng.random_range(5..=110u32) as f64);
            }
            CountryProfile {
                country: synth_code(i),
                centroid: GeoPoint {
                    latitude: rng.random_range(-55.0..70.0),
                    longitude: rng.random_range(-180.0..180.0),
                },
                gdp_per_capita: Some(10f64.powf(rng.random_range(2.5..5.0))),
                hofstede,
                english_official: Some(rng.random_bool(0.3)),
                n_papers,
                n_international: n_papers / 5,
                n_citations,
                n_intl_citations: n_citations / 4,
                n_affiliations,
                n_conferences: rng.random_range(0..=50u64),
                industry_share: rng.random_range(0.0..0.4),
            }
        })
        .collect();
    profiles.sort_by(|a, b| a.country.cmp(&b.country));
    profiles
}

/// Countries → pair features → rescaled design → simulated DIC.
///
/// `c_ij` of each pair is set to the rounded joint count that reproduces
/// the simulated DIC given the two countries' paper totals.
pub fn synthesize(config: &SynthConfig) -> Result<SynthData> {
    if config.mean.len() != Feature::ALL.len() + 1 || config.zero.len() != config.mean.len() {
        return Err(Error::Invalid(format!(
            "synthetic model needs {} coefficients per component",
            Feature::ALL.len() + 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let profiles = synth_profiles(config.n_countries, &mut rng);
    let mut pairs = build_pair_table(&profiles, &Default::default(), LogBase::Ten)?;
    if let Some(n) = config.n_rows {
        pairs.truncate(n);
    }
    let build = build_design(&pairs, &Feature::ALL)?;
    if !build.dropped_columns.is_empty() {
        return Err(Error::Invalid(format!(
            "degenerate synthetic columns {:?}",
            build.dropped_columns
        )));
    }
    let y = simulate_zibeta(&build.design.x, &config.zero, &config.mean, config.phi, &mut rng)?;
    let papers = |code: &str| profiles.iter().find(|p| p.country == code).map_or(0, |p| p.n_papers);
    for (pair, &dic) in pairs.iter_mut().zip(&y) {
        pair.dic = dic;
        let total = (papers(&pair.a) + papers(&pair.b)) as f64;
        pair.c_ij = (dic * total / (1.0 + dic)).round() as u64;
    }
    let mut design = build.design;
    design.y = nalgebra::DVector::from_vec(y);
    Ok(SynthData {
        profiles,
        pairs,
        design,
    })
}
