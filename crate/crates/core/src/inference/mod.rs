//! OLS and zero-inflated beta regression of DIC on the pair indicators,
//! with VIF diagnostics and the sub-period panel.

mod design;
mod ols;
mod panel;
mod vif;
mod zibeta;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

use crate::distances::{Feature, PairFeatures};
use crate::error::Result;
use crate::trends::stars;

pub use design::{build_design, minmax_rescale, DesignBuild, DesignMatrix};
pub use ols::fit_ols;
pub use panel::{fit_panel, PanelContext, PanelEntry, Period, PeriodPartition};
pub use vif::vif;
pub use zibeta::{fit_zibeta, logistic_fit, zibeta_loglik, ZibetaObjective, ZibetaParams};

pub const INTERCEPT: &str = "(Intercept)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    #[serde(rename = "OLS")]
    Ols,
    #[serde(rename = "ZIBeta")]
    ZiBeta,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub se: Option<f64>,
    pub p: Option<f64>,
    pub stars: String,
}

impl Coefficient {
    fn new(name: &str, estimate: f64, se: Option<f64>, p: Option<f64>) -> Self {
        Coefficient {
            name: name.to_string(),
            estimate,
            se,
            p,
            stars: p.map(stars).unwrap_or("").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub model: ModelKind,
    /// OLS coefficients, or the beta-mean block for ZIBeta. Intercept first.
    pub coefficients: Vec<Coefficient>,
    /// ZIBeta only: logit coefficients of the zero probability.
    pub zero_coefficients: Option<Vec<Coefficient>>,
    /// ZIBeta only: precision φ and the standard error of log φ.
    pub phi: Option<f64>,
    pub log_phi_se: Option<f64>,
    pub log_likelihood: f64,
    pub aic: f64,
    pub pseudo_r2: f64,
    pub n_rows: usize,
    pub n_params: usize,
    pub converged: bool,
    pub iterations: usize,
    pub warnings: Vec<String>,
}

impl FitResult {
    pub fn coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name)
    }
}

/// Two-sided p-value of a t statistic. Infinite |t| gives 0; NaN gives None.
pub(crate) fn t_p_value(t: f64, df: f64) -> Option<f64> {
    if t.is_nan() {
        return None;
    }
    if t.is_infinite() {
        return Some(0.0);
    }
    let dist = StudentsT::new(0.0, 1.0, df).ok()?;
    Some((2.0 * dist.sf(t.abs())).min(1.0))
}

/// Two-sided Wald p-value of a z statistic.
pub(crate) fn z_p_value(z: f64) -> Option<f64> {
    if z.is_nan() {
        return None;
    }
    let normal = Normal::standard();
    Some((2.0 * normal.sf(z.abs())).min(1.0))
}

/// Squared Pearson correlation; 0 when either side is constant.
pub(crate) fn squared_correlation(a: &[f64], b: &[f64]) -> f64 {
    crate::trends::pearson_r(a, b).map_or(0.0, |r| r * r)
}

/// A fit, or the reason it was not attempted or failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ModelOutcome {
    Fitted(Box<FitResult>),
    Skipped { skipped: String },
}

impl ModelOutcome {
    pub fn skipped(reason: impl Into<String>) -> Self {
        ModelOutcome::Skipped { skipped: reason.into() }
    }

    pub fn fit(&self) -> Option<&FitResult> {
        match self {
            ModelOutcome::Fitted(f) => Some(f),
            ModelOutcome::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VifEntry {
    pub column: String,
    pub vif: f64,
}

/// Both models and the VIF table over one pair table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionOutcome {
    pub n_pairs: usize,
    pub excluded_rows: usize,
    pub dropped_columns: Vec<String>,
    pub ols: ModelOutcome,
    pub zibeta: ModelOutcome,
    pub vif: Vec<VifEntry>,
    pub warnings: Vec<String>,
}

/// Builds the design and fits OLS (response multiplied by `ols_scale`) and
/// ZIBeta. Failures are recorded per model instead of aborting.
pub fn regress_pairs(pairs: &[PairFeatures], features: &[Feature], ols_scale: f64) -> Result<RegressionOutcome> {
    let build = build_design(pairs, features)?;
    let mut warnings = Vec::new();
    if build.excluded_rows > 0 {
        warnings.push(format!("{} pairs excluded for masked indicators", build.excluded_rows));
    }
    for column in &build.dropped_columns {
        warnings.push(format!("degenerate column {column} dropped"));
    }
    let design = build.design;

    let vif_table = if design.n_columns() >= 2 && design.n_rows() > design.n_columns() {
        vif(&design)
            .into_iter()
            .zip(&design.columns)
            .map(|(v, c)| VifEntry {
                column: c.clone(),
                vif: v,
            })
            .collect()
    } else {
        Vec::new()
    };

    let ols = match fit_ols(&design.scale_response(ols_scale)) {
        Ok(fit) => ModelOutcome::Fitted(Box::new(fit)),
        Err(e) => ModelOutcome::skipped(e.to_string()),
    };

    let keep: Vec<usize> = (0..design.n_rows()).filter(|&i| design.y[i] < 1.0).collect();
    if keep.len() < design.n_rows() {
        warnings.push(format!(
            "{} pairs with DIC = 1 excluded from ZIBeta",
            design.n_rows() - keep.len()
        ));
    }
    let zi_design = design.select_rows(&keep);
    let zeros = zi_design.y.iter().filter(|v| **v == 0.0).count();
    let zibeta = if zeros == 0 {
        ModelOutcome::skipped("no zero responses")
    } else if zeros == zi_design.n_rows() {
        ModelOutcome::skipped("no international collaboration (all responses zero)")
    } else {
        match fit_zibeta(&zi_design) {
            Ok(fit) => ModelOutcome::Fitted(Box::new(fit)),
            Err(e) => ModelOutcome::skipped(e.to_string()),
        }
    };

    Ok(RegressionOutcome {
        n_pairs: design.n_rows(),
        excluded_rows: build.excluded_rows,
        dropped_columns: build.dropped_columns,
        ols,
        zibeta,
        vif: vif_table,
        warnings,
    })
}
