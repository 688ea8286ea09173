use nalgebra::DVector;

use super::{squared_correlation, t_p_value, vif, Coefficient, DesignMatrix, FitResult, ModelKind, INTERCEPT};
use crate::error::{Error, Result};
use crate::numopt::{invert_spd, solve_spd};

/// Ordinary least squares through the normal equations.
///
/// Log-likelihood is the Gaussian one at the MLE variance RSS/n; the AIC
/// parameter count is columns + intercept + variance.
pub fn fit_ols(design: &DesignMatrix) -> Result<FitResult> {
    let n = design.n_rows();
    let p = design.n_columns();
    if n <= p + 1 {
        return Err(Error::Invalid(format!("OLS needs more than {} rows, got {n}", p + 1)));
    }
    let x = design.with_intercept();
    let xtx = x.transpose() * &x;
    let xty = x.transpose() * &design.y;
    let beta = solve_spd(&xtx, &xty).map_err(|e| match e {
        Error::SingularSystem => collinear(design),
        other => other,
    })?;
    let fitted = &x * &beta;
    let resid: DVector<f64> = &design.y - &fitted;
    let rss = resid.norm_squared();
    let df = (n - p - 1) as f64;
    let sigma2 = rss / df;
    let cov = invert_spd(&xtx)? * sigma2;

    let names = std::iter::once(INTERCEPT).chain(design.columns.iter().map(String::as_str));
    let coefficients = names
        .enumerate()
        .map(|(k, name)| {
            let se = cov[(k, k)].max(0.0).sqrt();
            Coefficient::new(name, beta[k], Some(se), t_p_value(beta[k] / se, df))
        })
        .collect();

    let nf = n as f64;
    let log_likelihood = -0.5 * nf * ((2.0 * std::f64::consts::PI).ln() + (rss / nf).ln() + 1.0);
    let n_params = p + 2;
    Ok(FitResult {
        model: ModelKind::Ols,
        coefficients,
        zero_coefficients: None,
        phi: None,
        log_phi_se: None,
        log_likelihood,
        aic: -2.0 * log_likelihood + 2.0 * n_params as f64,
        pseudo_r2: squared_correlation(fitted.as_slice(), design.y.as_slice()),
        n_rows: n,
        n_params,
        converged: true,
        iterations: 0,
        warnings: Vec::new(),
    })
}

fn collinear(design: &DesignMatrix) -> Error {
    let vifs = if design.n_columns() >= 2 {
        vif(design)
    } else {
        vec![f64::INFINITY; design.n_columns()]
    };
    let worst = vifs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| design.columns[i].clone())
        .unwrap_or_else(|| INTERCEPT.to_string());
    Error::CollinearDesign { column: worst }
}
