//! Zero-inflated beta regression.
//!
//! y = 0 with probability π, otherwise y ~ Beta(μφ, (1-μ)φ), where
//! logit π = xγ and logit μ = xβ share the same design (with intercept) and
//! the precision φ is constant. The parameter vector is laid out as
//! `[γ..., β..., log φ]`.

use nalgebra::{DMatrix, DVector};
use statrs::function::gamma::{digamma, ln_gamma};

use super::{squared_correlation, z_p_value, Coefficient, DesignMatrix, FitResult, ModelKind, INTERCEPT};
use crate::error::{Error, Result};
use crate::numopt::{default_step, fd_gradient, invert_spd, maximize, solve_spd, Objective, Tolerances};

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// ln(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// Split view of a ZIBeta parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ZibetaParams {
    pub zero: Vec<f64>,
    pub mean: Vec<f64>,
    pub log_phi: f64,
}

impl ZibetaParams {
    pub fn from_vector(v: &[f64]) -> Self {
        let k = (v.len() - 1) / 2;
        ZibetaParams {
            zero: v[..k].to_vec(),
            mean: v[k..2 * k].to_vec(),
            log_phi: v[2 * k],
        }
    }

    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = self.zero.clone();
        v.extend_from_slice(&self.mean);
        v.push(self.log_phi);
        v
    }
}

/// Log-likelihood and analytic gradient over a validated design.
pub struct ZibetaObjective {
    /// Row-major design with intercept, `k` columns per row.
    rows: Vec<f64>,
    k: usize,
    y: Vec<f64>,
    ln_y: Vec<f64>,
    ln_1my: Vec<f64>,
}

impl ZibetaObjective {
    pub fn new(design: &DesignMatrix) -> Result<Self> {
        for (row, &value) in design.y.iter().enumerate() {
            if value == 1.0 {
                return Err(Error::OneInflationUnsupported(row));
            }
            if !(0.0..1.0).contains(&value) {
                return Err(Error::ResponseOutOfRange { row, value });
            }
        }
        let x = design.with_intercept();
        let k = x.ncols();
        let rows = (0..x.nrows())
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| x[(i, j)])
            .collect();
        let y: Vec<f64> = design.y.iter().copied().collect();
        Ok(ZibetaObjective {
            rows,
            k,
            ln_y: y.iter().map(|v| if *v > 0.0 { v.ln() } else { 0.0 }).collect(),
            ln_1my: y.iter().map(|v| (-v).ln_1p()).collect(),
            y,
        })
    }

    pub fn n_params(&self) -> usize {
        2 * self.k + 1
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.k..(i + 1) * self.k]
    }

    fn linear(row: &[f64], coef: &[f64]) -> f64 {
        row.iter().zip(coef).map(|(a, b)| a * b).sum()
    }

    /// Fitted (π, μ) per row.
    pub fn fitted(&self, params: &[f64]) -> Vec<(f64, f64)> {
        let k = self.k;
        (0..self.y.len())
            .map(|i| {
                let row = self.row(i);
                (
                    sigmoid(Self::linear(row, &params[..k])),
                    sigmoid(Self::linear(row, &params[k..2 * k])),
                )
            })
            .collect()
    }
}

impl Objective for ZibetaObjective {
    fn value(&self, params: &[f64]) -> f64 {
        let k = self.k;
        let phi = params[2 * k].exp();
        let ln_gamma_phi = ln_gamma(phi);
        let mut total = 0.0;
        for i in 0..self.y.len() {
            let row = self.row(i);
            let eta0 = Self::linear(row, &params[..k]);
            if self.y[i] == 0.0 {
                total -= softplus(-eta0);
                continue;
            }
            let eta1 = Self::linear(row, &params[k..2 * k]);
            let a = sigmoid(eta1) * phi;
            let b = sigmoid(-eta1) * phi;
            total += -softplus(eta0) + ln_gamma_phi - ln_gamma(a) - ln_gamma(b)
                + (a - 1.0) * self.ln_y[i]
                + (b - 1.0) * self.ln_1my[i];
        }
        total
    }

    fn gradient(&self, params: &[f64]) -> Option<Vec<f64>> {
        let k = self.k;
        let phi = params[2 * k].exp();
        let psi_phi = digamma(phi);
        let mut grad = vec![0.0; 2 * k + 1];
        for i in 0..self.y.len() {
            let row = self.row(i);
            let eta0 = Self::linear(row, &params[..k]);
            if self.y[i] == 0.0 {
                let w = sigmoid(-eta0);
                grad[..k].iter_mut().zip(row).for_each(|(g, x)| *g += w * x);
                continue;
            }
            let w0 = -sigmoid(eta0);
            grad[..k].iter_mut().zip(row).for_each(|(g, x)| *g += w0 * x);
            let eta1 = Self::linear(row, &params[k..2 * k]);
            let (mu, mu_c) = (sigmoid(eta1), sigmoid(-eta1));
            let (psi_a, psi_b) = (digamma(mu * phi), digamma(mu_c * phi));
            let score_mu = phi * (psi_b - psi_a + self.ln_y[i] - self.ln_1my[i]);
            let w1 = score_mu * mu * mu_c;
            grad[k..2 * k].iter_mut().zip(row).for_each(|(g, x)| *g += w1 * x);
            grad[2 * k] += phi * (psi_phi - mu * psi_a - mu_c * psi_b + mu * self.ln_y[i] + mu_c * self.ln_1my[i]);
        }
        Some(grad)
    }
}

/// ZIBeta log-likelihood of `params` = `[γ..., β..., log φ]`.
pub fn zibeta_loglik(params: &[f64], design: &DesignMatrix) -> Result<f64> {
    let objective = ZibetaObjective::new(design)?;
    if params.len() != objective.n_params() {
        return Err(Error::Invalid(format!(
            "expected {} parameters, got {}",
            objective.n_params(),
            params.len()
        )));
    }
    Ok(objective.value(params))
}

/// Logistic regression by Newton-Raphson with step halving. Under
/// separation the coefficients drift until the iteration cap; the last
/// finite iterate is returned.
pub fn logistic_fit(x: &DMatrix<f64>, z: &[bool], max_iter: usize) -> Vec<f64> {
    let (n, k) = x.shape();
    let loglik = |b: &DVector<f64>| -> f64 {
        (0..n)
            .map(|i| {
                let eta = x.row(i).dot(&b.transpose());
                if z[i] {
                    -softplus(-eta)
                } else {
                    -softplus(eta)
                }
            })
            .sum()
    };
    let mut beta = DVector::zeros(k);
    let mut current = loglik(&beta);
    for _ in 0..max_iter {
        let mut grad = DVector::zeros(k);
        let mut info = DMatrix::zeros(k, k);
        for (i, &zero) in z.iter().enumerate().take(n) {
            let row = x.row(i).transpose();
            let p = sigmoid(row.dot(&beta));
            grad += &row * ((zero as u8 as f64) - p);
            info += &row * row.transpose() * (p * (1.0 - p));
        }
        let Ok(step) = solve_spd(&info, &grad) else { break };
        let mut t = 1.0;
        let mut moved = false;
        for _ in 0..30 {
            let trial = &beta + &step * t;
            let value = loglik(&trial);
            if value.is_finite() && value >= current {
                let gain = value - current;
                beta = trial;
                current = value;
                moved = gain > 1e-12 * current.abs().max(1.0);
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    beta.iter().copied().collect()
}

/// Starting values: γ from a logistic fit of the zero indicator, β from OLS
/// on logit(y) over nonzero rows, φ by moments from the nonzero residuals.
fn start_values(design: &DesignMatrix) -> Vec<f64> {
    let x = design.with_intercept();
    let (n, k) = x.shape();
    let zero: Vec<bool> = design.y.iter().map(|v| *v == 0.0).collect();
    let gamma = logistic_fit(&x, &zero, 25);

    let nonzero: Vec<usize> = (0..n).filter(|&i| !zero[i]).collect();
    let xn = x.select_rows(nonzero.iter());
    let target = DVector::from_iterator(nonzero.len(), nonzero.iter().map(|&i| logit(design.y[i])));
    let mean_y = nonzero.iter().map(|&i| design.y[i]).sum::<f64>() / nonzero.len() as f64;
    let beta = solve_spd(&(xn.transpose() * &xn), &(xn.transpose() * &target))
        .map(|b| b.iter().copied().collect())
        .unwrap_or_else(|_| {
            let mut b = vec![0.0; k];
            b[0] = logit(mean_y);
            b
        });

    let (mut spread, mut resid) = (0.0, 0.0);
    for (r, &i) in nonzero.iter().enumerate() {
        let mu = sigmoid(xn.row(r).iter().zip(&beta).map(|(a, b)| a * b).sum());
        spread += mu * (1.0 - mu);
        resid += (design.y[i] - mu).powi(2);
    }
    let phi = spread / resid - 1.0;
    let phi = if phi.is_finite() && phi > 0.0 {
        phi.clamp(0.1, 1e6)
    } else {
        1.0
    };

    let mut params = gamma;
    params.extend(beta);
    params.push(phi.ln());
    params
}

/// Hessian by central differences of the analytic gradient.
fn gradient_hessian(objective: &ZibetaObjective, point: &[f64]) -> Option<DMatrix<f64>> {
    let n = point.len();
    let mut hess = DMatrix::zeros(n, n);
    let mut x = point.to_vec();
    for j in 0..n {
        let h = default_step(point[j]);
        x[j] = point[j] + h;
        let up = objective.gradient(&x)?;
        x[j] = point[j] - h;
        let down = objective.gradient(&x)?;
        x[j] = point[j];
        for i in 0..n {
            hess[(i, j)] = (up[i] - down[i]) / (2.0 * h);
        }
    }
    if hess.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some((&hess + hess.transpose()) * 0.5)
}

/// Newton refinement from a quasi-Newton optimum. Near the optimum the
/// likelihood is flat to rounding, so a step is also accepted when the value
/// is unchanged within 1e-12 (relative) and the gradient shrinks.
fn newton_polish(objective: &ZibetaObjective, point: &mut Vec<f64>, value: &mut f64) {
    let max_norm = |g: &[f64]| g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let Some(mut grad) = objective.gradient(point) else {
        return;
    };
    for _ in 0..20 {
        let g_norm = max_norm(&grad);
        if g_norm == 0.0 {
            return;
        }
        let Some(hess) = gradient_hessian(objective, point) else {
            return;
        };
        let Ok(step) = solve_spd(&(-hess), &DVector::from_vec(grad.clone())) else {
            return;
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..20 {
            let trial: Vec<f64> = point.iter().zip(step.iter()).map(|(a, d)| a + t * d).collect();
            let v = objective.value(&trial);
            let flat = v >= *value - 1e-12 * value.abs().max(1.0);
            if v.is_finite() && (v > *value || flat) {
                if let Some(g) = objective.gradient(&trial) {
                    if v > *value || max_norm(&g) < g_norm {
                        *point = trial;
                        *value = v;
                        grad = g;
                        accepted = true;
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return;
        }
    }
}

/// Maximum-likelihood ZIBeta fit with Wald inference.
///
/// Standard errors come from the inverse of the negative Hessian at the
/// optimum. The headline coefficient block is the beta-mean component; the
/// zero component is reported separately.
pub fn fit_zibeta(design: &DesignMatrix) -> Result<FitResult> {
    let zeros = design.y.iter().filter(|v| **v == 0.0).count();
    if zeros == 0 || zeros == design.n_rows() {
        return Err(Error::Invalid(
            "ZIBeta needs at least one zero and one nonzero response".into(),
        ));
    }
    let objective = ZibetaObjective::new(design)?;
    let start = start_values(design);
    let max = maximize(&objective, &start, &Tolerances::default())?;
    let mut point = max.point;
    let mut value = max.value;
    newton_polish(&objective, &mut point, &mut value);

    let mut warnings = Vec::new();
    if !max.converged {
        warnings.push("optimizer did not converge".to_string());
    }
    let k = design.n_columns() + 1;
    let n_params = 2 * k + 1;
    let fitted = objective.fitted(&point);
    let mean_pi = fitted.iter().map(|f| f.0).sum::<f64>() / fitted.len() as f64;
    if point[..k].iter().any(|g| g.abs() > 20.0) || !(1e-6..=1.0 - 1e-6).contains(&mean_pi) {
        warnings.push("zero component at the boundary (separation)".to_string());
    }

    let covariance = gradient_hessian(&objective, &point)
        .map(|h| -h)
        .and_then(|neg| invert_spd(&neg).ok());
    if covariance.is_none() {
        warnings.push("singular Hessian: standard errors unavailable".to_string());
    }
    let se = |j: usize| covariance.as_ref().map(|c| c[(j, j)].max(0.0).sqrt());
    let block = |offset: usize| -> Vec<Coefficient> {
        std::iter::once(INTERCEPT)
            .chain(design.columns.iter().map(String::as_str))
            .enumerate()
            .map(|(j, name)| {
                let est = point[offset + j];
                let s = se(offset + j);
                Coefficient::new(name, est, s, s.and_then(|s| z_p_value(est / s)))
            })
            .collect()
    };

    let expected: Vec<f64> = fitted.iter().map(|(pi, mu)| (1.0 - pi) * mu).collect();
    let gradient_norm = fd_gradient(&objective, &point, None)
        .map(|g| g.iter().fold(0.0f64, |m, v| m.max(v.abs())))
        .unwrap_or(f64::NAN);
    // first-order optimality checked independently of the optimizer's own test
    let converged = gradient_norm <= 1e-4;
    Ok(FitResult {
        model: ModelKind::ZiBeta,
        coefficients: block(k),
        zero_coefficients: Some(block(0)),
        phi: Some(point[2 * k].exp()),
        log_phi_se: se(2 * k),
        log_likelihood: value,
        aic: -2.0 * value + 2.0 * n_params as f64,
        pseudo_r2: squared_correlation(&expected, design.y.as_slice()),
        n_rows: design.n_rows(),
        n_params,
        converged,
        iterations: max.iterations,
        warnings,
    })
}
