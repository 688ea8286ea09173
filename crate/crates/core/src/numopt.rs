//! Unconstrained maximization and finite-difference derivatives.
//!
//! [`maximize`] runs BFGS ascent with a backtracking (Armijo) line search.
//! When the line search stalls it hands over to a bounded Nelder-Mead run and
//! then resumes quasi-Newton steps from the simplex's best vertex.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};

/// A real-valued function to maximize. An analytic gradient is optional;
/// central differences are used when it is absent.
pub trait Objective {
    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }
}

impl<F: Fn(&[f64]) -> f64> Objective for F {
    fn value(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveEvaluation {
    pub point: Vec<f64>,
    pub value: f64,
    pub gradient: Option<Vec<f64>>,
}

impl ObjectiveEvaluation {
    pub fn at<O: Objective + ?Sized>(objective: &O, point: &[f64]) -> Self {
        ObjectiveEvaluation {
            point: point.to_vec(),
            value: objective.value(point),
            gradient: objective.gradient(point),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Converged when the gradient max-norm drops below this.
    pub g_tol: f64,
    /// Converged when |Δf| / max(|f|, 1) drops below this.
    pub f_tol: f64,
    pub max_iter: usize,
    /// Nelder-Mead iterations per fallback.
    pub simplex_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            g_tol: 1e-6,
            f_tol: 1e-10,
            max_iter: 10_000,
            simplex_iter: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Maximum {
    pub point: Vec<f64>,
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
    pub gradient_max_norm: f64,
    pub simplex_fallbacks: usize,
}

/// Default central-difference step for one coordinate.
pub fn default_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(1.0)
}

fn eval_finite<O: Objective + ?Sized>(objective: &O, x: &[f64], coordinate: usize) -> Result<f64> {
    let v = objective.value(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            context: format!("finite-difference stencil of coordinate {coordinate}"),
        })
    }
}

/// Central-difference gradient. `h` overrides the per-coordinate step.
pub fn fd_gradient<O: Objective + ?Sized>(objective: &O, point: &[f64], h: Option<&[f64]>) -> Result<Vec<f64>> {
    let mut x = point.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        let step = h.map_or_else(|| default_step(point[k]), |h| h[k]);
        x[k] = point[k] + step;
        let up = eval_finite(objective, &x, k)?;
        x[k] = point[k] - step;
        let down = eval_finite(objective, &x, k)?;
        x[k] = point[k];
        grad.push((up - down) / (2.0 * step));
    }
    Ok(grad)
}

/// Central-difference Hessian from function values, symmetrized as
/// (H + Hᵀ) / 2.
pub fn fd_hessian<O: Objective + ?Sized>(objective: &O, point: &[f64], h: Option<&[f64]>) -> Result<DMatrix<f64>> {
    let n = point.len();
    let steps: Vec<f64> = (0..n)
        .map(|k| h.map_or_else(|| default_step(point[k]), |h| h[k]))
        .collect();
    let f0 = eval_finite(objective, point, 0)?;
    let mut x = point.to_vec();
    let mut hess = DMatrix::zeros(n, n);
    for i in 0..n {
        x[i] = point[i] + steps[i];
        let up = eval_finite(objective, &x, i)?;
        x[i] = point[i] - steps[i];
        let down = eval_finite(objective, &x, i)?;
        x[i] = point[i];
        hess[(i, i)] = (up - 2.0 * f0 + down) / (steps[i] * steps[i]);
        for j in 0..i {
            let mut corner = |si: f64, sj: f64| {
                x[i] = point[i] + si * steps[i];
                x[j] = point[j] + sj * steps[j];
                let v = eval_finite(objective, &x, i);
                x[i] = point[i];
                x[j] = point[j];
                v
            };
            let pp = corner(1.0, 1.0)?;
            let pm = corner(1.0, -1.0)?;
            let mp = corner(-1.0, 1.0)?;
            let mm = corner(-1.0, -1.0)?;
            let v = (pp - pm - mp + mm) / (4.0 * steps[i] * steps[j]);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    Ok((&hess + hess.transpose()) * 0.5)
}

fn cholesky(matrix: &DMatrix<f64>) -> Result<Cholesky<f64, nalgebra::Dyn>> {
    if !matrix.is_square() {
        return Err(Error::Invalid("matrix is not square".into()));
    }
    let n = matrix.nrows();
    let scale = (0..n).map(|i| matrix[(i, i)].abs()).fold(0.0, f64::max);
    if n == 0 || !(scale > 0.0) || matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem);
    }
    for i in 0..n {
        for j in 0..i {
            if (matrix[(i, j)] - matrix[(j, i)]).abs() > 1e-8 * scale {
                return Err(Error::Invalid("matrix is not symmetric".into()));
            }
        }
    }
    let chol = Cholesky::new(matrix.clone()).ok_or(Error::SingularSystem)?;
    let l = chol.l_dirty();
    let tiny = 1e-12 * scale;
    if (0..n).any(|i| l[(i, i)] * l[(i, i)] <= tiny) {
        return Err(Error::SingularSystem);
    }
    Ok(chol)
}

/// Solves A x = b for symmetric positive-definite A by Cholesky
/// factorization. Pivots below 1e-12 of the largest diagonal entry count as
/// singular.
pub fn solve_spd(matrix: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    if rhs.len() != matrix.nrows() {
        return Err(Error::Invalid("dimension mismatch".into()));
    }
    Ok(cholesky(matrix)?.solve(rhs))
}

/// Inverse of a symmetric positive-definite matrix.
pub fn invert_spd(matrix: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    Ok(cholesky(matrix)?.inverse())
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn gradient_at<O: Objective + ?Sized>(objective: &O, x: &[f64]) -> Option<Vec<f64>> {
    let g = match objective.gradient(x) {
        Some(g) => g,
        None => fd_gradient(objective, x, None).ok()?,
    };
    g.iter().all(|v| v.is_finite()).then_some(g)
}

/// Bounded Nelder-Mead ascent. Returns the best vertex and its value.
fn nelder_mead<O: Objective + ?Sized>(
    objective: &O,
    start: &[f64],
    f_start: f64,
    iterations: usize,
) -> (Vec<f64>, f64) {
    let n = start.len();
    // work on -f so the textbook minimization rules apply
    let cost = |x: &[f64]| {
        let v = objective.value(x);
        if v.is_finite() {
            -v
        } else {
            f64::INFINITY
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(start.to_vec(), -f_start)];
    for k in 0..n {
        let mut x = start.to_vec();
        x[k] += 0.05 * start[k].abs().max(1.0);
        let c = cost(&x);
        simplex.push((x, c));
    }
    for _ in 0..iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let worst = simplex[n].clone();
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|v| v.0[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (w - c)).collect() };
        let reflected = along(-1.0);
        let fr = cost(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(-2.0);
            let fe = cost(&expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let contracted = if fr < worst.1 { along(-0.5) } else { along(0.5) };
            let fc = cost(&contracted);
            if fc < worst.1.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, v)| b + 0.5 * (v - b)).collect();
                    let c = cost(&x);
                    *vertex = (x, c);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, c) = simplex.swap_remove(0);
    (x, -c)
}

/// Maximizes `objective` from `start`.
///
/// Fails only when the objective is not finite at `start`. Hitting the
/// iteration cap returns the best point with `converged = false`.
pub fn maximize<O: Objective + ?Sized>(objective: &O, start: &[f64], tol: &Tolerances) -> Result<Maximum> {
    let n = start.len();
    let mut x = start.to_vec();
    let mut f = objective.value(&x);
    if !f.is_finite() {
        return Err(Error::NonFinite {
            context: "starting point".into(),
        });
    }
    let mut g = gradient_at(objective, &x).unwrap_or_else(|| vec![0.0; n]);
    let mut inv_h = DMatrix::<f64>::identity(n, n);
    let mut fresh = true;
    let mut fallbacks = 0;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < tol.max_iter {
        if max_norm(&g) < tol.g_tol {
            converged = true;
            break;
        }
        iterations += 1;
        let grad = DVector::from_column_slice(&g);
        let mut dir = &inv_h * &grad;
        let mut slope = grad.dot(&dir);
        if !(slope > 0.0) {
            inv_h.fill_with_identity();
            fresh = true;
            dir = grad.clone();
            slope = grad.dot(&dir);
        }
        let mut t = if fresh { 1.0 / max_norm(&g).max(1.0) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(dir.iter()).map(|(a, d)| a + t * d).collect();
            let ft = objective.value(&trial);
            if ft.is_finite() && ft >= f + 1e-4 * t * slope {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }

        let (x_new, f_new) = match accepted {
            Some(step) => step,
            None => {
                fallbacks += 1;
                let (xs, fs) = nelder_mead(objective, &x, f, tol.simplex_iter);
                inv_h.fill_with_identity();
                fresh = true;
                let change = (fs - f) / f.abs().max(1.0);
                if !(fs > f) || change < tol.f_tol {
                    if fs > f {
                        x = xs;
                        f = fs;
                    }
                    converged = true;
                    break;
                }
                x = xs;
                f = fs;
                match gradient_at(objective, &x) {
                    Some(gn) => g = gn,
                    None => break,
                }
                continue;
            }
        };
        let Some(g_new) = gradient_at(objective, &x_new) else {
            x = x_new;
            f = f_new;
            break;
        };

        let s = DVector::from_iterator(n, x_new.iter().zip(&x).map(|(a, b)| a - b));
        // curvature of -f
        let y = DVector::from_iterator(n, g.iter().zip(&g_new).map(|(a, b)| a - b));
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            if fresh {
                inv_h *= sy / y.dot(&y);
                fresh = false;
            }
            let rho = 1.0 / sy;
            let hy = &inv_h * &y;
            let yhy = y.dot(&hy);
            // H+ = H - ρ(s·Hyᵀ + Hy·sᵀ) + (ρ² yᵀHy + ρ) s·sᵀ
            inv_h -= (&s * hy.transpose() + &hy * s.transpose()) * rho;
            inv_h += (&s * s.transpose()) * (rho * rho * yhy + rho);
        }

        let change = (f_new - f).abs() / f_new.abs().max(1.0);
        x = x_new;
        f = f_new;
        g = g_new;
        if change < tol.f_tol {
            converged = true;
            break;
        }
    }

    Ok(Maximum {
        gradient_max_norm: max_norm(&g),
        point: x,
        value: f,
        converged,
        iterations,
        simplex_fallbacks: fallbacks,
    })
}
