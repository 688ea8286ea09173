use nalgebra::{DMatrix, DVector};

use super::DesignMatrix;

/// Variance inflation factor per column: 1 / (1 - R²) from regressing the
/// column on all others (with intercept). Perfectly collinear columns get
/// +∞.
///
/// Each auxiliary regression is solved on centred data by SVD, so rank
/// deficiency among the other columns does not poison the result.
pub fn vif(design: &DesignMatrix) -> Vec<f64> {
    let n = design.n_rows();
    let p = design.n_columns();
    let centred = DMatrix::from_fn(n, p, |i, j| {
        let col = design.x.column(j);
        design.x[(i, j)] - col.sum() / n as f64
    });
    (0..p)
        .map(|j| {
            let target: DVector<f64> = centred.column(j).into_owned();
            let tss = target.norm_squared();
            if tss == 0.0 {
                return f64::INFINITY;
            }
            let others: Vec<usize> = (0..p).filter(|&k| k != j).collect();
            let a = centred.select_columns(others.iter());
            let svd = a.clone().svd(true, true);
            let top = svd.singular_values.max();
            let Ok(coef) = svd.solve(&target, 1e-12 * top.max(f64::MIN_POSITIVE)) else {
                return f64::INFINITY;
            };
            let rss = (&target - &a * coef).norm_squared();
            let unexplained = rss / tss;
            if unexplained <= 1e-12 {
                f64::INFINITY
            } else {
                (1.0 / unexplained).max(1.0)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(cols: &[Vec<f64>]) -> DesignMatrix {
        let n = cols[0].len();
        DesignMatrix::new(
            (0..cols.len()).map(|j| format!("x{j}")).collect(),
            DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]),
            DVector::zeros(n),
        )
        .unwrap()
    }

    #[test]
    fn orthogonal_columns() {
        let u = vec![1.0, -1.0, 1.0, -1.0];
        let v = vec![1.0, 1.0, -1.0, -1.0];
        let w = vec![1.0, -1.0, -1.0, 1.0];
        for value in vif(&design(&[u, v, w])) {
            assert!((value - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn duplicated_column() {
        let a = vec![0.2, 0.9, 0.4, 0.1, 0.7];
        let b = vec![1.0, 0.3, 0.5, 0.8, 0.2];
        let v = vif(&design(&[a.clone(), b, a]));
        assert!(v[0].is_infinite() && v[2].is_infinite());
        assert!(v[1].is_finite());
    }

    #[test]
    fn correlation_point_eight() {
        let u = [1.0, -1.0, 1.0, -1.0];
        let w = [1.0, 1.0, -1.0, -1.0];
        let x2: Vec<f64> = u.iter().zip(&w).map(|(a, b)| 0.8 * a + 0.6 * b).collect();
        for value in vif(&design(&[u.to_vec(), x2])) {
            assert!((value - 1.0 / (1.0 - 0.64)).abs() < 1e-6);
        }
    }
}
