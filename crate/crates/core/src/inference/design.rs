use nalgebra::{DMatrix, DVector};

use crate::distances::{Feature, PairFeatures};
use crate::error::{Error, Result};

/// (x - min) / (max - min). Constant columns have no rescaling.
pub fn minmax_rescale(column: &[f64]) -> Result<Vec<f64>> {
    let lo = column.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if column.is_empty() || !(hi > lo) {
        return Err(Error::DegenerateColumn(String::new()));
    }
    let range = hi - lo;
    Ok(column.iter().map(|v| (v - lo) / range).collect())
}

/// Explanatory columns (rescaled, no intercept) and the DIC response.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    pub columns: Vec<String>,
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub pairs: Vec<(String, String)>,
}

impl DesignMatrix {
    pub fn new(columns: Vec<String>, x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        if x.ncols() != columns.len() || x.nrows() != y.len() {
            return Err(Error::Invalid("design dimensions disagree".into()));
        }
        let pairs = vec![(String::new(), String::new()); y.len()];
        Ok(DesignMatrix { columns, x, y, pairs })
    }

    pub fn n_rows(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_columns(&self) -> usize {
        self.x.ncols()
    }

    /// The columns with a leading column of ones.
    pub fn with_intercept(&self) -> DMatrix<f64> {
        let n = self.n_rows();
        let mut out = DMatrix::from_element(n, self.n_columns() + 1, 1.0);
        out.columns_mut(1, self.n_columns()).copy_from(&self.x);
        out
    }

    pub fn select_rows(&self, keep: &[usize]) -> DesignMatrix {
        let x = self.x.select_rows(keep.iter());
        let y = DVector::from_iterator(keep.len(), keep.iter().map(|&i| self.y[i]));
        DesignMatrix {
            columns: self.columns.clone(),
            x,
            y,
            pairs: keep.iter().map(|&i| self.pairs[i].clone()).collect(),
        }
    }

    pub fn scale_response(&self, factor: f64) -> DesignMatrix {
        DesignMatrix {
            y: &self.y * factor,
            ..self.clone()
        }
    }
}

/// Outcome of [`build_design`]: the matrix plus what was removed on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignBuild {
    pub design: DesignMatrix,
    /// Rows dropped because a selected indicator was masked.
    pub excluded_rows: usize,
    /// Constant columns dropped after listwise deletion.
    pub dropped_columns: Vec<String>,
}

/// Listwise-deletes pairs with any selected feature masked, min-max
/// rescales each column, and drops constant columns.
pub fn build_design(pairs: &[PairFeatures], features: &[Feature]) -> Result<DesignBuild> {
    let rows: Vec<&PairFeatures> = pairs
        .iter()
        .filter(|p| features.iter().all(|f| p.get(*f).is_some()))
        .collect();
    let excluded_rows = pairs.len() - rows.len();
    let mut columns = Vec::new();
    let mut data: Vec<Vec<f64>> = Vec::new();
    let mut dropped_columns = Vec::new();
    for feature in features {
        let raw: Vec<f64> = rows.iter().map(|p| p.get(*feature).unwrap()).collect();
        match minmax_rescale(&raw) {
            Ok(scaled) => {
                columns.push(feature.name().to_string());
                data.push(scaled);
            }
            Err(_) => dropped_columns.push(feature.name().to_string()),
        }
    }
    let n = rows.len();
    let x = DMatrix::from_fn(n, columns.len(), |i, j| data[j][i]);
    let y = DVector::from_iterator(n, rows.iter().map(|p| p.dic));
    Ok(DesignBuild {
        design: DesignMatrix {
            columns,
            x,
            y,
            pairs: rows.iter().map(|p| (p.a.clone(), p.b.clone())).collect(),
        },
        excluded_rows,
        dropped_columns,
    })
}
