//! Principal component analysis by eigendecomposition of the sample
//! covariance.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// A fitted projection onto the top `k` principal directions.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// `k` orthonormal row vectors, largest variance first.
    pub components: Vec<Vec<f64>>,
    /// Variance along each component, with the `1/(N-1)` normalisation.
    pub eigenvalues: Vec<f64>,
    /// Trace of the covariance, i.e. the total variance.
    pub total_variance: f64,
}

impl PcaModel {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim(), "input width differs from the fitted model");
        self.components
            .iter()
            .map(|c| c.iter().zip(x).zip(&self.mean).map(|((c, x), m)| c * (x - m)).sum())
            .collect()
    }

    /// `C x` without subtracting the mean: [`PcaModel::project`] plus the
    /// constant offset `C mean`.
    pub fn project_uncentered(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim(), "input width differs from the fitted model");
        self.components
            .iter()
            .map(|c| c.iter().zip(x).map(|(c, x)| c * x).sum())
            .collect()
    }

    /// `mean + Σ z_i c_i`.
    pub fn reconstruct(&self, z: &[f64]) -> Vec<f64> {
        assert_eq!(z.len(), self.k(), "code length differs from the fitted model");
        let mut out = self.mean.clone();
        for (zi, c) in z.iter().zip(&self.components) {
            for (o, ci) in out.iter_mut().zip(c) {
                *o += zi * ci;
            }
        }
        out
    }

    /// Fraction of the total variance carried by each component.
    pub fn explained_variance_ratio(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| l / self.total_variance).collect()
    }

    /// `max |c_i · c_j - δ_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.components.iter().enumerate() {
            for (j, b) in self.components.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }
}

/// Fits the top `k` principal components of `rows` (one observation per
/// row). Each component is signed so that its largest-magnitude entry is
/// positive, which makes the result independent of the eigensolver's sign
/// choices.
pub fn fit_pca(rows: &[Vec<f64>], k: usize) -> Result<PcaModel> {
    let n = rows.len();
    let d = rows.first().map_or(0, Vec::len);
    if n < 2 || d == 0 {
        return Err(Error::Config(format!("PCA needs at least two rows, got {n}")));
    }
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::Config("PCA rows have differing widths".into()));
    }
    if k == 0 || k > n.min(d) {
        return Err(Error::Config(format!(
            "cannot keep {k} components of a {n}x{d} matrix"
        )));
    }

    let x = DMatrix::from_fn(n, d, |i, j| rows[i][j]);
    let mean: DVector<f64> = x.row_mean().transpose();
    let mut centered = x;
    for mut row in centered.row_iter_mut() {
        row -= mean.transpose();
    }
    let cov = (centered.transpose() * &centered) / (n as f64 - 1.0);
    let total_variance = cov.trace();
    if !(total_variance > 0.0) {
        return Err(Error::Numerical(
            "data has zero variance; the principal components are undefined".into(),
        ));
    }

    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..d).collect();
    // stable sort keeps the solver order among exact ties
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut components = Vec::with_capacity(k);
    let mut eigenvalues = Vec::with_capacity(k);
    for &idx in &order[..k] {
        let mut c: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        let pivot = c
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |best, (i, v)| if v.abs() > best.1.abs() { (i, *v) } else { best });
        if pivot.1 < 0.0 {
            c.iter_mut().for_each(|v| *v = -*v);
        }
        components.push(c);
        eigenvalues.push(eig.eigenvalues[idx]);
    }
    Ok(PcaModel {
        mean: mean.iter().copied().collect(),
        components,
        eigenvalues,
        total_variance,
    })
}
