use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const NEGATIVE_EIGEN_TOL: f64 = 1e-6;

/// A validated covariance matrix together with its symmetric square root.
#[derive(Debug, Clone, PartialEq)]
pub struct CovSpec {
    matrix: DMatrix<f64>,
    root: DMatrix<f64>,
}

impl CovSpec {
    /// Validates `matrix` and computes its PSD square root.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        sqrt_psd(&matrix)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::arg("covariance must have at least one row"));
        }
        for r in rows {
            if r.len() != d {
                return Err(Error::arg("covariance must be square"));
            }
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    pub fn identity(d: usize) -> Self {
        Self::diagonal(&vec![1.0; d])
    }

    pub fn zeros(d: usize) -> Self {
        Self::diagonal(&vec![0.0; d])
    }

    /// Diagonal covariance; negative entries are clamped to zero.
    pub fn diagonal(diag: &[f64]) -> Self {
        let matrix = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag));
        let root = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            diag.len(),
            diag.iter().map(|v| v.max(0.0).sqrt()),
        ));
        CovSpec { matrix, root }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Symmetric square root `R` with `R R = matrix`.
    pub fn root(&self) -> &DMatrix<f64> {
        &self.root
    }

    pub fn det(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|&v| v == 0.0)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.matrix[(i, j)]).collect())
            .collect()
    }

    /// Writes `root * z` into `out`.
    pub fn apply_root(&self, z: &[f64], out: &mut [f64]) {
        let d = self.dim();
        for (i, o) in out.iter_mut().enumerate().take(d) {
            let mut acc = 0.0;
            for (j, zj) in z.iter().enumerate().take(d) {
                acc += self.root[(i, j)] * zj;
            }
            *o = acc;
        }
    }
}

/// Symmetric PSD square root via eigendecomposition.
///
/// Slightly negative eigenvalues (down to `-1e-6`, relative to the matrix
/// scale) are treated as rounding noise and clamped to zero.
pub fn sqrt_psd(matrix: &DMatrix<f64>) -> Result<CovSpec> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::arg("covariance must be square"));
    }
    if matrix.nrows() == 0 {
        return Err(Error::arg("covariance must be non-empty"));
    }
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::arg("covariance has non-finite entries"));
    }
    let scale = matrix.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let asym = (matrix - matrix.transpose()).amax();
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric(asym));
    }
    let sym = (matrix + matrix.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym.clone());
    let mut vals = eig.eigenvalues.clone();
    for v in vals.iter_mut() {
        if *v < -NEGATIVE_EIGEN_TOL * scale {
            return Err(Error::NotPsd(*v));
        }
        *v = v.max(0.0).sqrt();
    }
    let q = &eig.eigenvectors;
    let root = q * DMatrix::from_diagonal(&vals) * q.transpose();
    let root = (&root + root.transpose()) * 0.5;
    Ok(CovSpec { matrix: sym, root })
}
