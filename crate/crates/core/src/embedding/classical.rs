use nalgebra::DMatrix;

use super::{check_dim, geodesic_to_matrix, Embedding, Manifold};
use crate::error::Result;
use crate::graph::GeodesicMatrix;
use crate::linalg::sym_eigen;

/// Classical (Torgerson) MDS / principal coordinates in the plane.
///
/// Only `dim == 2` is supported. Eigen-directions with negative eigenvalue
/// contribute zero columns.
pub fn classical_mds(delta: &GeodesicMatrix, dim: usize) -> Result<Embedding> {
    check_dim(dim)?;
    classical_mds_matrix(&geodesic_to_matrix(delta))
}

/// Classical MDS on an arbitrary symmetric dissimilarity matrix.
pub fn classical_mds_matrix(delta: &DMatrix<f64>) -> Result<Embedding> {
    let (eigenvalues, coords) = principal_coordinates(delta, 2);
    debug_assert_eq!(eigenvalues.len(), 2);
    Embedding::new(Manifold::EuclideanPlane, coords)
}

/// Double-centred Gram matrix `B = -1/2 J Δ² J`.
pub(crate) fn double_centered(delta: &DMatrix<f64>) -> DMatrix<f64> {
    let n = delta.nrows();
    let sq = delta.map(|d| d * d);
    let row_means: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    DMatrix::from_fn(n, n, |i, j| -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand))
}

/// Returns the leading `dim` eigenvalues of `B` and the scaled coordinates.
pub(crate) fn principal_coordinates(delta: &DMatrix<f64>, dim: usize) -> (Vec<f64>, Vec<[f64; 2]>) {
    let n = delta.nrows();
    let b = double_centered(delta);
    let eig = sym_eigen(b);
    let k = dim.min(n);
    let mut coords = vec![[0.0; 2]; n];
    for c in 0..k {
        let lambda = eig.values[c];
        if lambda <= 0.0 {
            continue;
        }
        let s = lambda.sqrt();
        for i in 0..n {
            coords[i][c] = eig.vectors[(i, c)] * s;
        }
    }
    (eig.values.into_iter().take(dim).collect(), coords)
}
