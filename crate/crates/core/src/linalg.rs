//! Dense symmetric eigendecomposition with a fixed ordering and sign
//! convention, so repeated runs give bit-identical embeddings.

use nalgebra::{DMatrix, SymmetricEigen};

/// Eigenpairs sorted by descending eigenvalue.
pub struct SortedEigen {
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector of `values[k]`.
    pub vectors: DMatrix<f64>,
}

/// Ties in eigenvalue keep the solver's original order. Each eigenvector is
/// flipped so that its largest-magnitude entry (lowest index on ties) is
/// positive.
pub fn sym_eigen(m: DMatrix<f64>) -> SortedEigen {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let mut pivot = 0;
        for i in 1..n {
            if col[i].abs() > col[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        vectors.set_column(dst, &(col * sign));
    }
    SortedEigen { values, vectors }
}
