use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::C64;

/// Eigenvalues (descending) and matching eigenvector columns of a Hermitian matrix.
pub(crate) fn hermitian_eigen(matrix: DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = matrix.nrows();
    if n == 0 {
        return (Vec::new(), matrix);
    }
    let eig = SymmetricEigen::new(matrix);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Largest eigenvalue and a deterministic unit eigenvector.
///
/// In a degenerate top eigenspace (eigenvalues within `1e-12` of the max)
/// the vector is the normalized projection of the lowest-index basis vector
/// with nonzero overlap. The phase makes the largest-magnitude entry real
/// and positive.
pub(crate) fn top_eigenpair(matrix: &DMatrix<C64>) -> (f64, DVector<C64>) {
    let (values, vectors) = hermitian_eigen(matrix.clone());
    let top = values[0];
    let degenerate = values.iter().take_while(|&&v| v >= top - 1e-12).count();
    let vector = if degenerate == 1 {
        vectors.column(0).into_owned()
    } else {
        let basis = vectors.columns(0, degenerate);
        let n = matrix.nrows();
        let mut chosen = vectors.column(0).into_owned();
        for i in 0..n {
            // projection of e_i onto the eigenspace: Σ_c conj(V_ic) V_:c
            let coeffs = basis.row(i).map(|z| z.conj());
            let proj = basis * coeffs.transpose();
            if proj.norm() > 1e-6 {
                chosen = proj;
                break;
            }
        }
        chosen
    };
    (top, fix_phase(vector.normalize()))
}

/// Rotates the global phase so the largest-magnitude entry is real positive.
pub(crate) fn fix_phase(v: DVector<C64>) -> DVector<C64> {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > best_mag + 1e-12 {
            best = i;
            best_mag = z.norm();
        }
    }
    if best_mag <= 0.0 {
        return v;
    }
    let phase = v[best].conj() / best_mag;
    v.map(|z| z * phase)
}
