//! Small shared linear-algebra helpers. Hermitian eigendecomposition is the
//! only spectral routine the whole crate relies on.

use nalgebra::{Complex, DMatrix};

pub(crate) type C64 = Complex<f64>;

/// Eigenvalues of a Hermitian matrix, ascending. The input is assumed
/// Hermitian up to the caller's tolerance; only one triangle is consulted.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("non-NaN eigenvalue"));
    ev
}

/// Full Hermitian eigendecomposition: (eigenvalues descending, matching
/// eigenvector columns). Descending order puts dominant components first,
/// which keeps purifications deterministic.
pub(crate) fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = m.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .expect("non-NaN eigenvalue")
    });
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<C64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Frobenius norm of `V† V - I`; zero iff the columns are orthonormal.
pub(crate) fn isometry_defect(v: &DMatrix<C64>) -> f64 {
    let cols = v.ncols();
    (v.adjoint() * v - DMatrix::<C64>::identity(cols, cols)).norm()
}

/// Frobenius norm of the anti-Hermitian part, `||M - M†||`.
pub(crate) fn hermiticity_defect(m: &DMatrix<C64>) -> f64 {
    (m - m.adjoint()).norm()
}
