//! Small dense complex linear algebra on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Entrywise tolerance for the Hermitian check, relative to `max(1, max|M|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues above `-PSD_TOL` are treated as zero by [`hermitian_sqrt`].
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Descending.
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: CMatrix,
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn hermitian_eig(m: &CMatrix) -> Result<HermitianEig> {
    if !m.is_square() {
        return Err(Error::Contract(format!(
            "{}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let defect = hermitian_defect(m);
    if defect > HERMITIAN_TOL * max_abs(m).max(1.0) {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    // nalgebra reads only the lower triangle; symmetrize so both halves count.
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..m.nrows()).collect();
    // stable sort keeps the decomposition's index order on ties
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEig { values, vectors })
}

/// Principal square root `S = V Λ^{1/2} V†`, so that `S S† = M`.
pub fn hermitian_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let HermitianEig { values, vectors } = hermitian_eig(m)?;
    if let Some(&min) = values.last() {
        if min < -PSD_TOL {
            return Err(Error::NotPsd(min));
        }
    }
    let mut scaled = vectors.clone();
    for (c, &v) in values.iter().enumerate() {
        let s = v.max(0.0).sqrt();
        scaled.column_mut(c).scale_mut(s);
    }
    Ok(&scaled * vectors.adjoint())
}

/// Determinant via LU with partial pivoting.
pub fn det_real(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    m.clone().lu().determinant()
}

pub fn det_complex(m: &CMatrix) -> Complex64 {
    if m.nrows() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

/// `log2 det(I + rho · A A†)`, evaluated through a Cholesky factor.
pub fn log2det_identity_plus(a: &CMatrix, rho: f64) -> f64 {
    let n = a.nrows();
    if n == 0 || a.ncols() == 0 {
        return 0.0;
    }
    let mut g = (a * a.adjoint()).scale(rho);
    for i in 0..n {
        g[(i, i)] += 1.0;
    }
    match g.clone().cholesky() {
        Some(ch) => 2.0 * ch.l().diagonal().iter().map(|d| d.re.log2()).sum::<f64>(),
        None => det_complex(&g).re.log2(),
    }
}
