//! Dense complex linear algebra used throughout the crate.
//!
//! Matrices are `nalgebra` dense matrices over `Complex64`. Rank decisions are
//! relative: a singular value counts when it exceeds `rank_tol * sigma_max`.

mod eig;
mod frame;
mod quadrature;

pub use eig::{eig, eigenvalues, hermitian_eig, schur, EigenCluster};
pub use frame::{orthonormalize, Frame, Metric};
pub use quadrature::{contour_quadrature, Contour};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Numerical thresholds shared by every operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub rank_tol: f64,
    pub cross_tol: f64,
    pub quad_nodes: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rank_tol: 1e-9, cross_tol: 1e-7, quad_nodes: 64 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.rank_tol > 0.0 && self.rank_tol.is_finite()) {
            return Err(Error::BadTolerances(format!("rank_tol = {}", self.rank_tol)));
        }
        if !(self.cross_tol > 0.0 && self.cross_tol.is_finite()) {
            return Err(Error::BadTolerances(format!("cross_tol = {}", self.cross_tol)));
        }
        if self.quad_nodes < 8 {
            return Err(Error::BadTolerances(format!("quad_nodes = {} < 8", self.quad_nodes)));
        }
        Ok(())
    }
}

/// Build a matrix from row-major entries, rejecting non-finite values.
pub fn from_rows(rows: usize, cols: usize, entries: &[Complex64]) -> Result<CMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "{} entries for a {rows}x{cols} matrix",
            entries.len()
        )));
    }
    let m = CMatrix::from_row_slice(rows, cols, entries);
    check_finite(&m, "matrix")?;
    Ok(m)
}

pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(rows, cols, entries.iter().map(|&x| c(x, 0.0)))
}

pub fn diag(entries: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(entries))
}

pub fn check_finite(m: &CMatrix, what: &'static str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

pub fn check_square(m: &CMatrix, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what} is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Spectral norm.
pub fn norm2(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn rank(m: &CMatrix, rank_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        None => 0,
        Some(&smax) if smax == 0.0 => 0,
        Some(&smax) => s.iter().filter(|&&x| x > rank_tol * smax).count(),
    }
}

/// Rank with an absolute floor: singular values below `abs` never count even
/// when the matrix is tiny overall.
pub fn rank_abs(m: &CMatrix, rank_tol: f64, abs: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        None => 0,
        Some(&smax) => s.iter().filter(|&&x| x > (rank_tol * smax).max(abs)).count(),
    }
}

/// Orthonormal basis (standard inner product) of the kernel of `m`.
pub fn null_space(m: &CMatrix, rank_tol: f64) -> CMatrix {
    null_space_abs(m, rank_tol, 0.0)
}

pub fn null_space_abs(m: &CMatrix, rank_tol: f64, abs: f64) -> CMatrix {
    let n = m.ncols();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return CMatrix::identity(n, n);
    }
    // Pad to a square-or-tall matrix so the full right singular basis is returned.
    let a = if m.nrows() < n {
        let mut p = CMatrix::zeros(n, n);
        p.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let s = &svd.singular_values;
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let thresh = (rank_tol * smax).max(abs);
    let r = if smax == 0.0 { 0 } else { s.iter().filter(|&&x| x > thresh).count() };
    let kernel_rows: Vec<usize> = (r..n).collect();
    let mut out = CMatrix::zeros(n, kernel_rows.len());
    for (j, &i) in kernel_rows.iter().enumerate() {
        out.set_column(j, &vt.row(i).adjoint());
    }
    out
}

/// Orthonormal basis (standard inner product) of the range of `m`.
pub fn range_space(m: &CMatrix, rank_tol: f64) -> CMatrix {
    range_space_abs(m, rank_tol, 0.0)
}

pub fn range_space_abs(m: &CMatrix, rank_tol: f64, abs: f64) -> CMatrix {
    if m.nrows() == 0 || m.ncols() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let s = &svd.singular_values;
    let smax = s.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let thresh = (rank_tol * smax).max(abs);
    let cols: Vec<_> = (0..s.len()).filter(|&i| s[i] > thresh).map(|i| u.column(i).into_owned()).collect();
    if cols.is_empty() {
        CMatrix::zeros(m.nrows(), 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

pub fn inverse(m: &CMatrix) -> Option<CMatrix> {
    if m.nrows() == 0 {
        return Some(CMatrix::zeros(0, 0));
    }
    let inv = m.clone().lu().try_inverse()?;
    if inv.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Some(inv)
    } else {
        None
    }
}

/// Smallest singular value divided by the largest; zero for singular or empty input.
pub fn inverse_condition(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&a), Some(&b)) if a > 0.0 && s.len() == m.nrows().max(m.ncols()) => b / a,
        _ => 0.0,
    }
}

pub fn condition_number(m: &CMatrix) -> f64 {
    let r = inverse_condition(m);
    if r == 0.0 {
        f64::INFINITY
    } else {
        1.0 / r
    }
}

/// ‖m − m*‖ relative to ‖m‖.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    let scale = norm2(m).max(1e-300);
    norm2(&(m - m.adjoint())) / scale
}

pub fn hstack(blocks: &[&CMatrix]) -> CMatrix {
    let rows = blocks.first().map(|b| b.nrows()).unwrap_or(0);
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut j = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack row mismatch");
        out.view_mut((0, j), (rows, b.ncols())).copy_from(*b);
        j += b.ncols();
    }
    out
}

pub fn vstack(blocks: &[&CMatrix]) -> CMatrix {
    let cols = blocks.first().map(|b| b.ncols()).unwrap_or(0);
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut i = 0;
    for b in blocks {
        assert_eq!(b.ncols(), cols, "vstack column mismatch");
        out.view_mut((i, 0), (b.nrows(), cols)).copy_from(*b);
        i += b.nrows();
    }
    out
}

pub fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

/// Principal square root of a Hermitian positive semidefinite matrix.
pub fn hermitian_sqrt(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eig(m);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&x| c(x.max(0.0).sqrt(), 0.0)),
    ));
    &vecs * d * vecs.adjoint()
}
