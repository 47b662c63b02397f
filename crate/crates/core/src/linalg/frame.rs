use std::sync::Arc;

use super::{singular_values, CMatrix, CVector, Tolerances};
use crate::error::{Error, Result};

/// A Hermitian positive definite inner product ⟨x, y⟩ = y* G x with its Cholesky factor G = L L*.
#[derive(Debug, Clone)]
pub struct Metric {
    g: CMatrix,
    l: CMatrix,
    l_inv: CMatrix,
}

impl PartialEq for Metric {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g
    }
}

impl Metric {
    pub fn new(g: CMatrix) -> Result<Metric> {
        let n = g.nrows();
        if g.ncols() != n {
            return Err(Error::NonHermitianInnerProduct(format!("{}x{} matrix", n, g.ncols())));
        }
        super::check_finite(&g, "inner product")?;
        if n == 0 {
            return Ok(Metric { g: g.clone(), l: g.clone(), l_inv: g });
        }
        let defect = super::hermitian_defect(&g);
        if defect > 1e-10 {
            return Err(Error::NonHermitianInnerProduct(format!("Hermitian defect {defect:.3e}")));
        }
        let g = (&g + g.adjoint()) * super::c(0.5, 0.0);
        let (vals, _) = super::hermitian_eig(&g);
        if vals[0] <= 1e-14 * vals[n - 1].abs() {
            return Err(Error::NonHermitianInnerProduct(format!("smallest eigenvalue {:.3e}", vals[0])));
        }
        let chol = nalgebra::Cholesky::new(g.clone())
            .ok_or_else(|| Error::NonHermitianInnerProduct("not positive definite".into()))?;
        let l = chol.l();
        let s = singular_values(&l);
        if s.last().copied().unwrap_or(0.0) <= 1e-14 * s[0] {
            return Err(Error::NonHermitianInnerProduct("numerically singular".into()));
        }
        let l_inv = l
            .clone()
            .solve_lower_triangular(&CMatrix::identity(n, n))
            .ok_or_else(|| Error::NonHermitianInnerProduct("singular Cholesky factor".into()))?;
        Ok(Metric { g, l, l_inv })
    }

    pub fn identity(n: usize) -> Metric {
        let id = CMatrix::identity(n, n);
        Metric { g: id.clone(), l: id.clone(), l_inv: id }
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn gram_matrix(&self) -> &CMatrix {
        &self.g
    }

    pub fn cholesky(&self) -> &CMatrix {
        &self.l
    }

    pub fn cholesky_inv(&self) -> &CMatrix {
        &self.l_inv
    }

    /// ⟨x, y⟩ = y* G x.
    pub fn ip(&self, x: &CVector, y: &CVector) -> num_complex::Complex64 {
        (y.adjoint() * &self.g * x)[(0, 0)]
    }

    pub fn norm(&self, x: &CVector) -> f64 {
        self.ip(x, x).re.max(0.0).sqrt()
    }

    /// Matrix with entries a_i* G b_j.
    pub fn cross(&self, a: &CMatrix, b: &CMatrix) -> CMatrix {
        a.adjoint() * &self.g * b
    }

    /// Coordinates in which the metric becomes the standard one: x ↦ L* x.
    pub fn whiten(&self, x: &CMatrix) -> CMatrix {
        self.l.adjoint() * x
    }

    pub fn unwhiten(&self, w: &CMatrix) -> CMatrix {
        self.l_inv.adjoint() * w
    }

    /// Matrix of the G-adjoint: A^♯ = G⁻¹ A* G.
    pub fn adjoint_of(&self, a: &CMatrix) -> CMatrix {
        let ginv = self.l_inv.adjoint() * &self.l_inv;
        ginv * a.adjoint() * &self.g
    }

    /// Operator norm induced by the metric.
    pub fn op_norm(&self, a: &CMatrix) -> f64 {
        super::norm2(&(self.l.adjoint() * a * self.l_inv.adjoint()))
    }
}

/// Orthonormal basis of a subspace, orthonormal for the attached metric.
#[derive(Debug, Clone)]
pub struct Frame {
    metric: Arc<Metric>,
    q: CMatrix,
}

impl Frame {
    /// Wraps columns already known to be orthonormal.
    pub fn from_orthonormal(metric: Arc<Metric>, q: CMatrix) -> Frame {
        debug_assert_eq!(q.nrows(), metric.dim());
        Frame { metric, q }
    }

    pub fn empty(metric: Arc<Metric>) -> Frame {
        let n = metric.dim();
        Frame { metric, q: CMatrix::zeros(n, 0) }
    }

    pub fn whole(metric: Arc<Metric>) -> Frame {
        let n = metric.dim();
        let q = metric.unwhiten(&CMatrix::identity(n, n));
        Frame { metric, q }
    }

    /// Span of the columns of `v`, with rank decided by `rank_tol`.
    pub fn span(metric: &Arc<Metric>, v: &CMatrix, rank_tol: f64) -> Result<Frame> {
        if v.nrows() != metric.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {} in a {}-dimensional space",
                v.nrows(),
                metric.dim()
            )));
        }
        super::check_finite(v, "frame vectors")?;
        let w = metric.whiten(v);
        let q = gram_schmidt(&w, rank_tol);
        Ok(Frame { metric: metric.clone(), q: metric.unwhiten(&q) })
    }

    pub fn metric(&self) -> &Arc<Metric> {
        &self.metric
    }

    pub fn ambient_dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn rank(&self) -> usize {
        self.q.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.q.ncols() == 0
    }

    pub fn basis(&self) -> &CMatrix {
        &self.q
    }

    pub fn into_basis(self) -> CMatrix {
        self.q
    }

    /// Orthonormal columns in whitened coordinates.
    pub fn whitened(&self) -> CMatrix {
        self.metric.whiten(&self.q)
    }

    /// Orthogonal projector P = Q Q* G.
    pub fn projector(&self) -> CMatrix {
        &self.q * self.q.adjoint() * self.metric.gram_matrix()
    }

    /// Coefficients of the orthogonal projection of x in this basis.
    pub fn coords(&self, x: &CMatrix) -> CMatrix {
        self.metric.cross(&self.q, x)
    }

    pub fn complement(&self) -> Frame {
        let n = self.ambient_dim();
        let w = self.whitened();
        let proj = CMatrix::identity(n, n) - &w * w.adjoint();
        let k = n - self.rank();
        let q = if k == 0 {
            CMatrix::zeros(n, 0)
        } else {
            let h = proj.symmetric_eigen();
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| h.eigenvalues[b].partial_cmp(&h.eigenvalues[a]).unwrap());
            let cols: Vec<_> = idx[..k].iter().map(|&i| h.eigenvectors.column(i).into_owned()).collect();
            gram_schmidt(&CMatrix::from_columns(&cols), 1e-12)
        };
        Frame { metric: self.metric.clone(), q: self.metric.unwhiten(&q) }
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let k = self.rank();
        let gram = self.metric.cross(&self.q, &self.q);
        (gram - CMatrix::identity(k, k)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn with_metric(&self, metric: Arc<Metric>, rank_tol: f64) -> Result<Frame> {
        Frame::span(&metric, &self.q, rank_tol)
    }

    pub(crate) fn same_space(&self, other: &Frame) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "frames in C^{} and C^{}",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        if !Arc::ptr_eq(&self.metric, &other.metric) && *self.metric != *other.metric {
            return Err(Error::DimensionMismatch("frames carry different inner products".into()));
        }
        Ok(())
    }
}

/// Orthonormalize a list of vectors for the inner product `ip`.
pub fn orthonormalize(vectors: &[CVector], ip: &CMatrix, tol: &Tolerances) -> Result<Frame> {
    let metric = Arc::new(Metric::new(ip.clone())?);
    let n = metric.dim();
    if vectors.iter().any(|v| v.len() != n) {
        return Err(Error::DimensionMismatch("vectors must share the ambient dimension".into()));
    }
    if vectors.is_empty() {
        return Ok(Frame::empty(metric));
    }
    let v = CMatrix::from_columns(vectors);
    Frame::span(&metric, &v, tol.rank_tol)
}

/// Modified Gram–Schmidt with one reorthogonalization pass in the standard inner product.
/// Falls back to the dominant left singular vectors when the greedy pass disagrees with the SVD rank.
fn gram_schmidt(w: &CMatrix, rank_tol: f64) -> CMatrix {
    let n = w.nrows();
    let s = singular_values(w);
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return CMatrix::zeros(n, 0);
    }
    let thresh = rank_tol * smax;
    let r = s.iter().filter(|&&x| x > thresh).count();
    let mut q: Vec<CVector> = Vec::with_capacity(r);
    for j in 0..w.ncols() {
        let mut v = w.column(j).into_owned();
        for _ in 0..2 {
            for b in &q {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let nv = v.norm();
        if nv > thresh && q.len() < n {
            q.push(v / super::c(nv, 0.0));
        }
    }
    if q.len() == r {
        return if r == 0 { CMatrix::zeros(n, 0) } else { CMatrix::from_columns(&q) };
    }
    let svd = w.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    CMatrix::from_columns(&(0..r).map(|i| u.column(i).into_owned()).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::super::{c, real_matrix};
    use super::*;

    fn v(re: &[f64]) -> CVector {
        CVector::from_iterator(re.len(), re.iter().map(|&x| c(x, 0.0)))
    }

    #[test]
    fn collinear_vectors_give_rank_one() {
        let f = orthonormalize(&[v(&[1.0, 0.0]), v(&[2.0, 0.0])], &CMatrix::identity(2, 2), &Tolerances::default()).unwrap();
        assert_eq!(f.rank(), 1);
        assert!((f.basis()[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn empty_input_is_zero_subspace() {
        let f = orthonormalize(&[], &CMatrix::identity(3, 3), &Tolerances::default()).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.ambient_dim(), 3);
    }

    #[test]
    fn near_collinear_rank_matches_svd() {
        let vs = [v(&[1.0, 0.0]), v(&[1.0, 1e-15])];
        // SVD oracle on the 2x2 matrix: smallest singular value is about 7e-16 relative.
        let m = CMatrix::from_columns(&vs);
        let s = singular_values(&m);
        assert!(s[1] / s[0] < 1e-9);
        let f = orthonormalize(&vs, &CMatrix::identity(2, 2), &Tolerances::default()).unwrap();
        assert_eq!(f.rank(), 1);
    }

    #[test]
    fn orthonormal_in_nonstandard_metric() {
        let g = real_matrix(3, 3, &[4.0, 1.0, 0.0, 1.0, 3.0, 0.5, 0.0, 0.5, 2.0]);
        let metric = Arc::new(Metric::new(g).unwrap());
        let a = real_matrix(3, 2, &[1.0, 2.0, 0.0, 1.0, 1.0, -1.0]);
        let f = Frame::span(&metric, &a, 1e-9).unwrap();
        assert_eq!(f.rank(), 2);
        assert!(f.orthonormality_defect() < 1e-12);
        let comp = f.complement();
        assert_eq!(comp.rank(), 1);
        assert!(metric.cross(comp.basis(), f.basis()).norm() < 1e-12);
        let p = f.projector();
        assert!((&p * &p - &p).norm() < 1e-12);
    }

    #[test]
    fn rejects_indefinite_metric() {
        let g = real_matrix(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(Metric::new(g), Err(Error::NonHermitianInnerProduct(_))));
        let g = real_matrix(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(Metric::new(g), Err(Error::NonHermitianInnerProduct(_))));
    }
}
