//! Symplectic forms on C^n, their induced operator J, splittings and annihilators.
//!
//! The form is ω(x, y) = y* Ω x and the inner product is ⟨x, y⟩ = y* G x, so
//! ω(x, y) = ⟨Jx, y⟩ with J = G⁻¹Ω.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gap;
use crate::linalg::{self, c, hermitian_eig, CMatrix, Frame, Metric, Tolerances};

#[derive(Debug, Clone)]
pub struct SymplecticSpace {
    metric: Arc<Metric>,
    omega: CMatrix,
    j: CMatrix,
    cond_j: f64,
}

/// Validate the axioms and build a space from an inner product and a form matrix.
pub fn make_space(ip: &CMatrix, omega: &CMatrix, tol: &Tolerances) -> Result<SymplecticSpace> {
    let metric = Metric::new(ip.clone()).map_err(|e| match e {
        Error::NonHermitianInnerProduct(m) => Error::BadInnerProduct(m),
        other => other,
    })?;
    SymplecticSpace::new(Arc::new(metric), omega.clone(), tol)
}

impl SymplecticSpace {
    pub fn new(metric: Arc<Metric>, omega: CMatrix, tol: &Tolerances) -> Result<SymplecticSpace> {
        tol.validate()?;
        let n = metric.dim();
        if omega.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "form is {}x{}, inner product is {n}x{n}",
                omega.nrows(),
                omega.ncols()
            )));
        }
        linalg::check_finite(&omega, "form")?;
        let scale = linalg::norm2(&omega);
        if n > 0 && scale == 0.0 {
            return Err(Error::Degenerate("form vanishes identically".into()));
        }
        if n > 0 {
            let skew = linalg::norm2(&(&omega + omega.adjoint())) / scale;
            if skew > 1e-10 {
                return Err(Error::NotSkew(skew));
            }
        }
        let omega = (&omega - omega.adjoint()) * c(0.5, 0.0);
        let r = linalg::rank(&omega, tol.rank_tol);
        if r < n {
            return Err(Error::Degenerate(format!("form has rank {r} < {n}")));
        }
        let l_inv = metric.cholesky_inv();
        let j_hat = l_inv * &omega * l_inv.adjoint();
        let cond_j = linalg::condition_number(&j_hat);
        let j = l_inv.adjoint() * &j_hat * metric.cholesky().adjoint();
        Ok(SymplecticSpace { metric, omega, j, cond_j })
    }

    /// Space from an inner product and the operator J, with Ω = G J.
    pub fn from_j(ip: &CMatrix, j: &CMatrix, tol: &Tolerances) -> Result<SymplecticSpace> {
        if ip.shape() != j.shape() {
            return Err(Error::DimensionMismatch("J and inner product differ in size".into()));
        }
        make_space(ip, &(ip * j), tol)
    }

    /// C^n with G = I and J = diag(i,…,i,−i,…,−i).
    pub fn canonical(p: usize, q: usize) -> SymplecticSpace {
        let d: Vec<Complex64> = (0..p + q).map(|k| if k < p { c(0.0, 1.0) } else { c(0.0, -1.0) }).collect();
        let omega = linalg::diag(&d);
        SymplecticSpace::new(Arc::new(Metric::identity(p + q)), omega, &Tolerances::default())
            .expect("canonical space")
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn metric(&self) -> &Arc<Metric> {
        &self.metric
    }

    pub fn ip(&self) -> &CMatrix {
        self.metric.gram_matrix()
    }

    pub fn omega(&self) -> &CMatrix {
        &self.omega
    }

    pub fn j(&self) -> &CMatrix {
        &self.j
    }

    /// Condition number of J in the metric; large values model weak structures.
    pub fn cond_j(&self) -> f64 {
        self.cond_j
    }

    /// ω(x, y) = y* Ω x.
    pub fn form(&self, x: &CMatrix, y: &CMatrix) -> Complex64 {
        (y.adjoint() * &self.omega * x)[(0, 0)]
    }

    /// Matrix with (i, j) entry ω(a_j, b_i).
    pub fn form_matrix(&self, a: &CMatrix, b: &CMatrix) -> CMatrix {
        b.adjoint() * &self.omega * a
    }

    /// The same form with the opposite sign.
    pub fn negated(&self) -> SymplecticSpace {
        SymplecticSpace { metric: self.metric.clone(), omega: -&self.omega, j: -&self.j, cond_j: self.cond_j }
    }

    /// Same form and metric with every nonzero singular structure rescaled so that J'² = −I.
    pub fn normalize_strong(&self, tol: &Tolerances) -> Result<SymplecticSpace> {
        let l = self.metric.cholesky();
        let l_inv = self.metric.cholesky_inv();
        let j_hat = l_inv * &self.omega * l_inv.adjoint();
        if linalg::rank(&j_hat, tol.rank_tol) < self.dim() {
            return Err(Error::Degenerate("J is not invertible".into()));
        }
        let abs = linalg::hermitian_sqrt(&(j_hat.adjoint() * &j_hat));
        let g = l * abs * l.adjoint();
        let g = (&g + g.adjoint()) * c(0.5, 0.0);
        let metric = Metric::new(g).map_err(|e| Error::BadInnerProduct(e.to_string()))?;
        SymplecticSpace::new(Arc::new(metric), self.omega.clone(), tol)
    }

    /// Defect of ⟨Jx, y⟩ = −⟨x, Jy⟩ over the standard basis.
    pub fn skew_adjoint_defect(&self) -> f64 {
        let g = self.ip();
        let lhs = g * &self.j;
        let rhs = -(self.j.adjoint() * g);
        (lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn compute_splitting(&self, tol: &Tolerances) -> Result<Splitting> {
        compute_splitting(self, tol)
    }
}

/// −iω on X⁺ or iω on X⁻, the inner products h^± induced by the splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HForm {
    Plus,
    Minus,
}

impl HForm {
    /// Gram matrix with (i, j) entry h(b_j, b_i).
    pub fn gram(self, sp: &SymplecticSpace, b: &CMatrix) -> CMatrix {
        let f = sp.form_matrix(b, b);
        match self {
            HForm::Plus => f * c(0.0, -1.0),
            HForm::Minus => f * c(0.0, 1.0),
        }
    }
}

/// A symplectic splitting X = X⁺ ⊕ X⁻.
///
/// Besides metric-orthonormal frames, the splitting keeps h-orthonormal bases
/// `b_plus`, `b_minus`; all generator matrices are written in those bases.
#[derive(Debug, Clone)]
pub struct Splitting {
    space: SymplecticSpace,
    plus: Frame,
    minus: Frame,
    b_plus: CMatrix,
    b_minus: CMatrix,
    coords: CMatrix,
    proj_plus: CMatrix,
}

pub fn compute_splitting(sp: &SymplecticSpace, tol: &Tolerances) -> Result<Splitting> {
    let n = sp.dim();
    let l_inv = sp.metric.cholesky_inv();
    let h = l_inv * (&sp.omega * c(0.0, -1.0)) * l_inv.adjoint();
    let (vals, vecs) = hermitian_eig(&h);
    let smax = vals.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if let Some(z) = vals.iter().find(|x| x.abs() <= tol.rank_tol * smax) {
        return Err(Error::Degenerate(format!("-iJ has eigenvalue {z:.3e}")));
    }
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let back = l_inv.adjoint();
    for k in (0..n).rev() {
        let v = &back * vecs.column(k);
        let mu = vals[k];
        let b = v.clone() / c(mu.abs().sqrt(), 0.0);
        if mu > 0.0 {
            plus.push(b);
        } else {
            minus.push(b);
        }
    }
    minus.reverse();
    let b_plus = cols_or_empty(n, &plus);
    let b_minus = cols_or_empty(n, &minus);
    Splitting::assemble(sp.clone(), b_plus, b_minus, tol)
}

fn cols_or_empty(n: usize, cols: &[nalgebra::DVector<Complex64>]) -> CMatrix {
    if cols.is_empty() {
        CMatrix::zeros(n, 0)
    } else {
        CMatrix::from_columns(cols)
    }
}

impl Splitting {
    /// A user-supplied splitting, validated and h-orthonormalized.
    pub fn from_frames(sp: &SymplecticSpace, plus: &CMatrix, minus: &CMatrix, tol: &Tolerances) -> Result<Splitting> {
        let n = sp.dim();
        if plus.nrows() != n || minus.nrows() != n {
            return Err(Error::DimensionMismatch("splitting frames have the wrong length".into()));
        }
        let pf = Frame::span(sp.metric(), plus, tol.rank_tol)?;
        let mf = Frame::span(sp.metric(), minus, tol.rank_tol)?;
        if pf.rank() + mf.rank() != n {
            return Err(Error::BadSplitting(format!("dim X+ + dim X- = {} + {} != {n}", pf.rank(), mf.rank())));
        }
        let both = linalg::hstack(&[pf.basis(), mf.basis()]);
        if linalg::rank(&sp.metric.whiten(&both), tol.rank_tol) < n {
            return Err(Error::BadSplitting("X+ and X- intersect".into()));
        }
        let cross = sp.form_matrix(pf.basis(), mf.basis());
        let cross_defect = cross.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if cross_defect > 1e-10 * linalg::norm2(sp.omega()).max(1.0) {
            return Err(Error::BadSplitting(format!("omega(X+, X-) = {cross_defect:.3e}")));
        }
        let b_plus = h_orthonormalize(sp, pf.basis(), HForm::Plus, "X+")?;
        let b_minus = h_orthonormalize(sp, mf.basis(), HForm::Minus, "X-")?;
        Splitting::assemble(sp.clone(), b_plus, b_minus, tol)
    }

    fn assemble(space: SymplecticSpace, b_plus: CMatrix, b_minus: CMatrix, tol: &Tolerances) -> Result<Splitting> {
        let n = space.dim();
        let t = linalg::hstack(&[&b_plus, &b_minus]);
        let coords = linalg::inverse(&t).ok_or_else(|| Error::BadSplitting("basis is singular".into()))?;
        let p = b_plus.ncols();
        let mut sel = CMatrix::zeros(n, n);
        for k in 0..p {
            sel[(k, k)] = c(1.0, 0.0);
        }
        let proj_plus = &t * sel * &coords;
        let plus = Frame::span(space.metric(), &b_plus, tol.rank_tol)?;
        let minus = Frame::span(space.metric(), &b_minus, tol.rank_tol)?;
        Ok(Splitting { space, plus, minus, b_plus, b_minus, coords, proj_plus })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn plus(&self) -> &Frame {
        &self.plus
    }

    pub fn minus(&self) -> &Frame {
        &self.minus
    }

    pub fn dim_plus(&self) -> usize {
        self.b_plus.ncols()
    }

    pub fn dim_minus(&self) -> usize {
        self.b_minus.ncols()
    }

    /// h⁺-orthonormal basis of X⁺.
    pub fn h_basis_plus(&self) -> &CMatrix {
        &self.b_plus
    }

    /// h⁻-orthonormal basis of X⁻.
    pub fn h_basis_minus(&self) -> &CMatrix {
        &self.b_minus
    }

    /// Projection onto X⁺ along X⁻.
    pub fn proj_plus(&self) -> &CMatrix {
        &self.proj_plus
    }

    /// Coefficients (a⁺, a⁻) of vectors in the h-orthonormal bases.
    pub fn split_coords(&self, x: &CMatrix) -> (CMatrix, CMatrix) {
        let all = &self.coords * x;
        let p = self.dim_plus();
        let q = self.dim_minus();
        (all.rows(0, p).into_owned(), all.rows(p, q).into_owned())
    }

    /// (X, −ω) with the roles of X⁺ and X⁻ exchanged.
    pub fn negated(&self) -> Splitting {
        let n = self.space.dim();
        let t = linalg::hstack(&[&self.b_minus, &self.b_plus]);
        let coords = linalg::inverse(&t).expect("basis stays invertible");
        let q = self.dim_minus();
        let mut sel = CMatrix::zeros(n, n);
        for k in 0..q {
            sel[(k, k)] = c(1.0, 0.0);
        }
        Splitting {
            space: self.space.negated(),
            plus: self.minus.clone(),
            minus: self.plus.clone(),
            b_plus: self.b_minus.clone(),
            b_minus: self.b_plus.clone(),
            proj_plus: &t * sel * &coords,
            coords,
        }
    }

    /// Largest deviation from the splitting axioms: ω(X⁺, X⁻) and h-orthonormality.
    pub fn defect(&self) -> f64 {
        let sp = &self.space;
        let cross = sp.form_matrix(&self.b_plus, &self.b_minus);
        let p = self.dim_plus();
        let q = self.dim_minus();
        let hp = HForm::Plus.gram(sp, &self.b_plus) - CMatrix::identity(p, p);
        let hm = HForm::Minus.gram(sp, &self.b_minus) - CMatrix::identity(q, q);
        [cross, hp, hm].iter().flat_map(|m| m.iter().map(|z| z.norm())).fold(0.0, f64::max)
    }

    /// Lagrangian subspaces exist only when dim X⁺ = dim X⁻.
    pub fn lagrangian_obstruction(&self) -> Option<(usize, usize)> {
        if self.dim_plus() == self.dim_minus() {
            None
        } else {
            Some((self.dim_plus(), self.dim_minus()))
        }
    }
}

fn h_orthonormalize(sp: &SymplecticSpace, b: &CMatrix, h: HForm, name: &str) -> Result<CMatrix> {
    if b.ncols() == 0 {
        return Ok(b.clone());
    }
    let k = h.gram(sp, b);
    let k = (&k + k.adjoint()) * c(0.5, 0.0);
    let (vals, _) = hermitian_eig(&k);
    if vals[0] <= 1e-12 * vals[vals.len() - 1].abs().max(1e-300) {
        let sign = if h == HForm::Plus { "-i omega" } else { "i omega" };
        return Err(Error::BadSplitting(format!("{sign} is not positive definite on {name}")));
    }
    let chol = nalgebra::Cholesky::new(k).ok_or_else(|| Error::BadSplitting(format!("h-Gram on {name} not definite")))?;
    let cl = chol.l();
    let inv = cl
        .solve_lower_triangular(&CMatrix::identity(b.ncols(), b.ncols()))
        .ok_or_else(|| Error::BadSplitting(format!("h-Gram on {name} singular")))?;
    Ok(b * inv.adjoint())
}

/// λ^ω = {y : ω(x, y) = 0 for all x ∈ λ}.
pub fn annihilator(sp: &SymplecticSpace, lam: &Frame, tol: &Tolerances) -> Result<Frame> {
    if lam.ambient_dim() != sp.dim() {
        return Err(Error::DimensionMismatch("subspace and space differ in dimension".into()));
    }
    if lam.is_zero() {
        return Ok(Frame::whole(sp.metric().clone()));
    }
    // ω(x_i, y) = y* Ω x_i = 0 for all i  ⇔  (Ω Q)* y = 0.
    let a = (&sp.omega * lam.basis()).adjoint();
    let k = linalg::null_space(&a, tol.rank_tol);
    Frame::span(sp.metric(), &k, tol.rank_tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Lagrangian,
    Isotropic,
    Coisotropic,
    Symplectic,
    None,
}

/// Classify λ by comparing it with λ^ω; the first matching class in the order
/// lagrangian, isotropic, coisotropic, symplectic wins.
pub fn classify(sp: &SymplecticSpace, lam: &Frame, tol: &Tolerances) -> Result<Classification> {
    let ann = annihilator(sp, lam, tol)?;
    let t = subspace_tol(tol);
    let in_ann = gap::delta(lam, &ann)? < t;
    let ann_in = gap::delta(&ann, lam)? < t;
    Ok(if in_ann && ann_in {
        Classification::Lagrangian
    } else if in_ann {
        Classification::Isotropic
    } else if ann_in {
        Classification::Coisotropic
    } else if gap::intersect_subspaces(lam, &ann, tol)?.is_zero() {
        Classification::Symplectic
    } else {
        Classification::None
    })
}

/// Threshold on the gap below which subspaces are considered equal.
pub(crate) fn subspace_tol(tol: &Tolerances) -> f64 {
    (tol.rank_tol * 1e3).max(1e-8)
}

/// Largest |ω(x_i, x_j)| over an orthonormal frame.
pub fn isotropy_defect(sp: &SymplecticSpace, lam: &Frame) -> f64 {
    sp.form_matrix(lam.basis(), lam.basis()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, real_matrix};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn line(sp: &SymplecticSpace, v: &[f64]) -> Frame {
        Frame::span(sp.metric(), &real_matrix(v.len(), 1, v), 1e-9).unwrap()
    }

    #[test]
    fn canonical_space_and_splitting() {
        let sp = SymplecticSpace::from_j(&CMatrix::identity(2, 2), &diag(&[c(0.0, 1.0), c(0.0, -1.0)]), &tol()).unwrap();
        assert!(sp.skew_adjoint_defect() < 1e-12);
        let s = sp.compute_splitting(&tol()).unwrap();
        assert_eq!((s.dim_plus(), s.dim_minus()), (1, 1));
        assert!(s.plus().basis()[(1, 0)].norm() < 1e-14);
        assert!(s.minus().basis()[(0, 0)].norm() < 1e-14);
        assert!(s.defect() < 1e-12);
        assert!((s.proj_plus() - diag(&[c(1.0, 0.0), c(0.0, 0.0)])).norm() < 1e-12);
    }

    #[test]
    fn ill_scaled_j_rescales_h_minus() {
        let sp = SymplecticSpace::from_j(&CMatrix::identity(2, 2), &diag(&[c(0.0, 1.0), c(0.0, -0.25)]), &tol()).unwrap();
        let s = sp.compute_splitting(&tol()).unwrap();
        assert!(s.minus().basis()[(0, 0)].norm() < 1e-14);
        // h⁻(e₂, e₂) = 1/4, so the h⁻-unit vector is 2 e₂.
        assert!((s.h_basis_minus()[(1, 0)].norm() - 2.0).abs() < 1e-12);
        assert!((sp.cond_j() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn same_sign_j_has_empty_minus() {
        let sp = SymplecticSpace::from_j(&CMatrix::identity(2, 2), &diag(&[c(0.0, 1.0), c(0.0, 1.0)]), &tol()).unwrap();
        let s = sp.compute_splitting(&tol()).unwrap();
        assert!(s.minus().is_zero());
        assert_eq!(s.lagrangian_obstruction(), Some((2, 0)));
    }

    #[test]
    fn zero_form_is_degenerate() {
        let r = SymplecticSpace::from_j(&CMatrix::identity(2, 2), &CMatrix::zeros(2, 2), &tol());
        assert!(matches!(r, Err(Error::Degenerate(_))));
        let r = make_space(&CMatrix::identity(2, 2), &diag(&[c(1.0, 0.0), c(0.0, 1.0)]), &tol());
        assert!(matches!(r, Err(Error::NotSkew(_))));
        let r = make_space(&diag(&[c(1.0, 0.0), c(-1.0, 0.0)]), &diag(&[c(0.0, 1.0), c(0.0, -1.0)]), &tol());
        assert!(matches!(r, Err(Error::BadInnerProduct(_))));
    }

    #[test]
    fn annihilators_in_c2() {
        let sp = SymplecticSpace::canonical(1, 1);
        let z = Frame::empty(sp.metric().clone());
        assert_eq!(annihilator(&sp, &z, &tol()).unwrap().rank(), 2);
        let lam = line(&sp, &[1.0, 1.0]);
        let ann = annihilator(&sp, &lam, &tol()).unwrap();
        assert!(gap::gap(&lam, &ann).unwrap().gap < 1e-12);
        let all = Frame::whole(sp.metric().clone());
        assert!(annihilator(&sp, &all, &tol()).unwrap().is_zero());
    }

    #[test]
    fn classification_examples() {
        let sp = SymplecticSpace::canonical(1, 1);
        assert_eq!(classify(&sp, &line(&sp, &[1.0, 1.0]), &tol()).unwrap(), Classification::Lagrangian);
        assert_eq!(classify(&sp, &line(&sp, &[1.0, 0.0]), &tol()).unwrap(), Classification::Symplectic);
        let z = Frame::empty(sp.metric().clone());
        assert_eq!(classify(&sp, &z, &tol()).unwrap(), Classification::Isotropic);
        let all = Frame::whole(sp.metric().clone());
        assert_eq!(classify(&sp, &all, &tol()).unwrap(), Classification::Coisotropic);
        let sp4 = SymplecticSpace::canonical(2, 2);
        let f = Frame::span(sp4.metric(), &real_matrix(4, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0]), 1e-9).unwrap();
        assert_eq!(classify(&sp4, &f, &tol()).unwrap(), Classification::None);
    }

    #[test]
    fn normalize_strong_examples() {
        let sp = SymplecticSpace::canonical(1, 1);
        let n = sp.normalize_strong(&tol()).unwrap();
        assert!((n.ip() - sp.ip()).norm() < 1e-12);
        let sp = SymplecticSpace::from_j(&CMatrix::identity(2, 2), &diag(&[c(0.0, 2.0), c(0.0, -0.5)]), &tol()).unwrap();
        let n = sp.normalize_strong(&tol()).unwrap();
        assert!((n.j() - diag(&[c(0.0, 1.0), c(0.0, -1.0)])).norm() < 1e-9);
        let jj = n.j() * n.j() + CMatrix::identity(2, 2);
        assert!(jj.norm() < 1e-9);
    }

    #[test]
    fn user_splitting_validation() {
        let sp = SymplecticSpace::canonical(1, 1);
        let e1 = real_matrix(2, 1, &[1.0, 0.0]);
        let e2 = real_matrix(2, 1, &[0.0, 1.0]);
        assert!(Splitting::from_frames(&sp, &e1, &e2, &tol()).is_ok());
        assert!(matches!(Splitting::from_frames(&sp, &e2, &e1, &tol()), Err(Error::BadSplitting(_))));
        let tilted = real_matrix(2, 1, &[1.0, 0.5]);
        assert!(matches!(Splitting::from_frames(&sp, &tilted, &e2, &tol()), Err(Error::BadSplitting(_))));
    }
}
