//! Generating operators of isotropic subspaces, Fredholm pair indices, and the
//! product space X ⊞ X.
//!
//! In h-orthonormal splitting coordinates a vector is a pair (a⁺, a⁻) and
//! ω(x, y) = i(b⁺* a⁺ − b⁻* a⁻). A subspace with coordinate blocks (A⁺, A⁻)
//! is isotropic iff A⁺*A⁺ = A⁻*A⁻, and is then the graph of an h-unitary map.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gap;
use crate::linalg::{self, c, CMatrix, Frame, Metric, Tolerances};
use crate::symplectic::{annihilator, classify, Classification, Splitting, SymplecticSpace};

/// The operator U: dom(U) ⊆ X⁺ → X⁻ whose graph is a given isotropic subspace.
#[derive(Debug, Clone)]
pub struct LagrangianGenerator {
    splitting: Arc<Splitting>,
    /// Orthonormal basis (p×k) of dom(U) in X⁺ coordinates.
    dom: CMatrix,
    /// U restricted to the domain basis: a q×k matrix with orthonormal columns.
    u: CMatrix,
}

impl LagrangianGenerator {
    pub fn splitting(&self) -> &Arc<Splitting> {
        &self.splitting
    }

    pub fn domain_coords(&self) -> &CMatrix {
        &self.dom
    }

    pub fn dom_dim(&self) -> usize {
        self.dom.ncols()
    }

    /// U on the domain basis.
    pub fn matrix(&self) -> &CMatrix {
        &self.u
    }

    /// U as a q×p matrix, extended by zero off its domain.
    pub fn full_matrix(&self) -> CMatrix {
        &self.u * self.dom.adjoint()
    }

    /// dom(U) as a subspace of the ambient space.
    pub fn dom_frame(&self, tol: &Tolerances) -> Result<Frame> {
        let s = &self.splitting;
        Frame::span(s.space().metric(), &(s.h_basis_plus() * &self.dom), tol.rank_tol)
    }

    /// Whether dom(U) = X⁺, so that U is a bounded operator on all of X⁺.
    pub fn full_domain(&self) -> bool {
        self.dom.ncols() == self.splitting.dim_plus()
    }

    /// Unnormalized ambient vectors spanning Γ(U).
    pub fn graph_vectors(&self) -> CMatrix {
        let s = &self.splitting;
        s.h_basis_plus() * &self.dom + s.h_basis_minus() * &self.u
    }

    pub fn graph(&self, tol: &Tolerances) -> Result<Frame> {
        Frame::span(self.splitting.space().metric(), &self.graph_vectors(), tol.rank_tol)
    }

    /// max |h⁺(x, y) − h⁻(Ux, Uy)| over the domain basis.
    pub fn unitarity_defect(&self) -> f64 {
        let k = self.dom.ncols();
        (self.u.adjoint() * &self.u - CMatrix::identity(k, k)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Build the generator of the graph of an h-unitary q×p matrix on all of X⁺.
    pub fn from_matrix(splitting: Arc<Splitting>, u: CMatrix) -> Result<LagrangianGenerator> {
        let p = splitting.dim_plus();
        if u.shape() != (splitting.dim_minus(), p) {
            return Err(Error::DimensionMismatch(format!(
                "generator is {}x{}, expected {}x{p}",
                u.nrows(),
                u.ncols(),
                splitting.dim_minus()
            )));
        }
        let g = LagrangianGenerator { splitting, dom: CMatrix::identity(p, p), u };
        let d = g.unitarity_defect();
        if d > 1e-8 {
            return Err(Error::NotIsotropic(d));
        }
        Ok(g)
    }
}

pub fn generator_of(splitting: &Arc<Splitting>, lam: &Frame, tol: &Tolerances) -> Result<LagrangianGenerator> {
    let sp = splitting.space();
    if lam.ambient_dim() != sp.dim() {
        return Err(Error::DimensionMismatch("subspace and splitting differ in dimension".into()));
    }
    let k = lam.rank();
    let p = splitting.dim_plus();
    if k == 0 {
        return Ok(LagrangianGenerator {
            splitting: splitting.clone(),
            dom: CMatrix::zeros(p, 0),
            u: CMatrix::zeros(splitting.dim_minus(), 0),
        });
    }
    let (ap, am) = splitting.split_coords(lam.basis());
    let scale = linalg::norm2(&ap).max(linalg::norm2(&am)).max(1e-300);
    let r_ap = linalg::rank_abs(&ap, tol.rank_tol, tol.rank_tol * scale);
    if r_ap < k {
        return Err(Error::SplitCollision(k - r_ap));
    }
    let defect = linalg::norm2(&(ap.adjoint() * &ap - am.adjoint() * &am)) / (scale * scale);
    if defect > isotropy_tol(tol) {
        return Err(Error::NotIsotropic(defect));
    }
    let d = linalg::range_space(&ap, tol.rank_tol);
    debug_assert_eq!(d.ncols(), k);
    let r = d.adjoint() * &ap;
    let r_inv = linalg::inverse(&r).ok_or(Error::SplitCollision(1))?;
    let u = am * r_inv;
    Ok(LagrangianGenerator { splitting: splitting.clone(), dom: d, u })
}

pub(crate) fn isotropy_tol(tol: &Tolerances) -> f64 {
    (tol.rank_tol * 1e2).max(1e-8)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairIndexReport {
    pub dim_intersection: usize,
    pub codim_sum: usize,
    pub index: i64,
}

/// index(λ, µ) = dim λ∩µ − dim X/(λ+µ), from the rank of the stacked frames.
pub fn pair_index(lam: &Frame, mu: &Frame, tol: &Tolerances) -> Result<PairIndexReport> {
    if lam.ambient_dim() != mu.ambient_dim() {
        return Err(Error::DimensionMismatch("frames differ in ambient dimension".into()));
    }
    let n = lam.ambient_dim();
    let stacked = linalg::hstack(&[&lam.whitened(), &mu.metric().whiten(mu.basis())]);
    let r = if stacked.ncols() == 0 { 0 } else { linalg::rank(&stacked, tol.rank_tol) };
    let dim_intersection = lam.rank() + mu.rank() - r;
    let codim_sum = n - r;
    Ok(PairIndexReport { dim_intersection, codim_sum, index: dim_intersection as i64 - codim_sum as i64 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoToLagReport {
    pub index: i64,
    pub index_zero: bool,
    pub annihilator_of_sum_is_intersection: bool,
    pub double_annihilator_of_sum: bool,
    pub lam_lagrangian: bool,
    pub mu_lagrangian: bool,
}

impl IsoToLagReport {
    pub fn all_hold(&self) -> bool {
        self.index_zero
            && self.annihilator_of_sum_is_intersection
            && self.double_annihilator_of_sum
            && self.lam_lagrangian
            && self.mu_lagrangian
    }
}

/// For isotropic λ, µ with index ≥ 0, verify that both are Lagrangian with
/// index 0 and that (λ+µ)^ω = λ∩µ and (λ+µ)^ωω = λ+µ.
pub fn check_iso_to_lag(sp: &SymplecticSpace, lam: &Frame, mu: &Frame, tol: &Tolerances) -> Result<IsoToLagReport> {
    for (name, f) in [("lambda", lam), ("mu", mu)] {
        let k = classify(sp, f, tol)?;
        if !matches!(k, Classification::Isotropic | Classification::Lagrangian) {
            return Err(Error::HypothesisFailed(format!("{name} is {k:?}, not isotropic")));
        }
    }
    let idx = pair_index(lam, mu, tol)?;
    if idx.index < 0 {
        return Err(Error::HypothesisFailed(format!("index(lambda, mu) = {} < 0", idx.index)));
    }
    let sum = gap::sum_subspaces(lam, mu, tol)?;
    let cap = gap::intersect_subspaces(lam, mu, tol)?;
    let ann = annihilator(sp, &sum, tol)?;
    let ann2 = annihilator(sp, &ann, tol)?;
    Ok(IsoToLagReport {
        index: idx.index,
        index_zero: idx.index == 0,
        annihilator_of_sum_is_intersection: gap::same_subspace(&ann, &cap, tol)?,
        double_annihilator_of_sum: gap::same_subspace(&ann2, &sum, tol)?,
        lam_lagrangian: classify(sp, lam, tol)? == Classification::Lagrangian,
        mu_lagrangian: classify(sp, mu, tol)? == Classification::Lagrangian,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFredholm {
    pub index: i64,
    pub kernel_dim: usize,
}

/// Index and kernel of UV⁻¹ − I on X⁻ with domain V(dom U).
pub fn fredholm_via_generators(
    splitting: &Arc<Splitting>,
    lam: &Frame,
    mu: &Frame,
    tol: &Tolerances,
) -> Result<GeneratorFredholm> {
    let ug = generator_of(splitting, lam, tol)?;
    let vg = generator_of(splitting, mu, tol)?;
    let v = v_inverse(&vg)?.1;
    let t = ug.matrix() - &v * ug.domain_coords();
    let k = ug.dom_dim();
    let q = splitting.dim_minus();
    let r = if k == 0 || q == 0 { 0 } else { linalg::rank_abs(&t, tol.rank_tol, tol.rank_tol) };
    Ok(GeneratorFredholm { index: k as i64 - q as i64, kernel_dim: k - r })
}

/// Returns (V⁻¹, V) for a generator with full domain, or VNotInvertible.
pub fn v_inverse(vg: &LagrangianGenerator) -> Result<(CMatrix, CMatrix)> {
    let v = vg.full_matrix();
    let s = linalg::singular_values(&v);
    let smin = if v.nrows() != v.ncols() || !vg.full_domain() {
        0.0
    } else {
        s.last().copied().unwrap_or(1.0)
    };
    if smin <= 1e-8 {
        return Err(Error::VNotInvertible(smin));
    }
    let inv = linalg::inverse(&v).ok_or(Error::VNotInvertible(smin))?;
    Ok((inv, v))
}

/// Block operator [[0, U], [V⁻¹, 0]] on X⁻ ⊕ X⁺ in h-orthonormal coordinates.
pub fn block_operator(ug: &LagrangianGenerator, vg: &LagrangianGenerator) -> Result<CMatrix> {
    let (vinv, _) = v_inverse(vg)?;
    if !ug.full_domain() {
        return Err(Error::HypothesisFailed("U is not defined on all of X+".into()));
    }
    let u = ug.full_matrix();
    let q = u.nrows();
    let p = u.ncols();
    let mut b = CMatrix::zeros(p + q, p + q);
    b.view_mut((0, q), (q, p)).copy_from(&u);
    b.view_mut((q, 0), (p, q)).copy_from(&vinv);
    Ok(b)
}

/// The product (X, ω) ⊕ (X, −ω) with its diagonal.
#[derive(Debug, Clone)]
pub struct BoxplusSpace {
    pub space: SymplecticSpace,
    pub diagonal: Frame,
    base_dim: usize,
}

pub fn boxplus(sp: &SymplecticSpace, tol: &Tolerances) -> Result<BoxplusSpace> {
    let n = sp.dim();
    let g = linalg::block_diag(sp.ip(), sp.ip());
    let omega = linalg::block_diag(sp.omega(), &(-sp.omega()));
    let metric = Arc::new(Metric::new(g)?);
    let space = SymplecticSpace::new(metric.clone(), omega, tol)?;
    let id = CMatrix::identity(n, n);
    let diagonal = Frame::span(&metric, &linalg::vstack(&[&id, &id]), tol.rank_tol)?;
    Ok(BoxplusSpace { space, diagonal, base_dim: n })
}

impl BoxplusSpace {
    /// λ ⊞ µ = {(x, y) : x ∈ λ, y ∈ µ}.
    pub fn pair(&self, lam: &Frame, mu: &Frame, tol: &Tolerances) -> Result<Frame> {
        if lam.ambient_dim() != self.base_dim || mu.ambient_dim() != self.base_dim {
            return Err(Error::DimensionMismatch("frames do not live in the base space".into()));
        }
        Frame::span(self.space.metric(), &linalg::block_diag(lam.basis(), mu.basis()), tol.rank_tol)
    }

    /// The splitting P ⊞ (I − P) with plus part X⁺ ⊕ X⁻.
    pub fn splitting(&self, s: &Splitting, tol: &Tolerances) -> Result<Splitting> {
        let plus = linalg::block_diag(s.h_basis_plus(), s.h_basis_minus());
        let minus = linalg::block_diag(s.h_basis_minus(), s.h_basis_plus());
        Splitting::from_frames(&self.space, &plus, &minus, tol)
    }
}

pub fn boxplus_pair(bx: &BoxplusSpace, lam: &Frame, mu: &Frame, tol: &Tolerances) -> Result<(Frame, Frame)> {
    Ok((bx.pair(lam, mu, tol)?, bx.diagonal.clone()))
}

/// Ambient matrix of 𝔅 = U P + V⁻¹ (I − P).
pub fn ambient_block_operator(ug: &LagrangianGenerator, vg: &LagrangianGenerator) -> Result<CMatrix> {
    let s = ug.splitting();
    let (vinv, _) = v_inverse(vg)?;
    if !ug.full_domain() {
        return Err(Error::HypothesisFailed("U is not defined on all of X+".into()));
    }
    let p = s.dim_plus();
    let q = s.dim_minus();
    let mut m = CMatrix::zeros(p + q, p + q);
    m.view_mut((p, 0), (q, p)).copy_from(&ug.full_matrix());
    m.view_mut((0, p), (p, q)).copy_from(&vinv);
    let t = linalg::hstack(&[s.h_basis_plus(), s.h_basis_minus()]);
    let (tp, tm) = s.split_coords(&CMatrix::identity(p + q, p + q));
    let tinv = linalg::vstack(&[&tp, &tm]);
    Ok(t * m * tinv)
}

/// Gram matrix of h⁺ ⊕ h⁻ in ambient coordinates.
pub fn h_metric(s: &Splitting) -> CMatrix {
    let n = s.space().dim();
    let (tp, tm) = s.split_coords(&CMatrix::identity(n, n));
    let tinv = linalg::vstack(&[&tp, &tm]);
    let h = tinv.adjoint() * &tinv;
    (&h + h.adjoint()) * c(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_matrix;

    fn setup() -> (SymplecticSpace, Arc<Splitting>, Tolerances) {
        let t = Tolerances::default();
        let sp = SymplecticSpace::canonical(1, 1);
        let s = Arc::new(sp.compute_splitting(&t).unwrap());
        (sp, s, t)
    }

    fn line(sp: &SymplecticSpace, v: &[f64]) -> Frame {
        Frame::span(sp.metric(), &real_matrix(v.len(), 1, v), 1e-9).unwrap()
    }

    /// U read off in the canonical basis, correcting for the phases of the computed basis vectors.
    fn u_in_standard(g: &LagrangianGenerator) -> num_complex::Complex64 {
        let s = g.splitting();
        let bp = s.h_basis_plus()[(0, 0)];
        let bm = s.h_basis_minus()[(1, 0)];
        g.full_matrix()[(0, 0)] * bm / bp
    }

    #[test]
    fn generator_examples() {
        let (sp, s, t) = setup();
        let g = generator_of(&s, &line(&sp, &[1.0, 1.0]), &t).unwrap();
        assert!((u_in_standard(&g) - c(1.0, 0.0)).norm() < 1e-12);
        assert!(g.unitarity_defect() < 1e-12);
        assert!(matches!(generator_of(&s, s.plus(), &t), Err(Error::NotIsotropic(_))));
        assert!(matches!(generator_of(&s, s.minus(), &t), Err(Error::SplitCollision(1))));
        let z = Frame::empty(sp.metric().clone());
        assert_eq!(generator_of(&s, &z, &t).unwrap().dom_dim(), 0);
    }

    #[test]
    fn graph_round_trip() {
        let (sp, s, t) = setup();
        let lam = Frame::span(sp.metric(), &CMatrix::from_row_slice(2, 1, &[c(1.0, 0.0), c(0.6, 0.8)]), 1e-9).unwrap();
        let g = generator_of(&s, &lam, &t).unwrap();
        assert!(gap::gap(&g.graph(&t).unwrap(), &lam).unwrap().gap < 1e-12);
    }

    #[test]
    fn pair_index_examples() {
        let (sp, _, t) = setup();
        let a = line(&sp, &[1.0, 1.0]);
        let b = line(&sp, &[1.0, -1.0]);
        assert_eq!(pair_index(&a, &a, &t).unwrap(), PairIndexReport { dim_intersection: 1, codim_sum: 1, index: 0 });
        assert_eq!(pair_index(&a, &b, &t).unwrap(), PairIndexReport { dim_intersection: 0, codim_sum: 0, index: 0 });
        let z = Frame::empty(sp.metric().clone());
        let all = Frame::whole(sp.metric().clone());
        assert_eq!(pair_index(&z, &all, &t).unwrap().index, 0);
    }

    #[test]
    fn iso_to_lag_examples() {
        let (sp, _, t) = setup();
        let a = line(&sp, &[1.0, 1.0]);
        let b = line(&sp, &[1.0, -1.0]);
        assert!(check_iso_to_lag(&sp, &a, &b, &t).unwrap().all_hold());
        assert!(check_iso_to_lag(&sp, &a, &a, &t).unwrap().all_hold());
        let sp4 = SymplecticSpace::canonical(2, 2);
        let iso = Frame::span(sp4.metric(), &real_matrix(4, 1, &[1.0, 0.0, 1.0, 0.0]), 1e-9).unwrap();
        let z = Frame::empty(sp4.metric().clone());
        // index = 0 − dim X/λ = −3.
        assert_eq!(pair_index(&iso, &z, &t).unwrap().index, -3);
        assert!(matches!(check_iso_to_lag(&sp4, &iso, &z, &t), Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn fredholm_examples() {
        let (sp, s, t) = setup();
        let a = line(&sp, &[1.0, 1.0]);
        assert_eq!(fredholm_via_generators(&s, &a, &a, &t).unwrap(), GeneratorFredholm { index: 0, kernel_dim: 1 });
        let th: f64 = 0.7;
        let b = Frame::span(sp.metric(), &CMatrix::from_row_slice(2, 1, &[c(1.0, 0.0), c(th.cos(), th.sin())]), 1e-9).unwrap();
        assert_eq!(fredholm_via_generators(&s, &b, &a, &t).unwrap(), GeneratorFredholm { index: 0, kernel_dim: 0 });
    }

    #[test]
    fn fredholm_isotropic_domain() {
        // λ = span(e₁ + e₃) is isotropic but not Lagrangian in C⁴ with J = diag(i, i, −i, −i).
        let t = Tolerances::default();
        let sp = SymplecticSpace::canonical(2, 2);
        let s = Arc::new(sp.compute_splitting(&t).unwrap());
        let lam = Frame::span(sp.metric(), &real_matrix(4, 1, &[1.0, 0.0, 1.0, 0.0]), 1e-9).unwrap();
        let mu = Frame::span(sp.metric(), &real_matrix(4, 2, &[1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0]), 1e-9).unwrap();
        let g = fredholm_via_generators(&s, &lam, &mu, &t).unwrap();
        let p = pair_index(&lam, &mu, &t).unwrap();
        assert_eq!(g.index, p.index);
        assert_eq!(g.kernel_dim, p.dim_intersection);
        assert_eq!((g.index, g.kernel_dim), (-1, 1));
    }

    #[test]
    fn boxplus_examples() {
        let (sp, s, t) = setup();
        let bx = boxplus(&sp, &t).unwrap();
        let d: Vec<_> = (0..4).map(|k| bx.space.j()[(k, k)]).collect();
        let expect = [c(0.0, 1.0), c(0.0, -1.0), c(0.0, -1.0), c(0.0, 1.0)];
        assert!(d.iter().zip(expect).all(|(a, b)| (a - b).norm() < 1e-12));
        let a = line(&sp, &[1.0, 1.0]);
        let b = line(&sp, &[1.0, -1.0]);
        let (ab, delta) = boxplus_pair(&bx, &a, &a, &t).unwrap();
        assert_eq!(pair_index(&ab, &delta, &t).unwrap().dim_intersection, 1);
        let (ab, delta) = boxplus_pair(&bx, &a, &b, &t).unwrap();
        assert_eq!(pair_index(&ab, &delta, &t).unwrap().dim_intersection, 0);
        let ps = bx.splitting(&s, &t).unwrap();
        assert!(ps.defect() < 1e-12);
        assert_eq!(classify(&bx.space, &delta, &t).unwrap(), Classification::Lagrangian);
    }

    #[test]
    fn block_operator_is_unitary() {
        let (sp, s, t) = setup();
        let a = line(&sp, &[1.0, 1.0]);
        let b = Frame::span(sp.metric(), &CMatrix::from_row_slice(2, 1, &[c(1.0, 0.0), c(0.0, 1.0)]), 1e-9).unwrap();
        let ug = generator_of(&s, &a, &t).unwrap();
        let vg = generator_of(&s, &b, &t).unwrap();
        let bl = block_operator(&ug, &vg).unwrap();
        assert!((bl.adjoint() * &bl - CMatrix::identity(2, 2)).norm() < 1e-12);
        let amb = ambient_block_operator(&ug, &vg).unwrap();
        let h = h_metric(&s);
        assert!((amb.adjoint() * &h * &amb - h).norm() < 1e-12);
    }
}
