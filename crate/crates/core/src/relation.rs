//! Closed linear relations in X × X encoded as matrix pencils.
//!
//! A relation is A = {(Ec, Fc) : c ∈ C^d}. The stacked matrix [E; F] is kept
//! column-orthonormal. For d = n the spectrum is the set of roots of
//! det(F − ζE); directions in ker E are infinite eigenvalues and span A(0).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lagrangian::pair_index;
use crate::linalg::{self, c, contour_quadrature, CMatrix, Contour, Frame, Metric, Tolerances};

#[derive(Debug, Clone)]
pub struct PencilRelation {
    e: CMatrix,
    f: CMatrix,
}

impl PencilRelation {
    pub fn new(e: CMatrix, f: CMatrix, tol: &Tolerances) -> Result<PencilRelation> {
        if e.shape() != f.shape() {
            return Err(Error::DimensionMismatch(format!(
                "E is {}x{}, F is {}x{}",
                e.nrows(),
                e.ncols(),
                f.nrows(),
                f.ncols()
            )));
        }
        linalg::check_finite(&e, "pencil E")?;
        linalg::check_finite(&f, "pencil F")?;
        let d = e.ncols();
        let stacked = linalg::vstack(&[&e, &f]);
        let q = linalg::range_space(&stacked, tol.rank_tol);
        if q.ncols() != d {
            return Err(Error::DimensionMismatch(format!("[E; F] has rank {} < {d}", q.ncols())));
        }
        Ok(PencilRelation::from_stacked(e.nrows(), q))
    }

    /// Relation spanned by the columns of [E; F], whatever their rank.
    pub fn spanned(e: &CMatrix, f: &CMatrix, tol: &Tolerances) -> PencilRelation {
        let q = linalg::range_space(&linalg::vstack(&[e, f]), tol.rank_tol);
        PencilRelation::from_stacked(e.nrows(), q)
    }

    fn from_stacked(n: usize, q: CMatrix) -> PencilRelation {
        let d = q.ncols();
        PencilRelation { e: q.rows(0, n).into_owned(), f: q.rows(n, n).into_owned() }.with_cols(d)
    }

    fn with_cols(self, d: usize) -> PencilRelation {
        debug_assert_eq!(self.e.ncols(), d);
        self
    }

    /// Graph of a square matrix.
    pub fn graph(a: &CMatrix) -> PencilRelation {
        let n = a.nrows();
        PencilRelation::new(CMatrix::identity(n, n), a.clone(), &Tolerances::default()).expect("graphs are injective")
    }

    pub fn ambient_dim(&self) -> usize {
        self.e.nrows()
    }

    pub fn coord_dim(&self) -> usize {
        self.e.ncols()
    }

    pub fn e(&self) -> &CMatrix {
        &self.e
    }

    pub fn f(&self) -> &CMatrix {
        &self.f
    }

    /// The relation as a subspace of X × X.
    pub fn as_frame(&self) -> Frame {
        let n = self.ambient_dim();
        Frame::from_orthonormal(std::sync::Arc::new(Metric::identity(2 * n)), linalg::vstack(&[&self.e, &self.f]))
    }

    // [E; F] has orthonormal columns, so thresholds below are absolute.
    pub fn domain(&self, tol: &Tolerances) -> CMatrix {
        linalg::range_space_abs(&self.e, 0.0, tol.rank_tol)
    }

    pub fn range(&self, tol: &Tolerances) -> CMatrix {
        linalg::range_space_abs(&self.f, 0.0, tol.rank_tol)
    }

    /// ker A = E(ker F).
    pub fn kernel(&self, tol: &Tolerances) -> CMatrix {
        let k = linalg::null_space_abs(&self.f, 0.0, tol.rank_tol);
        linalg::range_space_abs(&(&self.e * k), 0.0, tol.rank_tol)
    }

    /// A(0) = F(ker E), the indeterminate part.
    pub fn multivalued_part(&self, tol: &Tolerances) -> CMatrix {
        let k = linalg::null_space_abs(&self.e, 0.0, tol.rank_tol);
        linalg::range_space_abs(&(&self.f * k), 0.0, tol.rank_tol)
    }

    pub fn is_operator(&self, tol: &Tolerances) -> bool {
        self.multivalued_part(tol).ncols() == 0
    }
}

pub fn relation_inverse(a: &PencilRelation) -> PencilRelation {
    PencilRelation { e: a.f.clone(), f: a.e.clone() }
}

/// A + B = {(x, y + z) : (x, y) ∈ A, (x, z) ∈ B}.
pub fn relation_sum(a: &PencilRelation, b: &PencilRelation, tol: &Tolerances) -> Result<PencilRelation> {
    same_dim(a, b)?;
    let k = linalg::null_space_abs(&linalg::hstack(&[&a.e, &(-&b.e)]), 0.0, tol.rank_tol);
    let (ka, kb) = split_rows(&k, a.coord_dim());
    Ok(PencilRelation::spanned(&(&a.e * &ka), &(&a.f * ka + &b.f * kb), tol))
}

/// C ∘ A = {(x, z) : (x, y) ∈ A and (y, z) ∈ C for some y}.
pub fn relation_compose(cr: &PencilRelation, a: &PencilRelation, tol: &Tolerances) -> Result<PencilRelation> {
    same_dim(a, cr)?;
    let k = linalg::null_space_abs(&linalg::hstack(&[&a.f, &(-&cr.e)]), 0.0, tol.rank_tol);
    let (ka, kc) = split_rows(&k, a.coord_dim());
    Ok(PencilRelation::spanned(&(&a.e * ka), &(&cr.f * kc), tol))
}

fn split_rows(k: &CMatrix, top: usize) -> (CMatrix, CMatrix) {
    (k.rows(0, top).into_owned(), k.rows(top, k.nrows() - top).into_owned())
}

fn same_dim(a: &PencilRelation, b: &PencilRelation) -> Result<()> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::DimensionMismatch("relations act on different spaces".into()));
    }
    Ok(())
}

/// Equality of relations as subspaces of X × X.
pub fn same_relation(a: &PencilRelation, b: &PencilRelation, tol: &Tolerances) -> Result<bool> {
    crate::gap::same_subspace(&a.as_frame(), &b.as_frame(), tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Spectrum {
    /// σ(A) = C: non-square coordinates or a singular pencil.
    WholePlane { reason: String },
    Discrete {
        /// Distinct finite eigenvalues with algebraic multiplicities.
        eigenvalues: Vec<(Complex64, usize)>,
        /// Number of infinite eigenvalues (directions of A(0) in the pencil).
        infinite: usize,
        /// dim A(0).
        indeterminacy: usize,
    },
}

impl Spectrum {
    /// Finite eigenvalues repeated by multiplicity.
    pub fn finite(&self) -> Vec<Complex64> {
        match self {
            Spectrum::WholePlane { .. } => Vec::new(),
            Spectrum::Discrete { eigenvalues, .. } => {
                eigenvalues.iter().flat_map(|&(z, m)| std::iter::repeat_n(z, m)).collect()
            }
        }
    }

    pub fn is_whole_plane(&self) -> bool {
        matches!(self, Spectrum::WholePlane { .. })
    }
}

const SHIFTS: [(f64, f64); 6] = [(0.0, 0.0), (0.318, 0.127), (-0.713, 0.521), (1.37, -0.93), (-2.11, -1.61), (3.7, 2.9)];

/// A shift σ with F − σE well conditioned, its inverse, and K = (F − σE)⁻¹E.
struct ShiftInvert {
    sigma: Complex64,
    m: CMatrix,
    k: CMatrix,
}

fn shift_invert(a: &PencilRelation) -> Option<ShiftInvert> {
    let scale = linalg::norm2(&a.e).max(linalg::norm2(&a.f)).max(1e-300);
    let mut best: Option<(f64, Complex64)> = None;
    for (re, im) in SHIFTS {
        let s = c(re, im);
        let m = &a.f - &a.e * s;
        let rc = linalg::inverse_condition(&m);
        if best.is_none_or(|(b, _)| rc > b) {
            best = Some((rc, s));
        }
        if rc > 1e-3 {
            break;
        }
    }
    let (rc, sigma) = best?;
    if rc <= 1e-12 * scale.max(1.0) {
        return None;
    }
    let m = &a.f - &a.e * sigma;
    let minv = linalg::inverse(&m)?;
    let k = &minv * &a.e;
    Some(ShiftInvert { sigma, m, k })
}

/// Finite eigenvalues with repetition, the infinite count, or None for σ(A) = C.
fn pencil_eigenvalues(a: &PencilRelation) -> Result<Option<(Vec<Complex64>, usize)>> {
    let n = a.ambient_dim();
    if a.coord_dim() != n {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some((Vec::new(), 0)));
    }
    let Some(si) = shift_invert(a) else { return Ok(None) };
    let kap = linalg::eigenvalues(&si.k)?;
    let knorm = linalg::norm2(&si.k).max(1e-300);
    let mut finite = Vec::new();
    let mut infinite = 0;
    for kv in kap {
        if kv.norm() <= 1e-9 * knorm {
            infinite += 1;
        } else {
            finite.push(si.sigma + c(1.0, 0.0) / kv);
        }
    }
    Ok(Some((finite, infinite)))
}

pub fn relation_spectrum(a: &PencilRelation, tol: &Tolerances) -> Result<Spectrum> {
    let n = a.ambient_dim();
    if a.coord_dim() != n {
        return Ok(Spectrum::WholePlane { reason: format!("coordinate dimension {} != {n}", a.coord_dim()) });
    }
    let Some((finite, infinite)) = pencil_eigenvalues(a)? else {
        return Ok(Spectrum::WholePlane { reason: "det(F - zE) vanishes identically".into() });
    };
    let scale = finite.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for z in finite {
        match groups.iter_mut().find(|(w, _)| (*w - z).norm() <= 1e-6 * scale) {
            Some(g) => {
                let m = g.1 as f64;
                g.0 = (g.0 * m + z) / (m + 1.0);
                g.1 += 1;
            }
            None => groups.push((z, 1)),
        }
    }
    groups.sort_by(|x, y| (x.0.re, x.0.im).partial_cmp(&(y.0.re, y.0.im)).unwrap());
    Ok(Spectrum::Discrete { eigenvalues: groups, infinite, indeterminacy: a.multivalued_part(tol).ncols() })
}

/// Finite eigenvalues repeated by multiplicity; errors when σ(A) = C.
pub fn finite_spectrum(a: &PencilRelation) -> Result<Vec<Complex64>> {
    match pencil_eigenvalues(a)? {
        Some((v, _)) => Ok(v),
        None => Err(Error::NotAdmissible("spectrum is the whole plane".into())),
    }
}

/// R(ζ, A) = (A − ζI)⁻¹ = E(F − ζE)⁻¹.
pub fn resolvent(a: &PencilRelation, z: Complex64, tol: &Tolerances) -> Result<CMatrix> {
    match relation_spectrum(a, tol)? {
        Spectrum::WholePlane { .. } => return Err(Error::SpectralPoint(z)),
        Spectrum::Discrete { eigenvalues, .. } => {
            if eigenvalues.iter().any(|&(w, _)| (w - z).norm() <= tol.cross_tol) {
                return Err(Error::SpectralPoint(z));
            }
        }
    }
    resolvent_unchecked(a, z)
}

fn resolvent_unchecked(a: &PencilRelation, z: Complex64) -> Result<CMatrix> {
    let m = &a.f - &a.e * z;
    let inv = linalg::inverse(&m).ok_or(Error::SpectralPoint(z))?;
    Ok(&a.e * inv)
}

/// A bounded region of the plane bounded by a smooth closed contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum SpectralWindow {
    Disk { center: Complex64, radius: f64 },
    Ellipse { center: Complex64, a: f64, b: f64 },
}

impl SpectralWindow {
    pub fn disk(center: Complex64, radius: f64) -> SpectralWindow {
        SpectralWindow::Disk { center, radius }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.level(z) < 1.0
    }

    /// (z − c)/r scaled so that the boundary is the unit level set.
    fn level(&self, z: Complex64) -> f64 {
        match *self {
            SpectralWindow::Disk { center, radius } => (z - center).norm() / radius,
            SpectralWindow::Ellipse { center, a, b } => {
                let w = z - center;
                ((w.re / a).powi(2) + (w.im / b).powi(2)).sqrt()
            }
        }
    }

    pub fn contour(&self, nodes: usize) -> Contour {
        match *self {
            SpectralWindow::Disk { center, radius } => Contour::circle(center, radius, nodes),
            SpectralWindow::Ellipse { center, a, b } => Contour::ellipse(center, a, b, nodes),
        }
    }

    /// Euclidean distance from z to the boundary.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        match *self {
            SpectralWindow::Disk { center, radius } => ((z - center).norm() - radius).abs(),
            SpectralWindow::Ellipse { .. } => {
                let fine = self.contour(4096);
                let coarse = fine.points().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
                // Chord error of the sampled boundary is below the node spacing squared.
                (coarse - self.max_radius() * 2e-6).max(0.0)
            }
        }
    }

    fn max_radius(&self) -> f64 {
        match *self {
            SpectralWindow::Disk { radius, .. } => radius,
            SpectralWindow::Ellipse { a, b, .. } => a.max(b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralProjection {
    pub p: CMatrix,
    /// Total algebraic multiplicity of the spectrum inside the window.
    pub rank: usize,
}

fn check_window(a: &PencilRelation, w: &SpectralWindow, tol: &Tolerances) -> Result<Vec<Complex64>> {
    let contour = w.contour(tol.quad_nodes);
    let first = contour.points().next().unwrap_or(c(0.0, 0.0));
    let Some((finite, _)) = pencil_eigenvalues(a)? else { return Err(Error::SingularOnContour(first)) };
    if let Some(&z) = finite.iter().find(|&&z| w.boundary_distance(z) <= tol.cross_tol) {
        return Err(Error::SingularOnContour(z));
    }
    Ok(finite)
}

/// P_N(A) = −(1/2πi)∮_{∂N} R(ζ, A) dζ by the trapezoid rule.
pub fn spectral_projection(a: &PencilRelation, w: &SpectralWindow, tol: &Tolerances) -> Result<SpectralProjection> {
    tol.validate()?;
    let finite = check_window(a, w, tol)?;
    let p = contour_quadrature(|z| resolvent_unchecked(a, z), &w.contour(tol.quad_nodes))?;
    let rank = finite.iter().filter(|&&z| w.contains(z)).count();
    Ok(SpectralProjection { p, rank })
}

/// −(1/2πi)∮ ζ R(ζ, A) dζ, the part of A carried by ran P_N(A).
pub fn compressed_operator(a: &PencilRelation, w: &SpectralWindow, tol: &Tolerances) -> Result<CMatrix> {
    check_window(a, w, tol)?;
    contour_quadrature(|z| Ok(resolvent_unchecked(a, z)? * z), &w.contour(tol.quad_nodes))
}

/// σ(PAP) restricted to ran P, which should equal σ(A) ∩ N.
pub fn compressed_spectrum(a: &PencilRelation, w: &SpectralWindow, tol: &Tolerances) -> Result<Vec<Complex64>> {
    let sp = spectral_projection(a, w, tol)?;
    if sp.rank == 0 {
        return Ok(Vec::new());
    }
    let m = compressed_operator(a, w, tol)?;
    let q = range_of_projector(&sp.p, sp.rank);
    linalg::eigenvalues(&(q.adjoint() * m * &q))
}

fn range_of_projector(p: &CMatrix, rank: usize) -> CMatrix {
    let svd = p.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    CMatrix::from_columns(&(0..rank).map(|i| u.column(i).into_owned()).collect::<Vec<_>>())
}

/// Spectral projection from generalized eigenspaces of the shift-inverted pencil.
///
/// With M = F − σE and K = M⁻¹E, R(ζ) = M W diag(1/(ζ_i − ζ)) W⁻¹ M⁻¹ where K = W diag(κ) W⁻¹,
/// so P_N = (MW) diag(1[ζ_i ∈ N]) (MW)⁻¹. Infinite eigenvalues (κ = 0) never contribute.
pub fn spectral_projection_eig(a: &PencilRelation, w: &SpectralWindow) -> Result<CMatrix> {
    let n = a.ambient_dim();
    if a.coord_dim() != n {
        return Err(Error::NotAdmissible("spectrum is the whole plane".into()));
    }
    let si = shift_invert(a).ok_or_else(|| Error::NotAdmissible("singular pencil".into()))?;
    let clusters = linalg::eig(&si.k)?;
    let knorm = linalg::norm2(&si.k).max(1e-300);
    let m = &si.m;
    let mut all = Vec::new();
    let mut inside = Vec::new();
    for cl in &clusters {
        let is_in = cl.value.norm() > 1e-9 * knorm && w.contains(si.sigma + c(1.0, 0.0) / cl.value);
        for j in 0..cl.space.rank() {
            inside.push(is_in);
            all.push(m * cl.space.basis().column(j));
        }
    }
    let basis = CMatrix::from_columns(&all);
    let binv = linalg::inverse(&basis).ok_or(Error::NoConvergence(n))?;
    let mut sel = CMatrix::zeros(n, n);
    for (k, &b) in inside.iter().enumerate() {
        if b {
            sel[(k, k)] = c(1.0, 0.0);
        }
    }
    Ok(&basis * sel * binv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFredholm {
    pub kernel_dim: usize,
    pub coker_dim: usize,
    pub index: i64,
    /// Whether the pair (A, X × {0}) in X × X reproduces the kernel and index.
    pub pair_consistent: bool,
}

pub fn relation_fredholm(a: &PencilRelation, tol: &Tolerances) -> Result<RelationFredholm> {
    let n = a.ambient_dim();
    let kernel_dim = a.kernel(tol).ncols();
    let coker_dim = n - a.range(tol).ncols();
    let index = kernel_dim as i64 - coker_dim as i64;
    let metric = std::sync::Arc::new(Metric::identity(2 * n));
    let horizontal = linalg::vstack(&[&CMatrix::identity(n, n), &CMatrix::zeros(n, n)]);
    let xf = Frame::from_orthonormal(metric, horizontal);
    let pr = pair_index(&a.as_frame(), &xf, tol)?;
    let pair_consistent = pr.dim_intersection == kernel_dim && pr.codim_sum == coker_dim;
    Ok(RelationFredholm { kernel_dim, coker_dim, index, pair_consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, real_matrix};

    fn t() -> Tolerances {
        Tolerances::default()
    }

    fn d(v: &[f64]) -> CMatrix {
        diag(&v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    fn example_pencil() -> PencilRelation {
        PencilRelation::new(d(&[1.0, 0.0]), d(&[2.0, 1.0]), &t()).unwrap()
    }

    #[test]
    fn inverse_examples() {
        let g = PencilRelation::graph(&d(&[2.0]));
        assert!(same_relation(&relation_inverse(&g), &PencilRelation::graph(&d(&[0.5])), &t()).unwrap());
        let v = PencilRelation::new(real_matrix(1, 1, &[0.0]), real_matrix(1, 1, &[1.0]), &t()).unwrap();
        let inv = relation_inverse(&v);
        assert_eq!(v.domain(&t()).ncols(), 0);
        assert_eq!(inv.domain(&t()).ncols(), 1);
        assert_eq!(inv.range(&t()).ncols(), 0);
        assert_eq!(v.multivalued_part(&t()).ncols(), 1);
        assert_eq!(inv.kernel(&t()).ncols(), 1);
    }

    #[test]
    fn compose_graphs_is_product() {
        let a = real_matrix(2, 2, &[1.0, 2.0, -0.5, 0.3]);
        let b = real_matrix(2, 2, &[0.2, -1.0, 1.5, 0.7]);
        let comp = relation_compose(&PencilRelation::graph(&b), &PencilRelation::graph(&a), &t()).unwrap();
        assert!(same_relation(&comp, &PencilRelation::graph(&(&b * &a)), &t()).unwrap());
        let sum = relation_sum(&PencilRelation::graph(&a), &PencilRelation::graph(&b), &t()).unwrap();
        assert!(same_relation(&sum, &PencilRelation::graph(&(&a + &b)), &t()).unwrap());
    }

    #[test]
    fn spectrum_examples() {
        let s = relation_spectrum(&PencilRelation::graph(&d(&[2.0, 3.0])), &t()).unwrap();
        let f = s.finite();
        assert!((f[0] - c(2.0, 0.0)).norm() < 1e-12 && (f[1] - c(3.0, 0.0)).norm() < 1e-12);
        match relation_spectrum(&example_pencil(), &t()).unwrap() {
            Spectrum::Discrete { eigenvalues, infinite, indeterminacy } => {
                assert_eq!(eigenvalues.len(), 1);
                assert!((eigenvalues[0].0 - c(2.0, 0.0)).norm() < 1e-12);
                assert_eq!((infinite, indeterminacy), (1, 1));
            }
            other => panic!("{other:?}"),
        }
        let a0 = example_pencil().multivalued_part(&t());
        assert!(a0[(0, 0)].norm() < 1e-12);
        let thin = PencilRelation::new(real_matrix(2, 1, &[1.0, 0.0]), real_matrix(2, 1, &[0.0, 1.0]), &t()).unwrap();
        assert!(relation_spectrum(&thin, &t()).unwrap().is_whole_plane());
    }

    #[test]
    fn resolvent_examples() {
        let r = resolvent(&PencilRelation::graph(&CMatrix::zeros(2, 2)), c(1.0, 0.0), &t()).unwrap();
        assert!((r + CMatrix::identity(2, 2)).norm() < 1e-12);
        let r = resolvent(&example_pencil(), c(0.0, 0.0), &t()).unwrap();
        assert!((r - d(&[0.5, 0.0])).norm() < 1e-12);
        assert!(matches!(resolvent(&example_pencil(), c(2.0, 0.0), &t()), Err(Error::SpectralPoint(_))));
    }

    #[test]
    fn resolvent_identity() {
        let a = PencilRelation::graph(&real_matrix(2, 2, &[1.0, 2.0, 0.0, -1.0]));
        let (z, w) = (c(0.3, 0.4), c(-0.2, 1.1));
        let rz = resolvent(&a, z, &t()).unwrap();
        let rw = resolvent(&a, w, &t()).unwrap();
        assert!((&rz - &rw - (&rz * &rw) * (z - w)).norm() < 1e-12);
    }

    #[test]
    fn projection_examples() {
        let a = PencilRelation::graph(&d(&[1.0, 5.0]));
        let w = SpectralWindow::disk(c(1.0, 0.0), 0.5);
        let sp = spectral_projection(&a, &w, &t()).unwrap();
        assert!((sp.p - d(&[1.0, 0.0])).norm() < 1e-10);
        assert_eq!(sp.rank, 1);
        let empty = SpectralWindow::disk(c(3.0, 0.0), 0.5);
        let sp = spectral_projection(&a, &empty, &t()).unwrap();
        assert!(sp.p.norm() < 1e-12 && sp.rank == 0);
        let sp = spectral_projection(&example_pencil(), &SpectralWindow::disk(c(2.0, 0.0), 0.5), &t()).unwrap();
        assert_eq!(sp.rank, 1);
        assert!((&sp.p - d(&[1.0, 0.0])).norm() < 1e-10);
        // P annihilates A(0) = span(e₂).
        assert!((&sp.p * real_matrix(2, 1, &[0.0, 1.0])).norm() < 1e-10);
        let pe = spectral_projection_eig(&example_pencil(), &SpectralWindow::disk(c(2.0, 0.0), 0.5)).unwrap();
        assert!((pe - sp.p).norm() < 1e-10);
    }

    #[test]
    fn compressed_spectrum_matches_window() {
        let a = PencilRelation::graph(&real_matrix(3, 3, &[1.0, 1.0, 0.0, 0.0, 1.2, 0.5, 0.0, 0.0, 4.0]));
        let w = SpectralWindow::disk(c(1.1, 0.0), 0.6);
        let mut s = compressed_spectrum(&a, &w, &t()).unwrap();
        s.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap());
        assert_eq!(s.len(), 2);
        assert!((s[0] - c(1.0, 0.0)).norm() < 1e-8 && (s[1] - c(1.2, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn contour_through_spectrum_is_rejected() {
        let a = PencilRelation::graph(&d(&[1.0]));
        let w = SpectralWindow::disk(c(0.0, 0.0), 1.0);
        assert!(matches!(spectral_projection(&a, &w, &t()), Err(Error::SingularOnContour(_))));
    }

    #[test]
    fn fredholm_examples() {
        let f = relation_fredholm(&PencilRelation::graph(&CMatrix::identity(2, 2)), &t()).unwrap();
        assert_eq!((f.kernel_dim, f.coker_dim, f.index, f.pair_consistent), (0, 0, 0, true));
        let f = relation_fredholm(&PencilRelation::graph(&d(&[1.0, 0.0])), &t()).unwrap();
        assert_eq!((f.kernel_dim, f.coker_dim, f.index, f.pair_consistent), (1, 1, 0, true));
        let f = relation_fredholm(&example_pencil(), &t()).unwrap();
        assert_eq!((f.kernel_dim, f.coker_dim, f.index, f.pair_consistent), (0, 0, 0, true));
    }
}
