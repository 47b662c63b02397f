use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::curve::{Catenation, CurvePoint, FnCurve, Reparametrized, Restricted, Reversed, SplitCurve};
use super::index::{generators_at, maslov_index, MaslovOptions};
use crate::error::{Error, Result};
use crate::gap;
use crate::lagrangian::{boxplus, pair_index};
use crate::linalg::{self, c, CMatrix, Frame, Metric, Tolerances};
use crate::symplectic::{Splitting, SymplecticSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatenationReport {
    pub whole: i64,
    pub first: i64,
    pub second: i64,
    pub holds: bool,
}

/// Mas over [a, b] against Mas over [a, c] plus Mas over [c, b].
pub fn catenation_check<C: SplitCurve + ?Sized>(curve: &C, cut: f64, tol: &Tolerances, opts: &MaslovOptions) -> Result<CatenationReport> {
    let (a, b) = curve.interval();
    if !(cut > a && cut < b) {
        return Err(Error::HypothesisFailed(format!("cut point {cut} is not inside ({a}, {b})")));
    }
    let whole = maslov_index(curve, tol, opts)?.value;
    let first = maslov_index(&Restricted { inner: curve, a, b: cut }, tol, opts)?.value;
    let second = maslov_index(&Restricted { inner: curve, a: cut, b }, tol, opts)?.value;
    Ok(CatenationReport { whole, first, second, holds: whole == first + second })
}

/// Mas of a curve followed by a second one that starts where the first ends.
pub fn catenated_index<C: SplitCurve + ?Sized, D: SplitCurve + ?Sized>(
    first: &C,
    second: &D,
    tol: &Tolerances,
    opts: &MaslovOptions,
) -> Result<i64> {
    Ok(maslov_index(&Catenation { first, second }, tol, opts)?.value)
}

/// (Mas of the curve, Mas after the monotone reparametrization u ↦ a + (b − a)u² of [a, b]).
pub fn reparametrization_check<C: SplitCurve + ?Sized>(curve: &C, tol: &Tolerances, opts: &MaslovOptions) -> Result<(i64, i64)> {
    let (a, b) = curve.interval();
    let phi = move |s: f64| {
        let u = (s - a) / (b - a);
        a + (b - a) * u * u
    };
    let base = maslov_index(curve, tol, opts)?.value;
    let re = maslov_index(&Reparametrized { inner: curve, a, b, phi }, tol, opts)?.value;
    Ok((base, re))
}

/// dim λ_s ∩ µ_s.
pub fn intersection_dim(pt: &CurvePoint, tol: &Tolerances) -> Result<usize> {
    Ok(pair_index(&pt.lambda, &pt.mu, tol)?.dim_intersection)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipReport {
    pub mas_lm: i64,
    pub mas_ml: i64,
    pub dim_start: usize,
    pub dim_end: usize,
    pub holds: bool,
}

struct Swapped<'a, C: ?Sized>(&'a C);

impl<C: SplitCurve + ?Sized> SplitCurve for Swapped<'_, C> {
    fn interval(&self) -> (f64, f64) {
        self.0.interval()
    }
    fn at(&self, s: f64) -> Result<CurvePoint> {
        let p = self.0.at(s)?;
        Ok(CurvePoint { splitting: p.splitting, lambda: p.mu, mu: p.lambda })
    }
}

/// Mas{λ, µ} + Mas{µ, λ} = dim λ₀∩µ₀ − dim λ₁∩µ₁.
pub fn flipping_check<C: SplitCurve + ?Sized>(curve: &C, tol: &Tolerances, opts: &MaslovOptions) -> Result<FlipReport> {
    let (a, b) = curve.interval();
    let mas_lm = maslov_index(curve, tol, opts)?.value;
    let mas_ml = maslov_index(&Swapped(curve), tol, opts)?.value;
    let dim_start = intersection_dim(&curve.at(a)?, tol)?;
    let dim_end = intersection_dim(&curve.at(b)?, tol)?;
    let holds = mas_lm + mas_ml == dim_start as i64 - dim_end as i64;
    Ok(FlipReport { mas_lm, mas_ml, dim_start, dim_end, holds })
}

struct Boxplussed<'a, C: ?Sized> {
    inner: &'a C,
    tol: Tolerances,
}

impl<C: SplitCurve + ?Sized> SplitCurve for Boxplussed<'_, C> {
    fn interval(&self) -> (f64, f64) {
        self.inner.interval()
    }
    fn at(&self, s: f64) -> Result<CurvePoint> {
        let p = self.inner.at(s)?;
        let bx = boxplus(p.splitting.space(), &self.tol)?;
        let splitting = Arc::new(bx.splitting(&p.splitting, &self.tol)?);
        let lambda = bx.pair(&p.lambda, &p.mu, &self.tol)?;
        Ok(CurvePoint { splitting, lambda, mu: bx.diagonal })
    }
}

/// (µ, λ) in (X, −ω) with the splitting X⁻ ⊕ X⁺, i.e. projection I − P.
struct Negated<'a, C: ?Sized>(&'a C);

impl<C: SplitCurve + ?Sized> SplitCurve for Negated<'_, C> {
    fn interval(&self) -> (f64, f64) {
        self.0.interval()
    }
    fn at(&self, s: f64) -> Result<CurvePoint> {
        let p = self.0.at(s)?;
        Ok(CurvePoint { splitting: Arc::new(p.splitting.negated()), lambda: p.mu, mu: p.lambda })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxplusReport {
    /// Mas{λ, µ; P}.
    pub mas: i64,
    /// Mas{λ ⊞ µ, Δ; P ⊞ (I − P)}.
    pub mas_boxplus: i64,
    /// Mas{µ, λ; I − P} in (X, −ω).
    pub mas_flipped: i64,
    /// index(λ, µ) = index(λ ⊞ µ, Δ) at every grid sample.
    pub index_equal: bool,
    pub all_equal: bool,
}

/// The three quantities of the ⊞ construction, each by its own pipeline.
pub fn maslov_boxplus<C: SplitCurve + ?Sized>(curve: &C, tol: &Tolerances, opts: &MaslovOptions) -> Result<BoxplusReport> {
    let mas = maslov_index(curve, tol, opts)?.value;
    let bx = Boxplussed { inner: curve, tol: *tol };
    let mas_boxplus = maslov_index(&bx, tol, opts)?.value;
    let mas_flipped = maslov_index(&Negated(curve), tol, opts)?.value;
    let (a, b) = curve.interval();
    let n = opts.flow.samples.max(2);
    let mut index_equal = true;
    for k in 0..n {
        let s = a + (b - a) * k as f64 / (n - 1) as f64;
        let p = curve.at(s)?;
        let q = bx.at(s)?;
        index_equal &= pair_index(&p.lambda, &p.mu, tol)?.index == pair_index(&q.lambda, &q.mu, tol)?.index;
    }
    Ok(BoxplusReport {
        mas,
        mas_boxplus,
        mas_flipped,
        index_equal,
        all_equal: mas == mas_boxplus && mas == mas_flipped,
    })
}

/// The Cayley transform (I − K/2)⁻¹(I + K/2) with K = H⁻¹A, H = −iΩ and A skew-Hermitian.
///
/// K is in the Lie algebra of the form, so the result preserves ω.
pub fn cayley_symplectic(sp: &SymplecticSpace, a: &CMatrix) -> Result<CMatrix> {
    let n = sp.dim();
    if a.shape() != (n, n) {
        return Err(Error::DimensionMismatch("generator has the wrong size".into()));
    }
    let h = sp.omega() * c(0.0, -1.0);
    let hinv = linalg::inverse(&h).ok_or_else(|| Error::Degenerate("form is singular".into()))?;
    let k = hinv * a * c(0.5, 0.0);
    let id = CMatrix::identity(n, n);
    let left = linalg::inverse(&(&id - &k)).ok_or_else(|| Error::HypothesisFailed("I − K/2 is singular".into()))?;
    Ok(left * (&id + &k))
}

/// ‖L*ΩL − Ω‖ / ‖Ω‖.
pub fn symplectic_defect(sp: &SymplecticSpace, l: &CMatrix) -> f64 {
    linalg::norm2(&(l.adjoint() * sp.omega() * l - sp.omega())) / linalg::norm2(sp.omega()).max(1e-300)
}

struct Conjugated<'a, C: ?Sized, F> {
    inner: &'a C,
    l: F,
    tol: Tolerances,
}

impl<C: SplitCurve + ?Sized, F: Fn(f64) -> CMatrix + Sync> SplitCurve for Conjugated<'_, C, F> {
    fn interval(&self) -> (f64, f64) {
        self.inner.interval()
    }
    fn at(&self, s: f64) -> Result<CurvePoint> {
        let p = self.inner.at(s)?;
        let l = (self.l)(s);
        let sp = p.splitting.space();
        let d = symplectic_defect(sp, &l);
        if d > 1e-8 {
            return Err(Error::HypothesisFailed(format!("L at s = {s} is not symplectic (defect {d:.3e})")));
        }
        let move_frame = |f: &Frame| Frame::span(sp.metric(), &(&l * f.basis()), self.tol.rank_tol);
        let plus = &l * p.splitting.h_basis_plus();
        let minus = &l * p.splitting.h_basis_minus();
        let splitting = Arc::new(Splitting::from_frames(sp, &plus, &minus, &self.tol)?);
        Ok(CurvePoint { splitting, lambda: move_frame(&p.lambda)?, mu: move_frame(&p.mu)? })
    }
}

/// (Mas{λ, µ; P}, Mas{Lλ, Lµ; LPL⁻¹}) for a family of symplectic L_s.
pub fn naturality_check<C, F>(curve: &C, l: F, tol: &Tolerances, opts: &MaslovOptions) -> Result<(i64, i64)>
where
    C: SplitCurve + ?Sized,
    F: Fn(f64) -> CMatrix + Sync,
{
    let base = maslov_index(curve, tol, opts)?.value;
    let moved = maslov_index(&Conjugated { inner: curve, l, tol: *tol }, tol, opts)?.value;
    Ok((base, moved))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyReport {
    pub bottom: i64,
    pub right: i64,
    pub top: i64,
    pub left: i64,
    /// Mas along the boundary of the parameter square vanishes.
    pub holds: bool,
}

/// For a two-parameter family h(s, r), check bottom + right = left + top.
pub fn homotopy_check<H>(h: H, s_range: (f64, f64), r_range: (f64, f64), tol: &Tolerances, opts: &MaslovOptions) -> Result<HomotopyReport>
where
    H: Fn(f64, f64) -> Result<CurvePoint> + Sync,
{
    let ((a, b), (r0, r1)) = (s_range, r_range);
    let h = &h;
    let bottom = maslov_index(&FnCurve::new(a, b, move |s| h(s, r0)), tol, opts)?.value;
    let top = maslov_index(&FnCurve::new(a, b, move |s| h(s, r1)), tol, opts)?.value;
    let left = maslov_index(&FnCurve::new(r0, r1, move |r| h(a, r)), tol, opts)?.value;
    let right = maslov_index(&FnCurve::new(r0, r1, move |r| h(b, r)), tol, opts)?.value;
    Ok(HomotopyReport { bottom, right, top, left, holds: bottom + right == left + top })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingComparison {
    pub mas0: i64,
    pub mas1: i64,
    pub equal: bool,
    /// index(λ_s, µ_s) = 0 on every grid sample.
    pub index_zero: bool,
    pub max_cond_j: f64,
}

struct Resplit<'a, C: ?Sized, F> {
    inner: &'a C,
    alt: F,
    tol: Tolerances,
}

impl<C: SplitCurve + ?Sized, F: Fn(f64, &SymplecticSpace) -> Result<Arc<Splitting>> + Sync> SplitCurve for Resplit<'_, C, F> {
    fn interval(&self) -> (f64, f64) {
        self.inner.interval()
    }
    fn at(&self, s: f64) -> Result<CurvePoint> {
        let p = self.inner.at(s)?;
        let splitting = (self.alt)(s, p.splitting.space())?;
        // The alternative splitting may come with its own inner product.
        let metric = splitting.space().metric().clone();
        let lambda = p.lambda.with_metric(metric.clone(), self.tol.rank_tol)?;
        let mu = p.mu.with_metric(metric, self.tol.rank_tol)?;
        Ok(CurvePoint { splitting, lambda, mu })
    }
}

/// The splitting of ω induced by another inner product G₁.
pub fn splitting_from_metric(sp: &SymplecticSpace, g1: &CMatrix, tol: &Tolerances) -> Result<Splitting> {
    let metric = Metric::new(g1.clone()).map_err(|e| Error::BadInnerProduct(e.to_string()))?;
    SymplecticSpace::new(Arc::new(metric), sp.omega().clone(), tol)?.compute_splitting(tol)
}

/// Mas with the curve's own splittings against Mas with `alt`, recorded without any strength check.
pub fn compare_splittings<C, F>(curve: &C, alt: F, tol: &Tolerances, opts: &MaslovOptions) -> Result<SplittingComparison>
where
    C: SplitCurve + ?Sized,
    F: Fn(f64, &SymplecticSpace) -> Result<Arc<Splitting>> + Sync,
{
    let r0 = maslov_index(curve, tol, opts)?;
    let r1 = maslov_index(&Resplit { inner: curve, alt, tol: *tol }, tol, opts)?;
    let max_cond_j = r0.cond_trace.iter().map(|x| x.1).fold(0.0, f64::max);
    let mut index_zero = true;
    for &(s, _) in &r0.cond_trace {
        let p = curve.at(s)?;
        index_zero &= pair_index(&p.lambda, &p.mu, tol)?.index == 0;
    }
    Ok(SplittingComparison { mas0: r0.value, mas1: r1.value, equal: r0.value == r1.value, index_zero, max_cond_j })
}

/// As [`compare_splittings`], refusing curves whose cond(J_s) exceeds `bound` anywhere on the grid.
pub fn splitting_independence_check<C, F>(curve: &C, alt: F, bound: f64, tol: &Tolerances, opts: &MaslovOptions) -> Result<SplittingComparison>
where
    C: SplitCurve + ?Sized,
    F: Fn(f64, &SymplecticSpace) -> Result<Arc<Splitting>> + Sync,
{
    let (a, b) = curve.interval();
    let n = opts.flow.samples.max(2);
    for k in 0..n {
        let s = a + (b - a) * k as f64 / (n - 1) as f64;
        let cond = curve.at(s)?.splitting.space().cond_j();
        if !(cond <= bound) {
            return Err(Error::NotStrong { cond, bound });
        }
    }
    let r = compare_splittings(curve, alt, tol, opts)?;
    if r.max_cond_j > bound {
        return Err(Error::NotStrong { cond: r.max_cond_j, bound });
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaslovEmbeddingReport {
    pub mas_x: i64,
    pub mas_y: i64,
    /// dim(λ_s ∩ µ_s) − dim(λ_s ∩ µ_s ∩ Y), constant along the curve.
    pub offset: usize,
    pub equal: bool,
}

/// Restriction of a curve to a subspace Y ⊆ X, in orthonormal coordinates of Y.
struct OnSubspace<'a, C: ?Sized> {
    inner: &'a C,
    y: &'a Frame,
    tol: Tolerances,
}

fn rebase(f: &Frame, metric: &Arc<Metric>, tol: &Tolerances) -> Result<Frame> {
    if Arc::ptr_eq(f.metric(), metric) {
        Ok(f.clone())
    } else {
        f.with_metric(metric.clone(), tol.rank_tol)
    }
}

impl<C: SplitCurve + ?Sized> OnSubspace<'_, C> {
    fn restrict(&self, s: f64) -> Result<(CurvePoint, CurvePoint)> {
        let tol = &self.tol;
        let p = self.inner.at(s)?;
        let sp = p.splitting.space();
        let y = rebase(self.y, sp.metric(), tol)?;
        let q = y.basis();
        let k = q.ncols();
        let omega_y = q.adjoint() * sp.omega() * q;
        let metric_y = Arc::new(Metric::identity(k));
        let space_y = SymplecticSpace::new(metric_y.clone(), omega_y, tol).map_err(|e| {
            Error::HypothesisFailed(format!("omega restricted to Y is not symplectic at s = {s}: {e}"))
        })?;
        let to_y = |f: &Frame| -> Result<Frame> {
            let cap = gap::intersect_subspaces(&rebase(f, sp.metric(), tol)?, &y, tol)?;
            if cap.is_zero() {
                return Ok(Frame::empty(metric_y.clone()));
            }
            Frame::span(&metric_y, &y.coords(cap.basis()), tol.rank_tol)
        };
        let plus = to_y(p.splitting.plus())?;
        let minus = to_y(p.splitting.minus())?;
        if plus.rank() + minus.rank() != k {
            return Err(Error::HypothesisFailed(format!(
                "X+ ∩ Y and X- ∩ Y have dimensions {} + {} != dim Y = {k} at s = {s}",
                plus.rank(),
                minus.rank()
            )));
        }
        let splitting = Splitting::from_frames(&space_y, plus.basis(), minus.basis(), tol)
            .map_err(|e| Error::HypothesisFailed(format!("X± ∩ Y is not a splitting at s = {s}: {e}")))?;
        let restricted = CurvePoint { splitting: Arc::new(splitting), lambda: to_y(&p.lambda)?, mu: to_y(&p.mu)? };
        Ok((p, restricted))
    }
}

impl<C: SplitCurve + ?Sized> SplitCurve for OnSubspace<'_, C> {
    fn interval(&self) -> (f64, f64) {
        self.inner.interval()
    }
    fn at(&self, s: f64) -> Result<CurvePoint> {
        let (_, r) = self.restrict(s)?;
        generators_at(s, &r, &self.tol).map_err(|e| match e {
            Error::NotLagrangianAt { s, reason } => {
                Error::HypothesisFailed(format!("restricted pair is not Lagrangian at s = {s}: {reason}"))
            }
            Error::IndexNonZeroAt { s, index } => {
                Error::HypothesisFailed(format!("restricted pair has index {index} at s = {s}"))
            }
            other => other,
        })?;
        Ok(r)
    }
}

/// Mas in X against Mas of the intersections with Y.
pub fn maslov_embedding_check<C: SplitCurve + ?Sized>(
    curve: &C,
    y: &Frame,
    tol: &Tolerances,
    opts: &MaslovOptions,
) -> Result<MaslovEmbeddingReport> {
    let sub = OnSubspace { inner: curve, y, tol: *tol };
    let rx = maslov_index(curve, tol, opts)?;
    let ry = maslov_index(&sub, tol, opts)?;
    let mut ss: Vec<f64> = rx.flow.samples.iter().chain(ry.flow.samples.iter()).map(|p| p.s).collect();
    ss.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ss.dedup();
    let mut offsets = Vec::with_capacity(ss.len());
    for &s in &ss {
        let (full, part) = sub.restrict(s)?;
        let d = intersection_dim(&full, tol)? as i64 - intersection_dim(&part, tol)? as i64;
        offsets.push((s, d));
    }
    let offset = offsets[0].1;
    if let Some(&(s, d)) = offsets.iter().find(|x| x.1 != offset) {
        return Err(Error::HypothesisFailed(format!(
            "dim(λ∩µ) − dim(λ∩µ∩Y) changes from {offset} to {d} at s = {s}"
        )));
    }
    Ok(MaslovEmbeddingReport { mas_x: rx.value, mas_y: ry.value, offset: offset as usize, equal: rx.value == ry.value })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub value: i64,
    pub reversed: i64,
    /// Mas of the curve followed by its reverse.
    pub there_and_back: i64,
    pub reparametrized: i64,
    pub flip: FlipReport,
    pub boxplus: BoxplusReport,
    /// Mas after multiplying everything by a unimodular scalar.
    pub phase_natural: i64,
    pub all_hold: bool,
}

/// The property suite that needs nothing beyond the curve itself.
pub fn maslov_properties_check<C: SplitCurve + ?Sized>(curve: &C, tol: &Tolerances, opts: &MaslovOptions) -> Result<PropertyReport> {
    let value = maslov_index(curve, tol, opts)?.value;
    let rev = Reversed(curve);
    let reversed = maslov_index(&rev, tol, opts)?.value;
    let there_and_back = catenated_index(curve, &rev, tol, opts)?;
    let (_, reparametrized) = reparametrization_check(curve, tol, opts)?;
    let flip = flipping_check(curve, tol, opts)?;
    let boxplus = maslov_boxplus(curve, tol, opts)?;
    let n = curve.at(curve.interval().0)?.splitting.space().dim();
    let phase = num_complex::Complex64::from_polar(1.0, 0.7);
    let (_, phase_natural) = naturality_check(curve, move |_| CMatrix::identity(n, n) * phase, tol, opts)?;
    let all_hold = reversed == -value
        && there_and_back == 0
        && reparametrized == value
        && flip.holds
        && boxplus.all_equal
        && boxplus.index_equal
        && phase_natural == value;
    Ok(PropertyReport { value, reversed, there_and_back, reparametrized, flip, boxplus, phase_natural, all_hold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    fn loop_curve(sign: f64) -> impl SplitCurve {
        let t = Tolerances::default();
        let sp = SymplecticSpace::canonical(1, 1);
        let split = Arc::new(sp.compute_splitting(&t).unwrap());
        let metric = sp.metric().clone();
        FnCurve::new(0.0, 1.0, move |s| {
            let z = Complex64::from_polar(1.0, sign * 2.0 * PI * s);
            let lambda = Frame::span(&metric, &CMatrix::from_column_slice(2, 1, &[c(1.0, 0.0), z]), 1e-12)?;
            let mu = Frame::span(&metric, &CMatrix::from_column_slice(2, 1, &[c(1.0, 0.0), c(1.0, 0.0)]), 1e-12)?;
            Ok(CurvePoint { splitting: split.clone(), lambda, mu })
        })
    }

    fn t() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn loop_and_reverse_catenate_to_zero() {
        let o = MaslovOptions::default();
        let (p, m) = (loop_curve(1.0), loop_curve(-1.0));
        assert_eq!(catenated_index(&p, &m, &t(), &o).unwrap(), 0);
        let r = catenation_check(&p, 0.37, &t(), &o).unwrap();
        assert!(r.holds && r.whole == 1);
    }

    #[test]
    fn flipping_on_the_loop() {
        let f = flipping_check(&loop_curve(1.0), &t(), &MaslovOptions::default()).unwrap();
        assert_eq!((f.mas_lm, f.mas_ml, f.dim_start, f.dim_end), (1, -1, 1, 1));
        assert!(f.holds);
    }

    #[test]
    fn boxplus_triples() {
        let o = MaslovOptions::default();
        let r = maslov_boxplus(&loop_curve(1.0), &t(), &o).unwrap();
        assert_eq!((r.mas, r.mas_boxplus, r.mas_flipped), (1, 1, 1));
        assert!(r.index_equal);
        let r = maslov_boxplus(&loop_curve(-1.0), &t(), &o).unwrap();
        assert_eq!((r.mas, r.mas_boxplus, r.mas_flipped), (-1, -1, -1));
        let c0 = loop_curve(1.0);
        let fixed = FnCurve::new(0.0, 1.0, |_| c0.at(0.25));
        let r = maslov_boxplus(&fixed, &t(), &o).unwrap();
        assert_eq!((r.mas, r.mas_boxplus, r.mas_flipped), (0, 0, 0));
    }

    #[test]
    fn scalar_phase_is_natural() {
        let l = |_s: f64| CMatrix::identity(2, 2) * Complex64::from_polar(1.0, 0.9);
        let (a, b) = naturality_check(&loop_curve(1.0), l, &t(), &MaslovOptions::default()).unwrap();
        assert_eq!((a, b), (1, 1));
    }

    #[test]
    fn cayley_preserves_the_form() {
        let sp = SymplecticSpace::canonical(1, 1);
        let a = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.3), c(0.2, 0.1), c(-0.2, 0.1), c(0.0, -0.5)]);
        let l = cayley_symplectic(&sp, &a).unwrap();
        assert!(symplectic_defect(&sp, &l) < 1e-12);
    }

    #[test]
    fn full_property_suite_on_loop() {
        let r = maslov_properties_check(&loop_curve(1.0), &t(), &MaslovOptions::default()).unwrap();
        assert!(r.all_hold, "{r:?}");
    }

    #[test]
    fn homotopy_of_loops() {
        let tol = t();
        let sp = SymplecticSpace::canonical(1, 1);
        let split = Arc::new(sp.compute_splitting(&tol).unwrap());
        let metric = sp.metric().clone();
        let h = move |s: f64, r: f64| {
            let phase = 2.0 * PI * (s + 0.3 * r * (PI * s).sin());
            let z = Complex64::from_polar(1.0, phase);
            let lambda = Frame::span(&metric, &CMatrix::from_column_slice(2, 1, &[c(1.0, 0.0), z]), 1e-12)?;
            let mu = Frame::span(&metric, &CMatrix::from_column_slice(2, 1, &[c(1.0, 0.0), c(1.0, 0.0)]), 1e-12)?;
            Ok(CurvePoint { splitting: split.clone(), lambda, mu })
        };
        let r = homotopy_check(h, (0.0, 1.0), (0.0, 1.0), &tol, &MaslovOptions::default()).unwrap();
        assert!(r.holds);
        assert_eq!((r.bottom, r.top, r.left, r.right), (1, 1, 0, 0));
    }
}
