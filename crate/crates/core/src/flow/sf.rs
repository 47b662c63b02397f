use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::admissible::{find_domain, nu, valid_for, TestDomain};
use super::curve::CoorientedCurve;
use super::matching::bottleneck;
use super::Operator;
use crate::error::{Error, Result};
use crate::linalg::{self, Frame, Tolerances};

/// A family s ↦ A_s that can be evaluated at any parameter in its interval.
///
/// Evaluation may run on several threads at once.
pub trait Family: Sync {
    fn interval(&self) -> (f64, f64);
    fn at(&self, s: f64) -> Result<Operator>;
}

/// A family given by a closure.
pub struct FnFamily<F> {
    a: f64,
    b: f64,
    f: F,
}

impl<F> FnFamily<F>
where
    F: Fn(f64) -> Result<Operator> + Sync,
{
    pub fn new(a: f64, b: f64, f: F) -> Self {
        FnFamily { a, b, f }
    }
}

impl<F> Family for FnFamily<F>
where
    F: Fn(f64) -> Result<Operator> + Sync,
{
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn at(&self, s: f64) -> Result<Operator> {
        (self.f)(s)
    }
}

/// The restriction of a family to [a, b].
pub struct Subinterval<'a, T: Family + ?Sized> {
    pub inner: &'a T,
    pub a: f64,
    pub b: f64,
}

impl<T: Family + ?Sized> Family for Subinterval<'_, T> {
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn at(&self, s: f64) -> Result<Operator> {
        self.inner.at(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowOptions {
    /// Points of the initial uniform grid, end points included.
    pub samples: usize,
    /// Maximum bisection depth below the initial grid.
    pub refine_max: usize,
    /// Largest admissible half-height of a test box.
    pub w_max: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions { samples: 33, refine_max: 20, w_max: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub start: f64,
    pub end: f64,
    /// The box N used on the segment; None when no eigenvalue comes near ℓ.
    pub triple: Option<TestDomain>,
    pub rank_start: usize,
    pub rank_end: usize,
    pub contribution: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowSample {
    pub s: f64,
    pub eigenvalues: Vec<Complex64>,
    pub nu: usize,
    /// rank P_{N⁻} for the triple of `segment_id`.
    pub rank_minus: usize,
    pub segment_id: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowResult {
    pub total: i64,
    pub segments: Vec<SegmentRecord>,
    /// ν_ℓ(A_s) at each partition point.
    pub nu_trace: Vec<(f64, usize)>,
    pub samples: Vec<FlowSample>,
    /// Number of segments that had to be bisected.
    pub refined_total: usize,
}

struct Point {
    s: f64,
    eig: Vec<Complex64>,
}

fn evaluate<F: Family + ?Sized>(family: &F, s: f64, curve: &CoorientedCurve, tol: &Tolerances) -> Result<Point> {
    let op = family.at(s)?;
    let eig = op
        .spectrum()?
        .ok_or_else(|| Error::NotAdmissibleAt { s, reason: "spectrum is the whole plane".into() })?;
    let (lo, hi) = curve.t_range();
    for &z in &eig {
        let (t, d) = curve.coords(z);
        let at_end = (t - lo).abs() <= tol.cross_tol || (t - hi).abs() <= tol.cross_tol;
        if d.abs() <= tol.cross_tol && at_end {
            return Err(Error::NotAdmissibleAt { s, reason: format!("eigenvalue {z} sits at an end point of ℓ") });
        }
    }
    Ok(Point { s, eig })
}

struct Ctx<'a, F: ?Sized> {
    family: &'a F,
    curve: &'a CoorientedCurve,
    tol: &'a Tolerances,
    opts: &'a FlowOptions,
}

/// A triple for the segment between two spectra, with its contribution.
fn segment_triple(
    ctx: &Ctx<'_, impl Family + ?Sized>,
    e0: &[Complex64],
    e1: &[Complex64],
) -> std::result::Result<(Option<TestDomain>, i64), String> {
    let (m, _) = bottleneck(e0, e1).ok_or("number of finite eigenvalues changes")?;
    let dom = find_domain(ctx.curve, &[e0, e1], m, ctx.tol.cross_tol, ctx.opts.w_max, None)?;
    Ok((dom, contribution(ctx, dom.as_ref(), e0, e1)))
}

fn contribution(ctx: &Ctx<'_, impl Family + ?Sized>, dom: Option<&TestDomain>, e0: &[Complex64], e1: &[Complex64]) -> i64 {
    match dom {
        None => 0,
        Some(d) => {
            d.count_minus(ctx.curve, e0, ctx.tol.cross_tol) as i64 - d.count_minus(ctx.curve, e1, ctx.tol.cross_tol) as i64
        }
    }
}

/// Whether `dom` also serves both halves of a segment split at `mid`.
fn halves_agree(
    ctx: &Ctx<'_, impl Family + ?Sized>,
    dom: Option<&TestDomain>,
    coarse: i64,
    p0: &Point,
    mid: &Point,
    p1: &Point,
) -> std::result::Result<(), String> {
    let (t0, c0) = segment_triple(ctx, &p0.eig, &mid.eig)?;
    let (t1, c1) = segment_triple(ctx, &mid.eig, &p1.eig)?;
    if c0 + c1 != coarse {
        return Err(format!("halves contribute {c0} + {c1}, whole segment {coarse}"));
    }
    if let Some(d) = dom {
        for (a, b) in [(&p0.eig, &mid.eig), (&mid.eig, &p1.eig)] {
            let m = bottleneck(a, b).map(|x| x.0).ok_or("number of finite eigenvalues changes")?;
            if !valid_for(d, ctx.curve, &[a, b], m, ctx.tol.cross_tol) {
                return Err("triple is not valid on a half segment".into());
            }
        }
    } else if t0.is_some() || t1.is_some() {
        let near = t0.is_some_and(|d| contribution(ctx, Some(&d), &p0.eig, &mid.eig) != 0)
            || t1.is_some_and(|d| contribution(ctx, Some(&d), &mid.eig, &p1.eig) != 0);
        if near {
            return Err("spectrum approaches ℓ inside the segment".into());
        }
    }
    Ok(())
}

fn process<F: Family + ?Sized>(
    ctx: &Ctx<'_, F>,
    p0: Point,
    p1: Point,
    depth: usize,
    out: &mut Vec<(SegmentRecord, Point)>,
    refined: &mut usize,
) -> Result<Point> {
    let s_mid = 0.5 * (p0.s + p1.s);
    let mid = evaluate(ctx.family, s_mid, ctx.curve, ctx.tol)?;
    let verdict = segment_triple(ctx, &p0.eig, &p1.eig)
        .and_then(|(dom, c)| halves_agree(ctx, dom.as_ref(), c, &p0, &mid, &p1).map(|_| (dom, c)));
    match verdict {
        Ok((dom, c)) => {
            let (rank_start, rank_end) = match &dom {
                None => (0, 0),
                Some(d) => (
                    d.count_minus(ctx.curve, &p0.eig, ctx.tol.cross_tol),
                    d.count_minus(ctx.curve, &p1.eig, ctx.tol.cross_tol),
                ),
            };
            let rec = SegmentRecord { start: p0.s, end: p1.s, triple: dom, rank_start, rank_end, contribution: c };
            out.push((rec, p0));
            Ok(p1)
        }
        Err(reason) => {
            if depth >= ctx.opts.refine_max {
                return Err(Error::RefinementExceeded { start: p0.s, end: p1.s, reason });
            }
            *refined += 1;
            let s1 = p1.s;
            let next = process(ctx, p0, mid, depth + 1, out, refined)?;
            debug_assert!(next.s < s1);
            process(ctx, next, p1, depth + 1, out, refined)
        }
    }
}

/// SF_ℓ of the family on a uniform initial grid with adaptive bisection.
pub fn spectral_flow<F: Family + ?Sized>(
    family: &F,
    curve: &CoorientedCurve,
    tol: &Tolerances,
    opts: &FlowOptions,
) -> Result<FlowResult> {
    let (a, b) = family.interval();
    let n = opts.samples.max(2);
    let grid: Vec<f64> = (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect();
    spectral_flow_on_grid(family, curve, tol, opts, &grid)
}

/// SF_ℓ starting from the given increasing grid, which must begin and end at the interval ends.
pub fn spectral_flow_on_grid<F: Family + ?Sized>(
    family: &F,
    curve: &CoorientedCurve,
    tol: &Tolerances,
    opts: &FlowOptions,
    grid: &[f64],
) -> Result<FlowResult> {
    tol.validate()?;
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::DimensionMismatch("grid must be strictly increasing with at least two points".into()));
    }
    let points: Vec<Point> = grid.par_iter().map(|&s| evaluate(family, s, curve, tol)).collect::<Result<_>>()?;
    let ctx = Ctx { family, curve, tol, opts };
    let mut out = Vec::new();
    let mut refined = 0;
    let mut iter = points.into_iter();
    let mut cur = iter.next().expect("grid has points");
    for next in iter {
        cur = process(&ctx, cur, next, 0, &mut out, &mut refined)?;
    }
    let last = cur;
    let total = out.iter().map(|(r, _)| r.contribution).sum();
    let mut samples = Vec::with_capacity(out.len() + 1);
    let mut segments = Vec::with_capacity(out.len());
    for (k, (rec, p)) in out.into_iter().enumerate() {
        samples.push(FlowSample {
            s: p.s,
            nu: nu(curve, &p.eig, tol.cross_tol),
            eigenvalues: p.eig,
            rank_minus: rec.rank_start,
            segment_id: k,
        });
        segments.push(rec);
    }
    let last_seg = segments.last().expect("at least one segment");
    samples.push(FlowSample {
        s: last.s,
        nu: nu(curve, &last.eig, tol.cross_tol),
        rank_minus: last_seg.rank_end,
        segment_id: segments.len() - 1,
        eigenvalues: last.eig,
    });
    let nu_trace = samples.iter().map(|p| (p.s, p.nu)).collect();
    Ok(FlowResult { total, segments, nu_trace, samples, refined_total: refined })
}

/// Recompute the flow on an unrelated, finer grid and compare the totals.
pub fn check_partition_independence<F: Family + ?Sized>(
    family: &F,
    curve: &CoorientedCurve,
    tol: &Tolerances,
    opts: &FlowOptions,
) -> Result<(FlowResult, FlowResult)> {
    let coarse = spectral_flow(family, curve, tol, opts)?;
    let (a, b) = family.interval();
    let n = 2 * opts.samples.max(2) + 1;
    // Interior points jittered by a golden-ratio sequence so no grid point is shared except the ends.
    let phi = 0.618_033_988_749_895;
    let mut grid: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 || k == n - 1 {
                k as f64 / (n - 1) as f64
            } else {
                let jitter = ((k as f64 * phi).fract() - 0.5) * 0.6;
                (k as f64 + jitter) / (n - 1) as f64
            }
        })
        .map(|u| a + (b - a) * u)
        .collect();
    grid.dedup();
    let fine = spectral_flow_on_grid(family, curve, tol, opts, &grid)?;
    if coarse.total != fine.total {
        return Err(Error::PartitionDependence { coarse: coarse.total, refined: fine.total });
    }
    Ok((coarse, fine))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub sf_y: i64,
    pub sf_x: i64,
    /// ν_ℓ(A_s) − ν_ℓ(A_s|X) on every parameter used by either flow.
    pub m_trace: Vec<(f64, i64)>,
    pub m: i64,
    pub equal: bool,
}

struct Restricted<'a, F: ?Sized> {
    inner: &'a F,
    x: &'a Frame,
}

fn restrict(op: Operator, x: &Frame, s: f64) -> Result<(linalg::CMatrix, linalg::CMatrix)> {
    let Operator::Matrix(a) = op else {
        return Err(Error::HypothesisFailed(format!("embedding check needs matrices, got a relation at s = {s}")));
    };
    let q = x.basis();
    let g = x.metric().gram_matrix();
    if a.nrows() != q.nrows() {
        return Err(Error::DimensionMismatch("subspace and operator live in different spaces".into()));
    }
    let aq = &a * q;
    let coords = q.adjoint() * g * &aq;
    let resid = &aq - q * &coords;
    let scale = linalg::norm2(&a).max(1e-300);
    let defect = linalg::norm2(&x.metric().whiten(&resid)) / scale;
    if defect > 1e-8 {
        return Err(Error::NotInvariant(defect));
    }
    Ok((a, coords))
}

impl<F: Family + ?Sized> Family for Restricted<'_, F> {
    fn interval(&self) -> (f64, f64) {
        self.inner.interval()
    }
    fn at(&self, s: f64) -> Result<Operator> {
        restrict(self.inner.at(s)?, self.x, s).map(|(_, r)| Operator::Matrix(r))
    }
}

/// SF of a family on Y against SF of its restriction to an invariant subspace X.
pub fn sf_embedding_check<F: Family + ?Sized>(
    family: &F,
    x: &Frame,
    curve: &CoorientedCurve,
    tol: &Tolerances,
    opts: &FlowOptions,
) -> Result<EmbeddingReport> {
    let (a, b) = family.interval();
    let n = opts.samples.max(2);
    // Invariance is checked on the grid before any flow is attempted.
    let grid: Vec<f64> = (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect();
    grid.par_iter().try_for_each(|&s| restrict(family.at(s)?, x, s).map(|_| ()))?;
    let rf = Restricted { inner: family, x };
    let fy = spectral_flow(family, curve, tol, opts)?;
    let fx = spectral_flow(&rf, curve, tol, opts)?;
    let mut ss: Vec<f64> = fy.samples.iter().chain(fx.samples.iter()).map(|p| p.s).collect();
    ss.sort_by(|p, q| p.partial_cmp(q).unwrap());
    ss.dedup();
    let m_trace: Vec<(f64, i64)> = ss
        .par_iter()
        .map(|&s| {
            let (full, part) = restrict(family.at(s)?, x, s)?;
            let ny = nu(curve, &linalg::eigenvalues(&full)?, tol.cross_tol) as i64;
            let nx = nu(curve, &linalg::eigenvalues(&part)?, tol.cross_tol) as i64;
            Ok((s, ny - nx))
        })
        .collect::<Result<_>>()?;
    let m = m_trace[0].1;
    if m_trace.iter().any(|&(_, v)| v != m) {
        return Err(Error::NonConstantM(m_trace));
    }
    Ok(EmbeddingReport { sf_y: fy.total, sf_x: fx.total, m_trace, m, equal: fy.total == fx.total })
}
