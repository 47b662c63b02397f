use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::curve::{CurvePoint, SplitCurve};
use crate::error::{Error, Result};
use crate::flow::{spectral_flow_on_grid, CoorientedCurve, Family, FlowOptions, FlowResult, Operator};
use crate::gap;
use crate::lagrangian::{ambient_block_operator, generator_of, pair_index, v_inverse, LagrangianGenerator};
use crate::linalg::{CMatrix, Frame, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MaslovOptions {
    pub flow: FlowOptions,
    /// Consecutive samples must satisfy ‖P_s − P_s'‖ < step and gaps of λ, µ below step.
    pub step: f64,
    /// Compute the UV⁻¹ route alongside the block operator.
    pub via_uv: bool,
}

impl Default for MaslovOptions {
    fn default() -> Self {
        MaslovOptions { flow: FlowOptions::default(), step: 0.5, via_uv: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaslovResult {
    pub value: i64,
    /// Spectral flow of the block operator family.
    pub flow: FlowResult,
    /// SF of U V⁻¹ on X⁻, when V is invertible along the whole curve.
    pub via_uv: Option<i64>,
    /// Why the UV⁻¹ route was skipped.
    pub uv_error: Option<String>,
    /// cond(J_s) on the continuity grid.
    pub cond_trace: Vec<(f64, f64)>,
    /// Bisections needed to make P, λ and µ step less than `step`.
    pub grid_refinements: usize,
    /// max | |ζ| − 1 | over the eigenvalues used by the flow.
    pub circle_defect: f64,
    pub interpolated: bool,
}

impl MaslovResult {
    pub fn routes_agree(&self) -> bool {
        self.via_uv.is_none_or(|v| v == self.value)
    }
}

/// Generators of λ_s and µ_s, after checking the pair is Lagrangian of index 0.
pub fn generators_at(s: f64, pt: &CurvePoint, tol: &Tolerances) -> Result<(LagrangianGenerator, LagrangianGenerator)> {
    let sp = &pt.splitting;
    let n = sp.space().dim();
    if pt.lambda.ambient_dim() != n || pt.mu.ambient_dim() != n {
        return Err(Error::DimensionMismatch(format!("frames at s = {s} do not live in the space")));
    }
    if sp.dim_plus() != sp.dim_minus() {
        return Err(Error::NotLagrangianAt {
            s,
            reason: format!("dim X+ = {} != dim X- = {}: no Lagrangian subspaces", sp.dim_plus(), sp.dim_minus()),
        });
    }
    let mut gens = Vec::with_capacity(2);
    for (name, f) in [("lambda", &pt.lambda), ("mu", &pt.mu)] {
        let g = generator_of(sp, f, tol).map_err(|e| Error::NotLagrangianAt { s, reason: format!("{name}: {e}") })?;
        if !g.full_domain() {
            return Err(Error::NotLagrangianAt {
                s,
                reason: format!("{name} is isotropic of dimension {} < {}", g.dom_dim(), sp.dim_plus()),
            });
        }
        gens.push(g);
    }
    let idx = pair_index(&pt.lambda, &pt.mu, tol)?;
    if idx.index != 0 {
        return Err(Error::IndexNonZeroAt { s, index: idx.index });
    }
    let vg = gens.pop().unwrap();
    let ug = gens.pop().unwrap();
    Ok((ug, vg))
}

struct BlockFamily<'a, C: ?Sized> {
    curve: &'a C,
    tol: &'a Tolerances,
}

impl<C: SplitCurve + ?Sized> Family for BlockFamily<'_, C> {
    fn interval(&self) -> (f64, f64) {
        self.curve.interval()
    }
    fn at(&self, s: f64) -> Result<Operator> {
        let pt = self.curve.at(s)?;
        let (ug, vg) = generators_at(s, &pt, self.tol)?;
        ambient_block_operator(&ug, &vg).map(Operator::Matrix).map_err(|e| match e {
            Error::VNotInvertible(_) => Error::VNotInvertibleAt(s),
            other => other,
        })
    }
}

struct UvFamily<'a, C: ?Sized> {
    curve: &'a C,
    tol: &'a Tolerances,
}

impl<C: SplitCurve + ?Sized> Family for UvFamily<'_, C> {
    fn interval(&self) -> (f64, f64) {
        self.curve.interval()
    }
    fn at(&self, s: f64) -> Result<Operator> {
        let pt = self.curve.at(s)?;
        let (ug, vg) = generators_at(s, &pt, self.tol)?;
        let (vinv, _) = v_inverse(&vg).map_err(|_| Error::VNotInvertibleAt(s))?;
        Ok(Operator::Matrix(ug.full_matrix() * vinv))
    }
}

/// The block operator [[0, U_s], [V_s⁻¹, 0]] at one parameter, in ambient coordinates.
pub fn block_operator_at<C: SplitCurve + ?Sized>(curve: &C, s: f64, tol: &Tolerances) -> Result<CMatrix> {
    match (BlockFamily { curve, tol }).at(s)? {
        Operator::Matrix(m) => Ok(m),
        Operator::Pencil(_) => unreachable!("block family yields matrices"),
    }
}

struct Snapshot {
    s: f64,
    p: CMatrix,
    lambda: Frame,
    mu: Frame,
    metric: Arc<crate::linalg::Metric>,
    cond: f64,
}

fn snapshot(pt: CurvePoint, s: f64) -> Snapshot {
    Snapshot {
        s,
        p: pt.splitting.proj_plus().clone(),
        metric: pt.splitting.space().metric().clone(),
        cond: pt.splitting.space().cond_j(),
        lambda: pt.lambda,
        mu: pt.mu,
    }
}

fn step_size(a: &Snapshot, b: &Snapshot, tol: &Tolerances) -> Result<f64> {
    let dp = a.metric.op_norm(&(&a.p - &b.p));
    let rebase = |f: &Frame| -> Result<Frame> {
        if Arc::ptr_eq(f.metric(), &a.metric) {
            Ok(f.clone())
        } else {
            f.with_metric(a.metric.clone(), tol.rank_tol)
        }
    };
    let dl = gap::gap(&a.lambda, &rebase(&b.lambda)?)?.gap;
    let dm = gap::gap(&a.mu, &rebase(&b.mu)?)?.gap;
    Ok(dp.max(dl).max(dm))
}

/// A grid on which consecutive splittings, λ's and µ's are all closer than `step`.
fn continuity_grid<C: SplitCurve + ?Sized>(curve: &C, tol: &Tolerances, opts: &MaslovOptions) -> Result<(Vec<Snapshot>, usize)> {
    let (a, b) = curve.interval();
    let n = opts.flow.samples.max(2);
    let grid: Vec<f64> = (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect();
    let snaps: Vec<Snapshot> = grid.par_iter().map(|&s| curve.at(s).map(|p| snapshot(p, s))).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(snaps.len());
    let mut refined = 0;
    let mut it = snaps.into_iter();
    let mut cur = it.next().unwrap();
    for next in it {
        cur = refine(curve, cur, next, 0, tol, opts, &mut out, &mut refined)?;
    }
    out.push(cur);
    Ok((out, refined))
}

#[allow(clippy::too_many_arguments)]
fn refine<C: SplitCurve + ?Sized>(
    curve: &C,
    a: Snapshot,
    b: Snapshot,
    depth: usize,
    tol: &Tolerances,
    opts: &MaslovOptions,
    out: &mut Vec<Snapshot>,
    refined: &mut usize,
) -> Result<Snapshot> {
    let d = step_size(&a, &b, tol)?;
    if d < opts.step {
        out.push(a);
        return Ok(b);
    }
    if depth >= opts.flow.refine_max {
        return Err(Error::RefinementExceeded {
            start: a.s,
            end: b.s,
            reason: format!("splitting or Lagrangians jump by {d:.3e}"),
        });
    }
    *refined += 1;
    let sm = 0.5 * (a.s + b.s);
    let mid = snapshot(curve.at(sm)?, sm);
    let m = refine(curve, a, mid, depth + 1, tol, opts, out, refined)?;
    refine(curve, m, b, depth + 1, tol, opts, out, refined)
}

/// Mas{λ_s, µ_s; P_s} as SF through (0, ∞), co-oriented upward, of the block operator family.
pub fn maslov_index<C: SplitCurve + ?Sized>(curve: &C, tol: &Tolerances, opts: &MaslovOptions) -> Result<MaslovResult> {
    tol.validate()?;
    let (snaps, grid_refinements) = continuity_grid(curve, tol, opts)?;
    let grid: Vec<f64> = snaps.iter().map(|x| x.s).collect();
    let cond_trace = snaps.iter().map(|x| (x.s, x.cond)).collect();
    let ell = CoorientedCurve::positive_real_axis();
    let flow = spectral_flow_on_grid(&BlockFamily { curve, tol }, &ell, tol, &opts.flow, &grid)?;
    let (via_uv, uv_error) = if opts.via_uv {
        match spectral_flow_on_grid(&UvFamily { curve, tol }, &ell, tol, &opts.flow, &grid) {
            Ok(r) => (Some(r.total), None),
            Err(e @ Error::VNotInvertibleAt(_)) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        }
    } else {
        (None, None)
    };
    let circle_defect = flow
        .samples
        .iter()
        .flat_map(|p| p.eigenvalues.iter())
        .map(|z| (z.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let interpolated = flow.samples.iter().any(|p| curve.interpolated(p.s));
    Ok(MaslovResult {
        value: flow.total,
        flow,
        via_uv,
        uv_error,
        cond_trace,
        grid_refinements,
        circle_defect,
        interpolated,
    })
}
