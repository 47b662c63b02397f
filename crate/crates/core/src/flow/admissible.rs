use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::curve::CoorientedCurve;
use super::Operator;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, Tolerances};

/// A box N = {t_lo < t < t_hi, |d| < w} in the (t, d) coordinates of ℓ.
///
/// N⁰ = N ∩ ℓ (within the crossing tolerance), and N^± are the parts of N on
/// the positive and negative side of the co-orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestDomain {
    pub t_lo: f64,
    pub t_hi: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Outside,
    Plus,
    Zero,
    Minus,
}

impl TestDomain {
    pub fn region(&self, curve: &CoorientedCurve, z: Complex64, cross_tol: f64) -> Region {
        let (t, d) = curve.coords(z);
        if !(t > self.t_lo && t < self.t_hi && d.abs() < self.w) {
            Region::Outside
        } else if d.abs() <= cross_tol {
            Region::Zero
        } else if d < 0.0 {
            Region::Minus
        } else {
            Region::Plus
        }
    }

    /// Distance from z to ∂N, measured in (t, d) coordinates.
    pub fn boundary_distance(&self, curve: &CoorientedCurve, z: Complex64) -> f64 {
        let (t, d) = curve.coords(z);
        let inside_t = t > self.t_lo && t < self.t_hi;
        let inside_d = d.abs() < self.w;
        if inside_t && inside_d {
            (t - self.t_lo).min(self.t_hi - t).min(self.w - d.abs())
        } else {
            let dt = if inside_t { 0.0 } else { (self.t_lo - t).max(t - self.t_hi).max(0.0) };
            let dd = if inside_d { 0.0 } else { d.abs() - self.w };
            if dt == 0.0 && dd == 0.0 {
                // On the boundary itself.
                0.0
            } else {
                (dt * dt + dd * dd).sqrt()
            }
        }
    }

    /// rank P_{N⁻}: eigenvalues (with repetition) in N⁻.
    pub fn count_minus(&self, curve: &CoorientedCurve, zs: &[Complex64], cross_tol: f64) -> usize {
        zs.iter().filter(|&&z| self.region(curve, z, cross_tol) == Region::Minus).count()
    }

    pub fn count_zero(&self, curve: &CoorientedCurve, zs: &[Complex64], cross_tol: f64) -> usize {
        zs.iter().filter(|&&z| self.region(curve, z, cross_tol) == Region::Zero).count()
    }
}

/// ν_ℓ: eigenvalues within `cross_tol` of ℓ.
pub fn nu(curve: &CoorientedCurve, zs: &[Complex64], cross_tol: f64) -> usize {
    zs.iter().filter(|&&z| curve.on_curve(z, cross_tol)).count()
}

/// Eigenvalues within `reach` of ℓ whose t-coordinate lies in the (slightly widened) range of ℓ.
fn near_curve(curve: &CoorientedCurve, pts: &[(f64, f64)], reach: f64) -> Vec<(f64, f64)> {
    let (lo, hi) = curve.t_range();
    pts.iter().copied().filter(|&(t, d)| d.abs() <= reach && t > lo - reach && t < hi + reach).collect()
}

/// Find a box around every eigenvalue that is within `m + cross_tol` of ℓ,
/// keeping all eigenvalues of all `sets` at distance greater than
/// `m + cross_tol` from its boundary.
///
/// Returns Ok(None) when nothing is close to ℓ, and Err with a reason when no
/// box with w ≤ w_max exists.
pub(crate) fn find_domain(
    curve: &CoorientedCurve,
    sets: &[&[Complex64]],
    m: f64,
    cross_tol: f64,
    w_max: f64,
    t_window: Option<(f64, f64)>,
) -> std::result::Result<Option<TestDomain>, String> {
    let margin = m + cross_tol;
    let pts: Vec<(f64, f64)> = sets.iter().flat_map(|s| s.iter().map(|&z| curve.coords(z))).collect();
    let must = near_curve(curve, &pts, margin);
    if must.is_empty() {
        return Ok(None);
    }
    if 2.0 * m >= w_max {
        return Err(format!("eigenvalues move by {m:.3e}, too far for a window of width {w_max}"));
    }
    let (range_lo, range_hi) = match t_window {
        Some((a, b)) => {
            let (lo, hi) = curve.t_range();
            (a.max(lo), b.min(hi))
        }
        None => curve.t_range(),
    };
    let t_min = must.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let t_max = must.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if t_min - 2.0 * margin <= range_lo || t_max + 2.0 * margin >= range_hi {
        return Err(format!("eigenvalue near ℓ at t in [{t_min:.6}, {t_max:.6}] is too close to an end of the allowed range"));
    }
    let strip: Vec<(f64, f64)> = pts.iter().copied().filter(|p| p.1.abs() < w_max + margin).collect();
    let reach = 4.0 * w_max;
    let t_lo = edge(&strip, t_min, margin, range_lo.max(t_min - reach), -1.0)
        .ok_or("no gap for the lower edge of the window")?;
    let t_hi = edge(&strip, t_max, margin, range_hi.min(t_max + reach), 1.0)
        .ok_or("no gap for the upper edge of the window")?;
    let must_d = must.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let w_lo = (must_d + margin).max(2.0 * m);
    let mut blockers: Vec<f64> = strip
        .iter()
        .filter(|p| p.0 > t_lo - margin && p.0 < t_hi + margin)
        .map(|p| p.1.abs())
        .filter(|&d| d + margin > w_lo)
        .collect();
    blockers.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut lower = w_lo;
    let mut w = None;
    for &b in blockers.iter().chain(std::iter::once(&f64::INFINITY)) {
        let hi = (b - margin).min(w_max);
        if hi > lower {
            w = Some(if b.is_finite() { 0.5 * (lower + hi) } else { 0.5 * (lower + w_max).max(lower) });
            break;
        }
        lower = lower.max(b + margin);
        if lower >= w_max {
            break;
        }
    }
    let w = w.ok_or("no horizontal gap below w_max")?;
    let dom = TestDomain { t_lo, t_hi, w };
    if !valid_for(&dom, curve, sets, m, cross_tol) {
        return Err("constructed window fails the boundary check".into());
    }
    Ok(Some(dom))
}

/// A window edge beyond `anchor` in direction `dir` avoiding all strip t-values by more than `margin`.
fn edge(strip: &[(f64, f64)], anchor: f64, margin: f64, limit: f64, dir: f64) -> Option<f64> {
    let mut ts: Vec<f64> = strip.iter().map(|p| p.0).filter(|&t| dir * (t - anchor) > 0.0).collect();
    ts.sort_by(|a, b| (dir * a).partial_cmp(&(dir * b)).unwrap());
    let mut prev = anchor;
    for t in ts.into_iter().chain(std::iter::once(limit)) {
        let stop = dir * (t - limit) >= 0.0;
        let t = if stop { limit } else { t };
        if dir * (t - prev) > 2.0 * margin {
            let far = if stop && limit.is_infinite() { prev + dir * (4.0 * margin).max(1.0) } else { t };
            let mid = if far.is_finite() { 0.5 * (prev + far) } else { prev + dir * 1.0 };
            return Some(mid);
        }
        if stop {
            return None;
        }
        prev = t;
    }
    None
}

/// The window is valid for the segment: every eigenvalue close to ℓ is inside it
/// and every eigenvalue is farther than m + cross_tol from its boundary.
pub(crate) fn valid_for(dom: &TestDomain, curve: &CoorientedCurve, sets: &[&[Complex64]], m: f64, cross_tol: f64) -> bool {
    let margin = m + cross_tol;
    if 2.0 * m >= dom.w {
        return false;
    }
    let (lo, hi) = curve.t_range();
    if dom.t_lo <= lo || dom.t_hi >= hi {
        return false;
    }
    sets.iter().flat_map(|s| s.iter()).all(|&z| {
        let (t, d) = curve.coords(z);
        let near = d.abs() <= margin && t > lo - margin && t < hi + margin;
        let inside = dom.region(curve, z, cross_tol) != Region::Outside;
        dom.boundary_distance(curve, z) > margin && (!near || inside)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleReport {
    pub admissible: bool,
    /// ν_ℓ(A), the algebraic multiplicity of the spectrum on ℓ.
    pub nu: usize,
    /// A test domain N with σ(A) ∩ N = σ(A) ∩ ℓ; None when σ(A) misses ℓ.
    pub witness: Option<TestDomain>,
}

/// Admissibility of A with respect to ℓ, optionally with N confined to t in `t_window`.
pub fn check_admissible(
    op: &Operator,
    curve: &CoorientedCurve,
    tol: &Tolerances,
    t_window: Option<(f64, f64)>,
) -> Result<AdmissibleReport> {
    let spec = op.spectrum()?.ok_or_else(|| Error::NotAdmissible("spectrum is the whole plane".into()))?;
    let (lo, hi) = curve.t_range();
    let mut on = Vec::new();
    for &z in &spec {
        let (t, d) = curve.coords(z);
        if d.abs() <= tol.cross_tol && t > lo - tol.cross_tol && t < hi + tol.cross_tol {
            if t <= lo + tol.cross_tol || t >= hi - tol.cross_tol {
                return Err(Error::NotAdmissible(format!("eigenvalue {z} sits at an end point of ℓ")));
            }
            on.push(z);
        }
    }
    if let Some((a, b)) = t_window {
        if on.iter().any(|&z| {
            let t = curve.coords(z).0;
            t <= a || t >= b
        }) {
            let list: Vec<String> = on.iter().map(|z| format!("{z}")).collect();
            return Err(Error::NotAdmissible(format!(
                "spectrum on ℓ {{{}}} is not contained in the window t in ({a}, {b})",
                list.join(", ")
            )));
        }
    }
    let witness = find_domain(curve, &[&spec], 0.0, tol.cross_tol, 0.5, t_window).map_err(Error::NotAdmissible)?;
    if let Some(dom) = &witness {
        // σ(A) ∩ N must equal σ(A) ∩ ℓ.
        let stray = spec.iter().filter(|&&z| matches!(dom.region(curve, z, tol.cross_tol), Region::Plus | Region::Minus));
        if let Some(z) = stray.clone().next() {
            let d = curve.coords(*z).1.abs();
            let tight = TestDomain { w: d * 0.5, ..*dom };
            if tight.w <= tol.cross_tol || !valid_for(&tight, curve, &[&spec], 0.0, tol.cross_tol) {
                return Err(Error::NotAdmissible(format!("eigenvalue {z} accumulates at ℓ")));
            }
            return Ok(AdmissibleReport { admissible: true, nu: on.len(), witness: Some(shrink(tight, curve, &spec, tol)) });
        }
    }
    Ok(AdmissibleReport { admissible: true, nu: on.len(), witness })
}

fn shrink(mut dom: TestDomain, curve: &CoorientedCurve, spec: &[Complex64], tol: &Tolerances) -> TestDomain {
    while spec.iter().any(|&z| matches!(dom.region(curve, z, tol.cross_tol), Region::Plus | Region::Minus)) {
        dom.w *= 0.5;
    }
    dom
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryReport {
    /// Algebraic multiplicity of the eigenvalue 1.
    pub nu: usize,
    pub dim_ker: usize,
    /// Radius of a disk around 1 whose closure meets the spectrum only at 1.
    pub radius: f64,
    /// max | |ζ| − 1 | over the spectrum.
    pub circle_defect: f64,
    pub unitarity_defect: f64,
}

/// For an h-unitary A, isolate the eigenvalue 1 and compare ν with dim ker(A − I).
pub fn check_unitary_admissible(a: &CMatrix, h: &CMatrix, tol: &Tolerances) -> Result<UnitaryReport> {
    let n = linalg::check_square(a, "operator")?;
    if h.shape() != (n, n) {
        return Err(Error::DimensionMismatch("inner product and operator differ in size".into()));
    }
    let hn = linalg::norm2(h).max(1e-300);
    let unitarity_defect = linalg::norm2(&(a.adjoint() * h * a - h)) / hn;
    if unitarity_defect > 1e-8 {
        return Err(Error::NotUnitary(unitarity_defect));
    }
    let spec = linalg::eigenvalues(a)?;
    let circle_defect = spec.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    let one = c(1.0, 0.0);
    let nu = spec.iter().filter(|&&z| (z - one).norm() <= tol.cross_tol).count();
    let gap = spec.iter().map(|&z| (z - one).norm()).filter(|&d| d > tol.cross_tol).fold(f64::INFINITY, f64::min);
    let radius = (0.5 * gap).min(0.5);
    let shifted = a - CMatrix::identity(n, n);
    let scale = linalg::norm2(a).max(1.0);
    let dim_ker = n - linalg::rank_abs(&shifted, 0.0, tol.cross_tol * scale);
    Ok(UnitaryReport { nu, dim_ker, radius, circle_defect, unitarity_defect })
}
