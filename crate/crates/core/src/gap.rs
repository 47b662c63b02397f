//! Gap between subspaces, with intersections, sums and quotients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Frame, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub delta_mn: f64,
    pub delta_nm: f64,
    pub gap: f64,
}

/// Component of M's basis orthogonal to N, in whitened coordinates.
fn residual(m: &Frame, n: &Frame) -> CMatrix {
    let coef = n.coords(m.basis());
    m.metric().whiten(&(m.basis() - n.basis() * coef))
}

/// One-sided distance δ(M, N) = sup over unit x ∈ M of dist(x, N).
///
/// Computed as the largest singular value of (I − P_N) Q_M, i.e. the sine of
/// the largest principal angle. δ({0}, N) = 0 and δ(M, {0}) = 1 for M ≠ {0}.
pub fn delta(m: &Frame, n: &Frame) -> Result<f64> {
    m.same_space(n)?;
    if m.is_zero() {
        return Ok(0.0);
    }
    if n.is_zero() || m.rank() > n.rank() {
        return Ok(1.0);
    }
    Ok(linalg::norm2(&residual(m, n)).clamp(0.0, 1.0))
}

pub fn gap(m: &Frame, n: &Frame) -> Result<GapReport> {
    let delta_mn = delta(m, n)?;
    let delta_nm = delta(n, m)?;
    Ok(GapReport { delta_mn, delta_nm, gap: delta_mn.max(delta_nm) })
}

/// ‖P_M − P_N‖ in the operator norm of the metric.
pub fn projector_gap(m: &Frame, n: &Frame) -> Result<f64> {
    m.same_space(n)?;
    Ok(m.metric().op_norm(&(m.projector() - n.projector())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// For dim M = dim N = n and δ(N, M) < 1/√n, compare δ(M, N) with √n δ(N,M) / (1 − √n δ(N,M)).
pub fn estimate_delta_bound(m: &Frame, n: &Frame) -> Result<DeltaBound> {
    m.same_space(n)?;
    if m.rank() != n.rank() {
        return Err(Error::HypothesisFailed(format!("dim M = {} but dim N = {}", m.rank(), n.rank())));
    }
    let k = m.rank();
    let lhs = delta(m, n)?;
    if k == 0 {
        return Ok(DeltaBound { lhs, rhs: 0.0, holds: lhs <= 1e-12 });
    }
    let d = delta(n, m)?;
    let sn = (k as f64).sqrt();
    if sn * d >= 1.0 {
        return Err(Error::HypothesisFailed(format!("delta(N, M) = {d:.6} >= 1/sqrt({k})")));
    }
    let rhs = sn * d / (1.0 - sn * d);
    Ok(DeltaBound { lhs, rhs, holds: lhs <= rhs + 1e-12 })
}

/// M ∩ N as the kernel of (I − P_N) on ran P_M.
pub fn intersect_subspaces(m: &Frame, n: &Frame, tol: &Tolerances) -> Result<Frame> {
    m.same_space(n)?;
    if m.is_zero() || n.is_zero() {
        return Ok(Frame::empty(m.metric().clone()));
    }
    // Singular values of the residual are principal-angle sines, already scaled to [0, 1].
    let k = linalg::null_space_abs(&residual(m, n), 0.0, tol.rank_tol);
    if k.ncols() == 0 {
        return Ok(Frame::empty(m.metric().clone()));
    }
    Frame::span(m.metric(), &(m.basis() * k), tol.rank_tol)
}

pub fn sum_subspaces(m: &Frame, n: &Frame, tol: &Tolerances) -> Result<Frame> {
    m.same_space(n)?;
    Frame::span(m.metric(), &linalg::hstack(&[m.basis(), n.basis()]), tol.rank_tol)
}

/// Gap of M/Y and N/Y, realized as M ∩ Y^⊥ and N ∩ Y^⊥.
pub fn quotient_gap(y: &Frame, m: &Frame, n: &Frame, tol: &Tolerances) -> Result<f64> {
    y.same_space(m)?;
    y.same_space(n)?;
    let t = crate::symplectic::subspace_tol(tol);
    if delta(y, m)? >= t {
        return Err(Error::NotContaining("M"));
    }
    if delta(y, n)? >= t {
        return Err(Error::NotContaining("N"));
    }
    let mq = orthogonal_part(y, m, tol)?;
    let nq = orthogonal_part(y, n, tol)?;
    Ok(gap(&mq, &nq)?.gap)
}

fn orthogonal_part(y: &Frame, m: &Frame, tol: &Tolerances) -> Result<Frame> {
    let v = m.basis() - y.basis() * y.coords(m.basis());
    let target = m.rank() - y.rank();
    let f = Frame::span(m.metric(), &v, tol.rank_tol)?;
    if f.rank() == target {
        return Ok(f);
    }
    // Keep the dominant directions when rounding leaves spurious ones.
    let w = m.metric().whiten(&v);
    let svd = w.svd(true, false);
    let u = svd.u.expect("requested U");
    let cols: Vec<_> = (0..target).map(|i| u.column(i).into_owned()).collect();
    let q = if cols.is_empty() { CMatrix::zeros(m.ambient_dim(), 0) } else { CMatrix::from_columns(&cols) };
    Ok(Frame::from_orthonormal(m.metric().clone(), m.metric().unwhiten(&q)))
}

/// Equality of subspaces up to the gap threshold used throughout the crate.
pub fn same_subspace(m: &Frame, n: &Frame, tol: &Tolerances) -> Result<bool> {
    Ok(m.rank() == n.rank() && gap(m, n)?.gap < crate::symplectic::subspace_tol(tol))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::linalg::{real_matrix, Metric};

    fn fr(metric: &Arc<Metric>, rows: usize, cols: usize, v: &[f64]) -> Frame {
        Frame::span(metric, &real_matrix(rows, cols, v), 1e-9).unwrap()
    }

    #[test]
    fn gap_examples() {
        let m2 = Arc::new(Metric::identity(2));
        let e1 = fr(&m2, 2, 1, &[1.0, 0.0]);
        assert_eq!(gap(&e1, &e1).unwrap().gap, 0.0);
        let z = Frame::empty(m2.clone());
        let r = gap(&e1, &z).unwrap();
        assert_eq!((r.delta_mn, r.delta_nm, r.gap), (1.0, 0.0, 1.0));
        let d = fr(&m2, 2, 1, &[1.0, 1.0]);
        let g = gap(&e1, &d).unwrap().gap;
        assert!((g - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((projector_gap(&e1, &d).unwrap() - g).abs() < 1e-14);
    }

    #[test]
    fn delta_bound_examples() {
        let m2 = Arc::new(Metric::identity(2));
        let e1 = fr(&m2, 2, 1, &[1.0, 0.0]);
        let b = estimate_delta_bound(&e1, &e1).unwrap();
        assert_eq!((b.lhs, b.rhs, b.holds), (0.0, 0.0, true));
        let t: f64 = 0.1;
        let l = fr(&m2, 2, 1, &[t.cos(), t.sin()]);
        let b = estimate_delta_bound(&e1, &l).unwrap();
        assert!((b.lhs - t.sin()).abs() < 1e-14);
        assert!((b.rhs - t.sin() / (1.0 - t.sin())).abs() < 1e-13);
        assert!(b.holds);
    }

    #[test]
    fn delta_bound_hypothesis_failure() {
        // Three planes' worth of angle: every principal sine equals 0.6 ≥ 1/√3.
        let m8 = Arc::new(Metric::identity(8));
        let s: f64 = 0.6;
        let co = (1.0 - s * s).sqrt();
        let mut a = vec![0.0; 24];
        let mut b = vec![0.0; 24];
        for k in 0..3 {
            a[k * 3 + k] = 1.0;
            b[k * 3 + k] = co;
            b[(k + 3) * 3 + k] = s;
        }
        let m = fr(&m8, 8, 3, &a);
        let n = fr(&m8, 8, 3, &b);
        assert!((delta(&n, &m).unwrap() - s).abs() < 1e-12);
        assert!(matches!(estimate_delta_bound(&m, &n), Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn intersections_and_sums() {
        let m2 = Arc::new(Metric::identity(2));
        let e1 = fr(&m2, 2, 1, &[1.0, 0.0]);
        let e2 = fr(&m2, 2, 1, &[0.0, 1.0]);
        let t = Tolerances::default();
        assert_eq!(intersect_subspaces(&e1, &e1, &t).unwrap().rank(), 1);
        assert_eq!(sum_subspaces(&e1, &e1, &t).unwrap().rank(), 1);
        assert!(intersect_subspaces(&e1, &e2, &t).unwrap().is_zero());
        assert_eq!(sum_subspaces(&e1, &e2, &t).unwrap().rank(), 2);
        let m4 = Arc::new(Metric::identity(4));
        let a = fr(&m4, 4, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let b = fr(&m4, 4, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let i = intersect_subspaces(&a, &b, &t).unwrap();
        let e2_4 = fr(&m4, 4, 1, &[0.0, 1.0, 0.0, 0.0]);
        assert!(gap(&i, &e2_4).unwrap().gap < 1e-12);
        let s = sum_subspaces(&a, &b, &t).unwrap();
        let e123 = fr(&m4, 4, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
        assert!(gap(&s, &e123).unwrap().gap < 1e-12);
    }

    #[test]
    fn quotient_examples() {
        let m3 = Arc::new(Metric::identity(3));
        let t = Tolerances::default();
        let y = fr(&m3, 3, 1, &[1.0, 0.0, 0.0]);
        let m = fr(&m3, 3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let n = fr(&m3, 3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
        let q = quotient_gap(&y, &m, &n, &t).unwrap();
        // Projected lines span(e₂) and span((e₂+e₃)/√2).
        assert!((q - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((q - gap(&m, &n).unwrap().gap).abs() < 1e-10);
        let z = Frame::empty(m3.clone());
        assert!((quotient_gap(&z, &m, &n, &t).unwrap() - gap(&m, &n).unwrap().gap).abs() < 1e-14);
        assert!(quotient_gap(&y, &m, &m, &t).unwrap() < 1e-14);
        let e3 = fr(&m3, 3, 1, &[0.0, 0.0, 1.0]);
        assert!(matches!(quotient_gap(&e3, &m, &n, &t), Err(Error::NotContaining("M"))));
    }
}
