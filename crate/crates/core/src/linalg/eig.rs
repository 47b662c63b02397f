use std::sync::Arc;

use nalgebra::linalg::Schur;
use num_complex::Complex64;

use super::{c, CMatrix, Frame, Metric};
use crate::error::{Error, Result};

/// One distinct eigenvalue with its algebraic multiplicity and generalized eigenspace.
#[derive(Debug, Clone)]
pub struct EigenCluster {
    pub value: Complex64,
    pub multiplicity: usize,
    pub space: Frame,
}

const MAX_SWEEPS: usize = 20_000;

/// Complex Schur form `M = Q T Q*`.
///
/// The QR iteration can stall on the machine-epsilon deflation test, so a
/// stalled run is retried with a looser threshold and then on a fixed
/// unitary similarity of `M`.
pub fn schur(m: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let n = m.nrows();
    for eps in [f64::EPSILON, 16.0 * f64::EPSILON] {
        if let Some(s) = Schur::try_new(m.clone(), eps, MAX_SWEEPS) {
            return Ok(s.unpack());
        }
    }
    // Householder reflector I - 2vv*/|v|^2 with a fixed irrational direction.
    let v = CMatrix::from_fn(n, 1, |i, _| c(1.0 + (i as f64 * 0.754_877_666).fract(), (i as f64 * 0.569_840_29).fract()));
    let h = CMatrix::identity(n, n) - &v * v.adjoint() * c(2.0 / v.norm_squared(), 0.0);
    let s = Schur::try_new(&h * m * &h, 16.0 * f64::EPSILON, 4 * MAX_SWEEPS).ok_or(Error::NoConvergence(n))?;
    let (q, t) = s.unpack();
    Ok((h * q, t))
}

/// All eigenvalues with repetition, from a complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let n = super::check_square(m, "eigenvalue input")?;
    if n == 0 {
        return Ok(Vec::new());
    }
    super::check_finite(m, "eigenvalue input")?;
    let (_, t) = schur(m)?;
    let scale = t.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)].norm() > 1e-13 * scale {
            // Unreduced 2x2 block: solve its characteristic polynomial.
            let (a, b, cc, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
            let tr = a + d;
            let det = a * d - b * cc;
            let disc = (tr * tr - det * 4.0).sqrt();
            out.push((tr + disc) * 0.5);
            out.push((tr - disc) * 0.5);
            i += 2;
        } else {
            out.push(t[(i, i)]);
            i += 1;
        }
    }
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NoConvergence(n));
    }
    Ok(out)
}

/// Distinct eigenvalues with multiplicities and generalized eigenspaces.
///
/// Eigenvalues closer than `1e-6 * max(1, |M|)` are merged into one cluster,
/// whose generalized eigenspace is the numerical kernel of `(M - c)^m`.
pub fn eig(m: &CMatrix) -> Result<Vec<EigenCluster>> {
    let n = super::check_square(m, "eigenvalue input")?;
    let vals = eigenvalues(m)?;
    let scale = super::norm2(m).max(1.0);
    let clusters = cluster(&vals, 1e-6 * scale);
    let metric = Arc::new(Metric::identity(n));
    let mut out = Vec::with_capacity(clusters.len());
    for members in clusters {
        let mult = members.len();
        let center = members.iter().fold(c(0.0, 0.0), |acc, &z| acc + z) / c(mult as f64, 0.0);
        let shifted = m - CMatrix::identity(n, n) * center;
        let mut power = shifted.clone();
        for _ in 1..mult {
            power = &power * &shifted;
        }
        let space = smallest_right_singular(&power, mult);
        out.push(EigenCluster { value: center, multiplicity: mult, space: Frame::from_orthonormal(metric.clone(), space) });
    }
    Ok(out)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eig(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let se = h.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let vals = idx.iter().map(|&i| se.eigenvalues[i]).collect();
    let vecs = CMatrix::from_columns(&idx.iter().map(|&i| se.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    (vals, vecs)
}

fn cluster(vals: &[Complex64], tol: f64) -> Vec<Vec<Complex64>> {
    let n = vals.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut Vec<usize>, i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (vals[i] - vals[j]).norm() <= tol {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(vals[i]),
            None => groups.push((r, vec![vals[i]])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

fn smallest_right_singular(a: &CMatrix, k: usize) -> CMatrix {
    let n = a.ncols();
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let cols: Vec<_> = (n - k..n).map(|i| vt.row(i).adjoint()).collect();
    CMatrix::from_columns(&cols)
}
