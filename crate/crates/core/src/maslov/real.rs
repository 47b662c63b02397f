use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::curve::{CurvePoint, FnCurve};
use super::index::{generators_at, maslov_index, MaslovOptions};
use crate::error::{Error, Result};
use crate::flow::{spectral_flow_on_grid, CoorientedCurve, FlowResult, FnFamily, Operator};
use crate::lagrangian::v_inverse;
use crate::linalg::{self, c, CMatrix, Frame, Metric, Tolerances};
use crate::symplectic::{Splitting, SymplecticSpace};

pub type RMatrix = DMatrix<f64>;

/// H ⊗ C with ω(x, y) = ⟨Jx, y⟩ and the splitting H^± = {(I ∓ iJ)ζ}.
#[derive(Debug, Clone)]
pub struct Complexified {
    pub space: SymplecticSpace,
    pub splitting: Arc<Splitting>,
}

fn complex(m: &RMatrix) -> CMatrix {
    m.map(|x| c(x, 0.0))
}

fn check_structure(j: &RMatrix) -> Result<usize> {
    let n = j.nrows();
    if j.ncols() != n || n % 2 != 0 || n == 0 {
        return Err(Error::BadRealStructure(format!("J is {}x{}, expected 2m x 2m", j.nrows(), j.ncols())));
    }
    if !j.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("J"));
    }
    let sq = (j * j + RMatrix::identity(n, n)).abs().max();
    if sq > 1e-10 {
        return Err(Error::BadRealStructure(format!("J^2 + I has entries up to {sq:.3e}")));
    }
    let skew = (j + j.transpose()).abs().max();
    if skew > 1e-10 {
        return Err(Error::BadRealStructure(format!("J^t + J has entries up to {skew:.3e}")));
    }
    Ok(n / 2)
}

fn space_of(j: &RMatrix, tol: &Tolerances) -> Result<SymplecticSpace> {
    SymplecticSpace::new(Arc::new(Metric::identity(j.nrows())), complex(j), tol)
}

/// The complexification with H^± spanned by (I ∓ iJ)e_k/√2.
pub fn real_complexify(j: &RMatrix, tol: &Tolerances) -> Result<Complexified> {
    let n = check_structure(j)? * 2;
    let space = space_of(j, tol)?;
    let jc = complex(j);
    let id = CMatrix::identity(n, n);
    let scale = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let plus = Frame::span(space.metric(), &((&id - &jc * c(0.0, 1.0)) * scale), tol.rank_tol)?;
    let minus = Frame::span(space.metric(), &((&id + &jc * c(0.0, 1.0)) * scale), tol.rank_tol)?;
    let splitting = Arc::new(Splitting::from_frames(&space, plus.basis(), minus.basis(), tol)?);
    Ok(Complexified { space, splitting })
}

/// Orthonormal basis of the column span of a real matrix.
fn real_basis(m: &RMatrix, rank_tol: f64) -> RMatrix {
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max();
    let cols: Vec<_> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > rank_tol * smax)
        .map(|k| u.column(k).into_owned())
        .collect();
    RMatrix::from_columns(&cols)
}

fn real_lagrangian(j: &RMatrix, f: &RMatrix, m: usize, what: &str, rank_tol: f64) -> std::result::Result<RMatrix, String> {
    if f.nrows() != 2 * m || f.ncols() == 0 {
        return Err(format!("{what} frame is {}x{}", f.nrows(), f.ncols()));
    }
    let q = real_basis(f, rank_tol);
    if q.ncols() != m {
        return Err(format!("{what} has dimension {} != {m}", q.ncols()));
    }
    let iso = (q.transpose() * j * &q).abs().max();
    if iso > 1e-8 {
        return Err(format!("{what} is not isotropic (defect {iso:.3e})"));
    }
    Ok(q)
}

/// The complexified splitting with bases (I ∓ iJ)Λ_k/√2 for an orthonormal basis Λ of λ.
fn adapted_splitting(space: &SymplecticSpace, j: &RMatrix, lam: &RMatrix, tol: &Tolerances) -> Result<Arc<Splitting>> {
    let n = j.nrows();
    let jc = complex(j);
    let l = complex(lam);
    let id = CMatrix::identity(n, n);
    let scale = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let plus = (&id - &jc * c(0.0, 1.0)) * &l * scale;
    let minus = (&id + &jc * c(0.0, 1.0)) * &l * scale;
    Ok(Arc::new(Splitting::from_frames(space, &plus, &minus, tol)?))
}

/// S_λ(Ṽ) = φ_*(Ṽ)φ_*(Ṽ)ᵗ for the real generator Ṽ of µ with respect to λ ⊕ Jλ.
///
/// With M an orthonormal basis of µ, the k-th column of φ_*(Ṽ) is
/// (JΛ)ᵗM_k − iΛᵗM_k.
pub fn complex_generator(j: &RMatrix, lam: &RMatrix, mu: &RMatrix) -> CMatrix {
    let mx = lam.transpose() * mu;
    let my = (j * lam).transpose() * mu;
    let w = CMatrix::from_fn(mx.nrows(), mx.ncols(), |r, k| c(my[(r, k)], -mx[(r, k)]));
    &w * w.transpose()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BfResult {
    pub value: i64,
    pub flow: FlowResult,
    /// max ‖V_sU⁻¹ + conj(S_λ(Ṽ_s))‖ over the samples.
    pub identity_defect: f64,
    pub eps: f64,
}

/// Mas_BF{µ_s, λ}: SF of S_λ(Ṽ_s) through (−1 − ε, −1 + ε), co-oriented downward.
pub fn mas_bf<F>(j: &RMatrix, lambda: &RMatrix, mu: F, interval: (f64, f64), tol: &Tolerances, opts: &MaslovOptions) -> Result<BfResult>
where
    F: Fn(f64) -> Result<RMatrix> + Sync,
{
    let m = check_structure(j)?;
    let lam = real_lagrangian(j, lambda, m, "lambda", tol.rank_tol).map_err(Error::HypothesisFailed)?;
    let space = space_of(j, tol)?;
    let splitting = adapted_splitting(&space, j, &lam, tol)?;
    let mu = &mu;
    let lam_ref = &lam;
    let sample = move |s: f64| -> Result<(CMatrix, RMatrix)> {
        let q = real_lagrangian(j, &mu(s)?, m, "mu", tol.rank_tol).map_err(|reason| Error::NotLagrangianAt { s, reason })?;
        Ok((complex_generator(j, lam_ref, &q), q))
    };
    let eps = 0.25;
    let ell = CoorientedCurve::around_minus_one(eps);
    let family = FnFamily::new(interval.0, interval.1, move |s| sample(s).map(|(sm, _)| Operator::Matrix(sm)));
    let n = opts.flow.samples.max(2);
    let grid: Vec<f64> = (0..n).map(|k| interval.0 + (interval.1 - interval.0) * k as f64 / (n - 1) as f64).collect();
    let flow = spectral_flow_on_grid(&family, &ell, tol, &opts.flow, &grid)?;
    // V_sU⁻¹ = −conj(S_λ(Ṽ_s)) on each sample, in the adapted bases of H^±.
    let metric = space.metric().clone();
    let mut identity_defect: f64 = 0.0;
    for p in &flow.samples {
        let (sm, q) = sample(p.s)?;
        let pt = CurvePoint {
            splitting: splitting.clone(),
            lambda: Frame::span(&metric, &complex(&lam), tol.rank_tol)?,
            mu: Frame::span(&metric, &complex(&q), tol.rank_tol)?,
        };
        let (ug, vg) = generators_at(p.s, &pt, tol)?;
        let (uinv, _) = v_inverse(&ug)?;
        let vu = vg.full_matrix() * uinv;
        let defect = linalg::norm2(&(vu + sm.map(|z| z.conj())));
        if defect > 1e-8 {
            return Err(Error::GeneratorMismatch { s: p.s, defect });
        }
        identity_defect = identity_defect.max(defect);
    }
    Ok(BfResult { value: flow.total, flow, identity_defect, eps })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealComparison {
    /// Mas{λ ⊗ C, µ_s ⊗ C} in H ⊗ C with the splitting H^±.
    pub mas: i64,
    pub mas_bf: i64,
    pub identity_defect: f64,
    /// mas = −mas_bf.
    pub negated_equal: bool,
}

/// Both sides of the comparison between the complex Maslov index and Mas_BF, each by its own pipeline.
pub fn real_comparison<F>(j: &RMatrix, lambda: &RMatrix, mu: F, interval: (f64, f64), tol: &Tolerances, opts: &MaslovOptions) -> Result<RealComparison>
where
    F: Fn(f64) -> Result<RMatrix> + Sync,
{
    let bf = mas_bf(j, lambda, &mu, interval, tol, opts)?;
    let cx = real_complexify(j, tol)?;
    let metric = cx.space.metric().clone();
    let lam = Frame::span(&metric, &complex(lambda), tol.rank_tol)?;
    let split = cx.splitting.clone();
    let curve = FnCurve::new(interval.0, interval.1, move |s| {
        Ok(CurvePoint { splitting: split.clone(), lambda: lam.clone(), mu: Frame::span(&metric, &complex(&mu(s)?), tol.rank_tol)? })
    });
    let mas = maslov_index(&curve, tol, opts)?.value;
    Ok(RealComparison { mas, mas_bf: bf.value, identity_defect: bf.identity_defect, negated_equal: mas == -bf.value })
}

/// J = [[0, −I], [I, 0]] on R^{2m}.
pub fn standard_j(m: usize) -> RMatrix {
    let mut j = RMatrix::zeros(2 * m, 2 * m);
    for k in 0..m {
        j[(k, m + k)] = -1.0;
        j[(m + k, k)] = 1.0;
    }
    j
}
