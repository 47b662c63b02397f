//! Random test objects: unitary and positive matrices, h-unitary operators,
//! and curves of Lagrangian pairs in non-canonical symplectic spaces.

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{self, c, hermitian_eig, CMatrix, Frame, Metric, Tolerances};
use crate::maslov::{CurvePoint, RMatrix, SplitCurve};
use crate::symplectic::SymplecticSpace;

pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn real_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> RMatrix {
    RMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Haar-distributed unitary matrix.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = gaussian(n, n, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        (0..n).map(|k| {
            let d = r[(k, k)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                c(1.0, 0.0)
            }
        }),
    ));
    q * phases
}

pub fn orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMatrix {
    let qr = real_gaussian(n, n, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let signs = RMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, (0..n).map(|k| r[(k, k)].signum())));
    q * signs
}

pub fn hermitian<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> CMatrix {
    let a = gaussian(n, n, rng);
    (&a + a.adjoint()) * c(0.5 * scale, 0.0)
}

/// Hermitian positive definite with eigenvalues uniform in [lo, hi].
pub fn hpd<R: Rng + ?Sized>(n: usize, lo: f64, hi: f64, rng: &mut R) -> CMatrix {
    let u = unitary(n, rng);
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, (0..n).map(|_| c(rng.random_range(lo..=hi), 0.0))));
    let g = &u * d * u.adjoint();
    (&g + g.adjoint()) * c(0.5, 0.0)
}

/// Q diag(e^{iθ_k}) Q* with the first `ones` phases equal to 0.
pub fn unitary_with_ones<R: Rng + ?Sized>(n: usize, ones: usize, rng: &mut R) -> CMatrix {
    let q = unitary(n, rng);
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        (0..n).map(|k| {
            if k < ones {
                c(1.0, 0.0)
            } else {
                // Keep the other eigenvalues visibly away from 1.
                num_complex::Complex64::from_polar(1.0, rng.random_range(0.3..(2.0 * std::f64::consts::PI - 0.3)))
            }
        }),
    ));
    &q * d * q.adjoint()
}

/// A = L^{−*} Q L* with G = LL*, so that A*GA = G; `ones` eigenvalues equal 1.
pub fn h_unitary<R: Rng + ?Sized>(metric: &Metric, ones: usize, rng: &mut R) -> CMatrix {
    let q = unitary_with_ones(metric.dim(), ones, rng);
    metric.cholesky_inv().adjoint() * q * metric.cholesky().adjoint()
}

/// exp(isH) for Hermitian H, from a stored eigendecomposition.
#[derive(Debug, Clone)]
pub struct PhaseFlow {
    vecs: CMatrix,
    vals: Vec<f64>,
}

impl PhaseFlow {
    pub fn new(h: &CMatrix) -> PhaseFlow {
        let (vals, vecs) = hermitian_eig(h);
        PhaseFlow { vecs, vals }
    }

    /// H with the given eigenvalues in a random eigenbasis.
    pub fn with_spectrum<R: Rng + ?Sized>(vals: &[f64], rng: &mut R) -> PhaseFlow {
        PhaseFlow { vecs: unitary(vals.len(), rng), vals: vals.to_vec() }
    }

    pub fn at(&self, s: f64) -> CMatrix {
        let n = self.vals.len();
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            self.vals.iter().map(|&v| num_complex::Complex64::from_polar(1.0, s * v)),
        ));
        &self.vecs * d * self.vecs.adjoint()
    }
}

/// A curve of Lagrangian pairs in C^{2p} with form Ω_s = T_s^{−*} Ω₀ T_s^{−1},
/// T_s = T(I + sE), Ω₀ = diag(iI, −iI), and a random inner product.
///
/// λ_s = T_s Γ(U₀ e^{isH_U}) and µ_s = T_s Γ(V₀ e^{isH_V}), graphs taken in the canonical coordinates.
#[derive(Debug, Clone)]
pub struct RandomLagrangianCurve {
    pub p: usize,
    pub metric: Arc<Metric>,
    pub t: CMatrix,
    pub e: CMatrix,
    pub u0: CMatrix,
    pub hu: PhaseFlow,
    pub v0: CMatrix,
    pub hv: PhaseFlow,
    pub tol: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRecipe {
    pub p: usize,
    /// Move the form and splitting along the curve.
    pub vary_form: bool,
    /// dim λ₀ ∩ µ₀.
    pub start_intersection: usize,
    /// Largest |eigenvalue| of H_U and H_V.
    pub speed: f64,
    /// Let µ move as well as λ.
    pub move_mu: bool,
    /// Phases end at multiples of 2π, so λ₁, µ₁ are T₁ applied to λ₀, µ₀ in canonical coordinates.
    pub closed: bool,
}

impl RandomLagrangianCurve {
    pub fn new<R: Rng + ?Sized>(shape: CurveRecipe, rng: &mut R) -> RandomLagrangianCurve {
        let p = shape.p;
        let n = 2 * p;
        let metric = Arc::new(Metric::new(hpd(n, 0.5, 2.0, rng)).expect("positive definite"));
        let svals = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, (0..n).map(|_| c(rng.random_range(0.7..1.4), 0.0))));
        let t = unitary(n, rng) * svals * unitary(n, rng);
        let e = if shape.vary_form { gaussian(n, n, rng) * c(0.15 / (n as f64).sqrt(), 0.0) } else { CMatrix::zeros(n, n) };
        let v0 = unitary(p, rng);
        let u0 = &v0 * unitary_with_ones(p, shape.start_intersection.min(p), rng);
        let vals = |rng: &mut R| -> Vec<f64> {
            (0..p)
                .map(|_| {
                    let v = rng.random_range(-shape.speed..shape.speed);
                    if shape.closed {
                        let tau = 2.0 * std::f64::consts::PI;
                        (v / tau).round() * tau
                    } else {
                        v
                    }
                })
                .collect()
        };
        let hu = PhaseFlow::with_spectrum(&vals(rng), rng);
        let hv = if shape.move_mu { PhaseFlow::with_spectrum(&vals(rng), rng) } else { PhaseFlow::with_spectrum(&vec![0.0; p], rng) };
        RandomLagrangianCurve { p, metric, t, e, u0, hu, v0, hv, tol: Tolerances::default() }
    }

    pub fn t_at(&self, s: f64) -> CMatrix {
        let n = 2 * self.p;
        &self.t * (CMatrix::identity(n, n) + &self.e * c(s, 0.0))
    }

    pub fn space_at(&self, s: f64) -> Result<SymplecticSpace> {
        let ts = self.t_at(s);
        let tinv = linalg::inverse(&ts).ok_or_else(|| Error::Degenerate("T_s is singular".into()))?;
        let omega0 = SymplecticSpace::canonical(self.p, self.p).omega().clone();
        let omega = tinv.adjoint() * omega0 * &tinv;
        let omega = (&omega - omega.adjoint()) * c(0.5, 0.0);
        SymplecticSpace::new(self.metric.clone(), omega, &self.tol)
    }

    fn graph(&self, ts: &CMatrix, u: &CMatrix) -> Result<Frame> {
        let p = self.p;
        let g = linalg::vstack(&[&CMatrix::identity(p, p), u]);
        Frame::span(&self.metric, &(ts * g), self.tol.rank_tol)
    }
}

impl SplitCurve for RandomLagrangianCurve {
    fn interval(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn at(&self, s: f64) -> Result<CurvePoint> {
        let space = self.space_at(s)?;
        let splitting = Arc::new(space.compute_splitting(&self.tol)?);
        let ts = self.t_at(s);
        let lambda = self.graph(&ts, &(&self.u0 * self.hu.at(s)))?;
        let mu = self.graph(&ts, &(&self.v0 * self.hv.at(s)))?;
        Ok(CurvePoint { splitting, lambda, mu })
    }
}

/// Random frame of rank k in the given metric.
pub fn frame<R: Rng + ?Sized>(metric: &Arc<Metric>, k: usize, rng: &mut R) -> Frame {
    let n = metric.dim();
    if k == 0 {
        return Frame::empty(metric.clone());
    }
    Frame::span(metric, &gaussian(n, k, rng), 1e-12).expect("generic vectors are independent")
}

/// Real rotation curve µ_s = O R_s µ₀ in R^{2m} with J = O J₀ Oᵗ, λ = O(Rᵐ ⊕ 0).
#[derive(Debug, Clone)]
pub struct RealRotationCurve {
    pub j: RMatrix,
    pub lambda: RMatrix,
    o: RMatrix,
    w0: CMatrix,
    flow: PhaseFlow,
}

/// The real 2m×2m matrix of a complex m×m matrix acting on x + iy.
pub fn realify(w: &CMatrix) -> RMatrix {
    let m = w.nrows();
    let mut r = RMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        for k in 0..m {
            let z = w[(i, k)];
            r[(i, k)] = z.re;
            r[(i, m + k)] = -z.im;
            r[(m + i, k)] = z.im;
            r[(m + i, m + k)] = z.re;
        }
    }
    r
}

impl RealRotationCurve {
    /// `start_on_lambda` makes µ₀ = λ.
    pub fn new<R: Rng + ?Sized>(m: usize, speed: f64, start_on_lambda: bool, rng: &mut R) -> RealRotationCurve {
        let o = orthogonal(2 * m, rng);
        let j = &o * crate::maslov::standard_j(m) * o.transpose();
        let mut base = RMatrix::zeros(2 * m, m);
        for k in 0..m {
            base[(k, k)] = 1.0;
        }
        let lambda = &o * &base;
        let w0 = if start_on_lambda { CMatrix::identity(m, m) } else { unitary(m, rng) };
        let vals: Vec<f64> = (0..m).map(|_| rng.random_range(-speed..speed)).collect();
        RealRotationCurve { j, lambda, o, w0, flow: PhaseFlow::with_spectrum(&vals, rng) }
    }

    pub fn mu(&self, s: f64) -> RMatrix {
        let m = self.w0.nrows();
        let w = self.flow.at(s) * &self.w0;
        let mut base = RMatrix::zeros(2 * m, m);
        for k in 0..m {
            base[(k, k)] = 1.0;
        }
        &self.o * realify(&w) * base
    }
}
