use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lagrangian::{generator_of, LagrangianGenerator};
use crate::linalg::{self, CMatrix, Frame, Tolerances};
use crate::symplectic::Splitting;

/// The data of a split curve at one parameter: ω_s and its splitting, λ_s and µ_s.
#[derive(Debug, Clone)]
pub struct CurvePoint {
    pub splitting: Arc<Splitting>,
    pub lambda: Frame,
    pub mu: Frame,
}

/// s ↦ (ω_s, X_s^±, λ_s, µ_s), evaluated on demand so refinement can ask for new samples.
pub trait SplitCurve: Sync {
    fn interval(&self) -> (f64, f64);
    fn at(&self, s: f64) -> Result<CurvePoint>;
    /// Whether the value at s is interpolated between given samples.
    fn interpolated(&self, _s: f64) -> bool {
        false
    }
}

pub struct FnCurve<F> {
    a: f64,
    b: f64,
    f: F,
}

impl<F> FnCurve<F>
where
    F: Fn(f64) -> Result<CurvePoint> + Sync,
{
    pub fn new(a: f64, b: f64, f: F) -> Self {
        FnCurve { a, b, f }
    }
}

impl<F> SplitCurve for FnCurve<F>
where
    F: Fn(f64) -> Result<CurvePoint> + Sync,
{
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn at(&self, s: f64) -> Result<CurvePoint> {
        (self.f)(s)
    }
}

/// A curve known only at sample points. Between samples λ and µ follow the
/// h-unitary geodesic between the generators at the two neighbouring samples,
/// taken in the splitting of the nearer sample.
pub struct SampledCurve {
    samples: Vec<(f64, CurvePoint)>,
    tol: Tolerances,
}

impl SampledCurve {
    pub fn new(samples: Vec<(f64, CurvePoint)>, tol: &Tolerances) -> Result<SampledCurve> {
        if samples.len() < 2 {
            return Err(Error::DimensionMismatch("a sampled curve needs at least two samples".into()));
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::DimensionMismatch("sample parameters must increase strictly".into()));
        }
        let n = samples[0].1.splitting.space().dim();
        if samples.iter().any(|(_, p)| p.splitting.space().dim() != n) {
            return Err(Error::DimensionMismatch("samples live in spaces of different dimension".into()));
        }
        Ok(SampledCurve { samples, tol: *tol })
    }

    pub fn samples(&self) -> &[(f64, CurvePoint)] {
        &self.samples
    }

    fn locate(&self, s: f64) -> std::result::Result<usize, (usize, f64)> {
        let scale = 1e-13 * (self.samples.last().unwrap().0 - self.samples[0].0).abs().max(1e-300);
        if let Some(k) = self.samples.iter().position(|(t, _)| (t - s).abs() <= scale) {
            return Ok(k);
        }
        let k = self.samples.iter().rposition(|(t, _)| *t < s).unwrap_or(0).min(self.samples.len() - 2);
        let (t0, t1) = (self.samples[k].0, self.samples[k + 1].0);
        Err((k, ((s - t0) / (t1 - t0)).clamp(0.0, 1.0)))
    }
}

impl SplitCurve for SampledCurve {
    fn interval(&self) -> (f64, f64) {
        (self.samples[0].0, self.samples.last().unwrap().0)
    }

    fn at(&self, s: f64) -> Result<CurvePoint> {
        match self.locate(s) {
            Ok(k) => Ok(self.samples[k].1.clone()),
            Err((k, tau)) => {
                let (p0, p1) = (&self.samples[k].1, &self.samples[k + 1].1);
                let splitting = if tau < 0.5 { p0.splitting.clone() } else { p1.splitting.clone() };
                let lambda = geodesic(&splitting, &p0.lambda, &p1.lambda, tau, &self.tol)?;
                let mu = geodesic(&splitting, &p0.mu, &p1.mu, tau, &self.tol)?;
                Ok(CurvePoint { splitting, lambda, mu })
            }
        }
    }

    fn interpolated(&self, s: f64) -> bool {
        self.locate(s).is_err()
    }
}

/// Lagrangian with generator U₀ (U₀*U₁)^τ, between the Lagrangians a and b.
fn geodesic(s: &Arc<Splitting>, a: &Frame, b: &Frame, tau: f64, tol: &Tolerances) -> Result<Frame> {
    let metric = s.space().metric().clone();
    let a = if Arc::ptr_eq(a.metric(), &metric) { a.clone() } else { a.with_metric(metric.clone(), tol.rank_tol)? };
    let b = if Arc::ptr_eq(b.metric(), &metric) { b.clone() } else { b.with_metric(metric, tol.rank_tol)? };
    let ua = full_generator(s, &a, tol)?;
    let ub = full_generator(s, &b, tol)?;
    let w = ua.adjoint() * &ub;
    let u = &ua * unitary_power(&w, tau)?;
    LagrangianGenerator::from_matrix(s.clone(), u)?.graph(tol)
}

fn full_generator(s: &Arc<Splitting>, f: &Frame, tol: &Tolerances) -> Result<CMatrix> {
    let g = generator_of(s, f, tol)?;
    if !g.full_domain() || s.dim_plus() != s.dim_minus() {
        return Err(Error::HypothesisFailed("interpolation needs Lagrangian samples".into()));
    }
    Ok(g.full_matrix())
}

/// W^τ for a unitary W, principal branch.
pub fn unitary_power(w: &CMatrix, tau: f64) -> Result<CMatrix> {
    let n = linalg::check_square(w, "unitary")?;
    if n == 0 {
        return Ok(w.clone());
    }
    let (q, t) = linalg::schur(w)?;
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        (0..n).map(|k| {
            let z = t[(k, k)];
            num_complex::Complex64::from_polar(1.0, tau * z.arg())
        }),
    ));
    Ok(&q * d * q.adjoint())
}

/// The curve run backwards.
pub struct Reversed<'a, C: SplitCurve + ?Sized>(pub &'a C);

impl<C: SplitCurve + ?Sized> SplitCurve for Reversed<'_, C> {
    fn interval(&self) -> (f64, f64) {
        self.0.interval()
    }
    fn at(&self, s: f64) -> Result<CurvePoint> {
        let (a, b) = self.0.interval();
        self.0.at(a + b - s)
    }
    fn interpolated(&self, s: f64) -> bool {
        let (a, b) = self.0.interval();
        self.0.interpolated(a + b - s)
    }
}

/// The curve restricted to [a, b].
pub struct Restricted<'a, C: SplitCurve + ?Sized> {
    pub inner: &'a C,
    pub a: f64,
    pub b: f64,
}

impl<C: SplitCurve + ?Sized> SplitCurve for Restricted<'_, C> {
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn at(&self, s: f64) -> Result<CurvePoint> {
        self.inner.at(s)
    }
    fn interpolated(&self, s: f64) -> bool {
        self.inner.interpolated(s)
    }
}

/// The curve precomposed with a monotone map φ of [a, b] onto the inner interval.
pub struct Reparametrized<'a, C: SplitCurve + ?Sized, F> {
    pub inner: &'a C,
    pub a: f64,
    pub b: f64,
    pub phi: F,
}

impl<C: SplitCurve + ?Sized, F: Fn(f64) -> f64 + Sync> SplitCurve for Reparametrized<'_, C, F> {
    fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn at(&self, s: f64) -> Result<CurvePoint> {
        self.inner.at((self.phi)(s))
    }
}

/// First curve followed by the second, the second shifted to start where the first ends.
pub struct Catenation<'a, C: SplitCurve + ?Sized, D: SplitCurve + ?Sized> {
    pub first: &'a C,
    pub second: &'a D,
}

impl<C: SplitCurve + ?Sized, D: SplitCurve + ?Sized> SplitCurve for Catenation<'_, C, D> {
    fn interval(&self) -> (f64, f64) {
        let (a1, b1) = self.first.interval();
        let (a2, b2) = self.second.interval();
        (a1, b1 + (b2 - a2))
    }
    fn at(&self, s: f64) -> Result<CurvePoint> {
        let (_, b1) = self.first.interval();
        let (a2, _) = self.second.interval();
        if s <= b1 {
            self.first.at(s)
        } else {
            self.second.at(a2 + (s - b1))
        }
    }
}
