use std::f64::consts::PI;

use num_complex::Complex64;

use super::{c, CMatrix};
use crate::error::{Error, Result};

/// A closed, positively oriented contour sampled at equispaced parameter values.
#[derive(Debug, Clone)]
pub struct Contour {
    /// Points z(θ_k) and derivatives z'(θ_k) for θ_k = 2πk/n.
    nodes: Vec<(Complex64, Complex64)>,
}

impl Contour {
    pub fn circle(center: Complex64, radius: f64, n: usize) -> Contour {
        Contour::ellipse(center, radius, radius, n)
    }

    /// Axis-aligned ellipse with semi-axes `a` (real) and `b` (imaginary).
    pub fn ellipse(center: Complex64, a: f64, b: f64, n: usize) -> Contour {
        Contour::from_fn(n, |t| {
            let (s, co) = t.sin_cos();
            (center + c(a * co, b * s), c(-a * s, b * co))
        })
    }

    /// Rectangle [x0,x1]×[y0,y1] traversed counterclockwise with edges of equal parameter length.
    /// The trapezoid rule is not spectrally accurate at the corners; prefer ellipses for projections.
    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64, n: usize) -> Contour {
        let corners = [c(x0, y0), c(x1, y0), c(x1, y1), c(x0, y1)];
        Contour::from_fn(n, |t| {
            let u = t / (2.0 * PI) * 4.0;
            let k = (u.floor() as usize).min(3);
            let f = u - k as f64;
            let (a, b) = (corners[k], corners[(k + 1) % 4]);
            (a + (b - a) * f, (b - a) * (2.0 / PI))
        })
    }

    /// Contour from a parametrization θ ↦ (z(θ), z'(θ)) on [0, 2π).
    pub fn from_fn(n: usize, f: impl Fn(f64) -> (Complex64, Complex64)) -> Contour {
        let nodes = (0..n).map(|k| f(2.0 * PI * k as f64 / n as f64)).collect();
        Contour { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The sample points on the contour.
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.nodes.iter().map(|&(z, _)| z)
    }
}

/// Trapezoid-rule approximation of −(1/2πi)∮ f(ζ) dζ.
pub fn contour_quadrature<F>(f: F, contour: &Contour) -> Result<CMatrix>
where
    F: Fn(Complex64) -> Result<CMatrix>,
{
    let n = contour.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("contour without nodes".into()));
    }
    let mut acc: Option<CMatrix> = None;
    for &(z, dz) in &contour.nodes {
        let fz = f(z).map_err(|_| Error::SingularOnContour(z))?;
        if fz.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::SingularOnContour(z));
        }
        let term = fz * dz;
        acc = Some(match acc {
            None => term,
            Some(a) => {
                if a.shape() != term.shape() {
                    return Err(Error::DimensionMismatch("integrand changes shape".into()));
                }
                a + term
            }
        });
    }
    // dζ = z'(θ) dθ with dθ = 2π/n; the prefactor is −1/(2πi).
    let w = c(0.0, 1.0 / n as f64);
    Ok(acc.expect("nonempty contour") * w)
}

#[cfg(test)]
mod tests {
    use super::super::{diag, inverse};
    use super::*;

    fn resolvent(a: CMatrix) -> impl Fn(Complex64) -> Result<CMatrix> {
        move |z| {
            let n = a.nrows();
            inverse(&(&a - CMatrix::identity(n, n) * z)).ok_or(Error::SingularOnContour(z))
        }
    }

    #[test]
    fn sign_convention_on_zero() {
        // (a − ζ)⁻¹ with a = 0 integrates to 1 under −(1/2πi)∮.
        let p = contour_quadrature(resolvent(diag(&[c(0.0, 0.0)])), &Contour::circle(c(0.0, 0.0), 1.0, 64)).unwrap();
        assert!((p[(0, 0)] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pole_outside_gives_zero() {
        let p = contour_quadrature(resolvent(diag(&[c(5.0, 0.0)])), &Contour::circle(c(0.0, 0.0), 1.0, 64)).unwrap();
        assert!(p[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn diagonal_projector() {
        let a = diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let p = contour_quadrature(resolvent(a), &Contour::circle(c(1.0, 0.0), 0.5, 64)).unwrap();
        let expect = diag(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert!((p - expect).norm() < 1e-10);
    }

    #[test]
    fn singular_node_is_reported() {
        let a = diag(&[c(1.0, 0.0)]);
        let r = contour_quadrature(resolvent(a), &Contour::circle(c(0.0, 0.0), 1.0, 8));
        assert!(matches!(r, Err(Error::SingularOnContour(_))));
    }

    #[test]
    fn error_decays_geometrically() {
        let a = diag(&[c(0.0, 0.0), c(1.3, 0.0)]);
        let exact = diag(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let err = |n| {
            (contour_quadrature(resolvent(a.clone()), &Contour::circle(c(0.0, 0.0), 1.0, n)).unwrap() - &exact).norm()
        };
        assert!(err(128) <= err(32) / 10.0);
    }

    #[test]
    fn function_values_are_cauchy_integrals() {
        // −(1/2πi)∮ ζ(a − ζ)⁻¹ dζ equals a times the projector.
        let c0 = Contour::ellipse(c(0.5, 0.0), 1.0, 0.6, 64);
        let f = |z: Complex64| Ok(CMatrix::from_element(1, 1, z / (c(0.5, 0.1) - z)));
        let p = contour_quadrature(f, &c0).unwrap();
        assert!((p[(0, 0)] - c(0.5, 0.1)).norm() < 1e-10);
    }
}
