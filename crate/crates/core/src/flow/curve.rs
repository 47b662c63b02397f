use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::c;

/// Geometry of the curve ℓ without co-orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CurveShape {
    /// Points origin + t·dir for t in (t_lo, t_hi); bounds may be infinite.
    Line { origin: Complex64, dir: Complex64, t_lo: f64, t_hi: f64 },
    /// Points center + radius·e^{iθ} for θ in (theta_lo, theta_hi), with span below 2π.
    Arc { center: Complex64, radius: f64, theta_lo: f64, theta_hi: f64 },
}

/// A curve ℓ ⊂ C without boundary points, with a chosen normal direction.
///
/// Points are described by coordinates (t, d): t runs along ℓ and d is the
/// signed distance to ℓ, positive on the co-oriented side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoorientedCurve {
    pub shape: CurveShape,
    /// +1 when the co-orientation is the left normal of the direction of travel.
    pub sign: f64,
}

impl CoorientedCurve {
    /// (0, +∞) with upward co-orientation.
    pub fn positive_real_axis() -> CoorientedCurve {
        CoorientedCurve {
            shape: CurveShape::Line { origin: c(0.0, 0.0), dir: c(1.0, 0.0), t_lo: 0.0, t_hi: f64::INFINITY },
            sign: 1.0,
        }
    }

    /// The open segment from a to b, co-oriented by its left normal.
    pub fn segment(a: Complex64, b: Complex64) -> CoorientedCurve {
        let len = (b - a).norm();
        CoorientedCurve {
            shape: CurveShape::Line { origin: a, dir: (b - a) / len, t_lo: 0.0, t_hi: len },
            sign: 1.0,
        }
    }

    /// i·(lo, hi) co-oriented from left to right.
    pub fn imaginary_interval(lo: f64, hi: f64) -> CoorientedCurve {
        CoorientedCurve {
            shape: CurveShape::Line { origin: c(0.0, 0.0), dir: c(0.0, 1.0), t_lo: lo, t_hi: hi },
            sign: -1.0,
        }
    }

    /// (−1−ε, −1+ε) with downward co-orientation.
    pub fn around_minus_one(eps: f64) -> CoorientedCurve {
        CoorientedCurve::segment(c(-1.0 - eps, 0.0), c(-1.0 + eps, 0.0)).reversed()
    }

    /// Open arc of a circle, co-oriented outward.
    pub fn arc(center: Complex64, radius: f64, theta_lo: f64, theta_hi: f64) -> CoorientedCurve {
        assert!(theta_hi > theta_lo && theta_hi - theta_lo < 2.0 * PI, "arc must span less than a full turn");
        CoorientedCurve { shape: CurveShape::Arc { center, radius, theta_lo, theta_hi }, sign: 1.0 }
    }

    /// Same curve with the opposite co-orientation.
    pub fn reversed(self) -> CoorientedCurve {
        CoorientedCurve { sign: -self.sign, ..self }
    }

    /// (t, d) coordinates of z.
    pub fn coords(&self, z: Complex64) -> (f64, f64) {
        match self.shape {
            CurveShape::Line { origin, dir, .. } => {
                let w = (z - origin) * dir.conj();
                (w.re, self.sign * w.im)
            }
            CurveShape::Arc { center, radius, theta_lo, theta_hi } => {
                let w = z - center;
                let mid = 0.5 * (theta_lo + theta_hi);
                let mut phi = w.arg() - mid;
                phi = (phi + PI).rem_euclid(2.0 * PI) - PI;
                (radius * (mid + phi), self.sign * (w.norm() - radius))
            }
        }
    }

    /// The open range of the parameter t.
    pub fn t_range(&self) -> (f64, f64) {
        match self.shape {
            CurveShape::Line { t_lo, t_hi, .. } => (t_lo, t_hi),
            CurveShape::Arc { radius, theta_lo, theta_hi, .. } => (radius * theta_lo, radius * theta_hi),
        }
    }

    pub fn point(&self, t: f64) -> Complex64 {
        match self.shape {
            CurveShape::Line { origin, dir, .. } => origin + dir * t,
            CurveShape::Arc { center, radius, .. } => center + Complex64::from_polar(radius, t / radius),
        }
    }

    /// Whether z lies within `tol` of ℓ, away from its end points.
    pub fn on_curve(&self, z: Complex64, tol: f64) -> bool {
        let (t, d) = self.coords(z);
        let (lo, hi) = self.t_range();
        d.abs() <= tol && t > lo && t < hi
    }
}
