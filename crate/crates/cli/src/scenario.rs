//! Scenario documents: JSON with complex numbers as `[re, im]` (a bare number
//! is read as real), matrices as row-major nested arrays and frames as lists
//! of columns.

use std::path::Path;
use std::sync::Arc;

use maslov_core::flow::{CoorientedCurve, Operator};
use maslov_core::maslov::{CurvePoint, FnCurve, SampledCurve, SplitCurve};
use maslov_core::relation::{PencilRelation, SpectralWindow};
use maslov_core::symplectic::{Splitting, SymplecticSpace};
use maslov_core::{c, CMatrix, Frame, Metric, Tolerances};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Real(f64),
    Pair([f64; 2]),
}

impl Num {
    pub fn value(self) -> Complex64 {
        match self {
            Num::Real(x) => c(x, 0.0),
            Num::Pair([re, im]) => c(re, im),
        }
    }
    pub fn from_value(z: Complex64) -> Num {
        Num::Pair([z.re, z.im])
    }
}

pub type MatrixSpec = Vec<Vec<Num>>;
/// Columns of a frame.
pub type FrameSpec = Vec<Vec<Num>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<SplittingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<CurveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<CurveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour: Option<ContourSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<PairSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<RelationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<SpectralWindow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub dim: usize,
    /// Gram matrix of the inner product; the identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ip: Option<MatrixSpec>,
    /// ω(x, y) = y* Ω x.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<MatrixSpec>,
    /// ω(x, y) = ⟨Jx, y⟩, i.e. Ω = G J.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<MatrixSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SplittingSpec {
    /// Only "auto": the splitting induced by the inner product.
    Named(String),
    Explicit { plus: FrameSpec, minus: FrameSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Fixed { frame: FrameSpec },
    /// Explicit frames; in between, the curve follows the unitary geodesic of generators.
    Samples { points: Vec<FramePoint> },
    /// base frame moved by R(θ(s)) acting on the coordinate pair `axes`, θ linear between samples.
    Rotation {
        base: FrameSpec,
        axes: [usize; 2],
        #[serde(default)]
        mode: RotationMode,
        angle: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationMode {
    /// e_a ↦ cos θ e_a + sin θ e_b, e_b ↦ −sin θ e_a + cos θ e_b.
    #[default]
    Plane,
    /// e_b ↦ e^{iθ} e_b, e_a fixed.
    Phase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FramePoint {
    pub s: f64,
    pub frame: FrameSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    /// Matrices A_s, entrywise linear between samples.
    Matrix { points: Vec<MatrixPoint> },
    /// Relations {(E_s x, F_s x)}, entrywise linear between samples.
    Pencil { points: Vec<PencilPoint> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixPoint {
    pub s: f64,
    pub a: MatrixSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilPoint {
    pub s: f64,
    pub e: MatrixSpec,
    pub f: MatrixSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    #[serde(flatten)]
    pub shape: ContourShape,
    #[serde(default)]
    pub reversed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContourShape {
    PositiveRealAxis,
    ImaginaryInterval { lo: f64, hi: f64 },
    AroundMinusOne { eps: f64 },
    Segment { a: Num, b: Num },
    Arc { center: Num, radius: f64, theta_lo: f64, theta_hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub m: FrameSpec,
    pub n: FrameSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    pub e: MatrixSpec,
    pub f: MatrixSpec,
}

/// Read and parse a scenario, reporting JSON errors with line and column.
pub fn load(path: &Path) -> CliResult<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    parse(&text, path)
}

pub fn parse(text: &str, path: &Path) -> CliResult<Scenario> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Invalid(msg.into()))
}

pub fn matrix(spec: &MatrixSpec, rows: usize, cols: usize, what: &str) -> CliResult<CMatrix> {
    if spec.len() != rows {
        return invalid(format!("{what} has {} rows, expected {rows}", spec.len()));
    }
    for (i, row) in spec.iter().enumerate() {
        if row.len() != cols {
            return invalid(format!("{what} row {i} has {} entries, expected {cols}", row.len()));
        }
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| spec[i][j].value()))
}

pub fn square(spec: &MatrixSpec, what: &str) -> CliResult<CMatrix> {
    matrix(spec, spec.len(), spec.len(), what)
}

pub fn frame_matrix(spec: &FrameSpec, dim: usize, what: &str) -> CliResult<CMatrix> {
    for (k, col) in spec.iter().enumerate() {
        if col.len() != dim {
            return invalid(format!("{what} column {k} has {} entries, expected {dim}", col.len()));
        }
    }
    Ok(CMatrix::from_fn(dim, spec.len(), |i, k| spec[k][i].value()))
}

pub fn matrix_spec(m: &CMatrix) -> MatrixSpec {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| Num::from_value(m[(i, j)])).collect()).collect()
}

pub fn frame_spec(m: &CMatrix) -> FrameSpec {
    (0..m.ncols()).map(|k| (0..m.nrows()).map(|i| Num::from_value(m[(i, k)])).collect()).collect()
}

impl Scenario {
    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.unwrap_or_default()
    }

    pub fn interval(&self) -> CliResult<(f64, f64)> {
        let [a, b] = self.interval.unwrap_or([0.0, 1.0]);
        if !(a < b) {
            return invalid(format!("interval [{a}, {b}] is empty"));
        }
        Ok((a, b))
    }

    fn space_spec(&self) -> CliResult<&SpaceSpec> {
        self.space.as_ref().ok_or_else(|| CliError::Invalid("missing \"space\"".into()))
    }

    pub fn metric(&self) -> CliResult<Arc<Metric>> {
        let sp = self.space_spec()?;
        if sp.dim == 0 {
            return invalid("space.dim must be positive");
        }
        match &sp.ip {
            None => Ok(Arc::new(Metric::identity(sp.dim))),
            Some(g) => Ok(Arc::new(Metric::new(matrix(g, sp.dim, sp.dim, "space.ip")?)?)),
        }
    }

    pub fn space(&self, tol: &Tolerances) -> CliResult<SymplecticSpace> {
        let sp = self.space_spec()?;
        let metric = self.metric()?;
        let n = sp.dim;
        let omega = match (&sp.omega, &sp.j) {
            (Some(_), Some(_)) => return invalid("give either space.omega or space.j, not both"),
            (Some(o), None) => matrix(o, n, n, "space.omega")?,
            (None, Some(j)) => metric.gram_matrix() * matrix(j, n, n, "space.j")?,
            (None, None) => {
                if n % 2 != 0 {
                    return invalid(format!("space.dim = {n} is odd and no form is given"));
                }
                SymplecticSpace::canonical(n / 2, n / 2).omega().clone()
            }
        };
        Ok(SymplecticSpace::new(metric, omega, tol)?)
    }

    pub fn splitting(&self, sp: &SymplecticSpace, tol: &Tolerances) -> CliResult<Arc<Splitting>> {
        match &self.splitting {
            None => Ok(Arc::new(sp.compute_splitting(tol)?)),
            Some(SplittingSpec::Named(name)) if name == "auto" => Ok(Arc::new(sp.compute_splitting(tol)?)),
            Some(SplittingSpec::Named(name)) => invalid(format!("unknown splitting \"{name}\" (expected \"auto\" or explicit frames)")),
            Some(SplittingSpec::Explicit { plus, minus }) => {
                let n = sp.dim();
                let p = frame_matrix(plus, n, "splitting.plus")?;
                let m = frame_matrix(minus, n, "splitting.minus")?;
                Ok(Arc::new(Splitting::from_frames(sp, &p, &m, tol)?))
            }
        }
    }

    /// The curve of pairs (λ_s, µ_s) described by `space`, `splitting`, `lambda` and `mu`.
    pub fn curve(&self) -> CliResult<Box<dyn SplitCurve>> {
        let tol = self.tolerances();
        tol.validate()?;
        let sp = self.space(&tol)?;
        let splitting = self.splitting(&sp, &tol)?;
        let metric = sp.metric().clone();
        let n = sp.dim();
        let lam = FrameCurve::new(self.lambda.as_ref().ok_or_else(|| CliError::Invalid("missing \"lambda\"".into()))?, n, "lambda")?;
        let mu = FrameCurve::new(self.mu.as_ref().ok_or_else(|| CliError::Invalid("missing \"mu\"".into()))?, n, "mu")?;
        let grid = match (lam.grid(), mu.grid()) {
            (Some(a), Some(b)) if a != b => return invalid("lambda and mu are sampled on different grids"),
            (Some(a), _) | (None, Some(a)) => Some(a),
            (None, None) => None,
        };
        let point = move |s: f64| -> maslov_core::Result<CurvePoint> {
            Ok(CurvePoint {
                splitting: splitting.clone(),
                lambda: Frame::span(&metric, &lam.at(s), tol.rank_tol)?,
                mu: Frame::span(&metric, &mu.at(s), tol.rank_tol)?,
            })
        };
        match grid {
            Some(grid) => {
                if self.interval.is_some() {
                    return invalid("\"interval\" is implied by the sample grid and must be omitted");
                }
                let pts = grid.iter().map(|&s| Ok((s, point(s)?))).collect::<maslov_core::Result<Vec<_>>>()?;
                Ok(Box::new(SampledCurve::new(pts, &tol)?))
            }
            None => {
                let (a, b) = self.interval()?;
                Ok(Box::new(FnCurve::new(a, b, point)))
            }
        }
    }

    pub fn contour(&self) -> CliResult<CoorientedCurve> {
        let spec = self.contour.as_ref().ok_or_else(|| CliError::Invalid("missing \"contour\"".into()))?;
        let curve = match &spec.shape {
            ContourShape::PositiveRealAxis => CoorientedCurve::positive_real_axis(),
            ContourShape::ImaginaryInterval { lo, hi } => {
                if !(lo < hi) {
                    return invalid(format!("contour interval ({lo}, {hi}) is empty"));
                }
                CoorientedCurve::imaginary_interval(*lo, *hi)
            }
            ContourShape::AroundMinusOne { eps } => {
                if !(*eps > 0.0 && *eps < 1.0) {
                    return invalid(format!("contour eps = {eps} must lie in (0, 1)"));
                }
                CoorientedCurve::around_minus_one(*eps)
            }
            ContourShape::Segment { a, b } => CoorientedCurve::segment(a.value(), b.value()),
            ContourShape::Arc { center, radius, theta_lo, theta_hi } => {
                if !(*radius > 0.0 && theta_lo < theta_hi) {
                    return invalid("contour arc needs radius > 0 and theta_lo < theta_hi");
                }
                CoorientedCurve::arc(center.value(), *radius, *theta_lo, *theta_hi)
            }
        };
        Ok(if spec.reversed { curve.reversed() } else { curve })
    }

    pub fn family(&self) -> CliResult<(f64, f64, SampledFamily)> {
        let spec = self.family.as_ref().ok_or_else(|| CliError::Invalid("missing \"family\"".into()))?;
        let tol = self.tolerances();
        let fam = match spec {
            FamilySpec::Matrix { points } => {
                let n = points.first().map(|p| p.a.len()).unwrap_or(0);
                let mats = points
                    .iter()
                    .enumerate()
                    .map(|(k, p)| Ok((p.s, matrix(&p.a, n, n, &format!("family.points[{k}].a"))?)))
                    .collect::<CliResult<Vec<_>>>()?;
                SampledFamily::Matrix(check_grid(mats, "family")?)
            }
            FamilySpec::Pencil { points } => {
                let rows = points.first().map(|p| p.e.len()).unwrap_or(0);
                let cols = points.first().and_then(|p| p.e.first()).map(|r| r.len()).unwrap_or(0);
                let mats = points
                    .iter()
                    .enumerate()
                    .map(|(k, p)| {
                        let e = matrix(&p.e, rows, cols, &format!("family.points[{k}].e"))?;
                        let f = matrix(&p.f, rows, cols, &format!("family.points[{k}].f"))?;
                        PencilRelation::new(e.clone(), f.clone(), &tol)?;
                        Ok((p.s, maslov_core::linalg::vstack(&[&e, &f])))
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                SampledFamily::Pencil { rows, tol, points: check_grid(mats, "family")? }
            }
        };
        let (a, b) = fam.interval();
        Ok((a, b, fam))
    }

    pub fn relation(&self) -> CliResult<PencilRelation> {
        let spec = self.relation.as_ref().ok_or_else(|| CliError::Invalid("missing \"relation\"".into()))?;
        let rows = spec.e.len();
        let cols = spec.e.first().map(|r| r.len()).unwrap_or(0);
        let e = matrix(&spec.e, rows, cols, "relation.e")?;
        let f = matrix(&spec.f, rows, cols, "relation.f")?;
        Ok(PencilRelation::new(e, f, &self.tolerances())?)
    }

    pub fn pairs(&self) -> CliResult<Vec<(Frame, Frame)>> {
        let metric = self.metric()?;
        let n = metric.dim();
        let tol = self.tolerances();
        let pairs = self.pairs.as_ref().ok_or_else(|| CliError::Invalid("missing \"pairs\"".into()))?;
        pairs
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let m = Frame::span(&metric, &frame_matrix(&p.m, n, &format!("pairs[{k}].m"))?, tol.rank_tol)?;
                let nf = Frame::span(&metric, &frame_matrix(&p.n, n, &format!("pairs[{k}].n"))?, tol.rank_tol)?;
                Ok((m, nf))
            })
            .collect()
    }
}

fn check_grid<T>(pts: Vec<(f64, T)>, what: &str) -> CliResult<Vec<(f64, T)>> {
    if pts.len() < 2 {
        return invalid(format!("{what} needs at least two samples"));
    }
    if pts.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return invalid(format!("{what} sample parameters must be strictly increasing"));
    }
    Ok(pts)
}

/// Piecewise-linear interpolation weight: index of the left sample and the fraction towards the right one.
fn locate(grid: &[f64], s: f64) -> (usize, f64) {
    let last = grid.len() - 1;
    if s <= grid[0] {
        return (0, 0.0);
    }
    if s >= grid[last] {
        return (last - 1, 1.0);
    }
    let k = grid.partition_point(|&g| g <= s) - 1;
    (k, (s - grid[k]) / (grid[k + 1] - grid[k]))
}

fn lerp(a: &CMatrix, b: &CMatrix, t: f64) -> CMatrix {
    a * c(1.0 - t, 0.0) + b * c(t, 0.0)
}

pub enum SampledFamily {
    Matrix(Vec<(f64, CMatrix)>),
    /// Stacked [E; F] per sample.
    Pencil { rows: usize, tol: Tolerances, points: Vec<(f64, CMatrix)> },
}

impl SampledFamily {
    fn points(&self) -> &[(f64, CMatrix)] {
        match self {
            SampledFamily::Matrix(p) | SampledFamily::Pencil { points: p, .. } => p,
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        let p = self.points();
        (p[0].0, p[p.len() - 1].0)
    }

    pub fn operator(&self, s: f64) -> maslov_core::Result<Operator> {
        let pts = self.points();
        let grid: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let (k, t) = locate(&grid, s);
        let m = lerp(&pts[k].1, &pts[k + 1].1, t);
        match self {
            SampledFamily::Matrix(_) => Ok(Operator::Matrix(m)),
            SampledFamily::Pencil { rows, tol, .. } => {
                let e = m.rows(0, *rows).into_owned();
                let f = m.rows(*rows, *rows).into_owned();
                Ok(Operator::Pencil(PencilRelation::new(e, f, tol)?))
            }
        }
    }
}

/// Frame-valued curve for λ or µ, evaluated lazily.
enum FrameCurve {
    Fixed(CMatrix),
    Samples(Vec<(f64, CMatrix)>),
    Rotation { base: CMatrix, axes: [usize; 2], mode: RotationMode, angle: Vec<(f64, f64)> },
}

impl FrameCurve {
    fn new(spec: &CurveSpec, n: usize, what: &str) -> CliResult<FrameCurve> {
        let nonempty = |m: CMatrix, w: &str| if m.ncols() == 0 { invalid(format!("{w} has no columns")) } else { Ok(m) };
        match spec {
            CurveSpec::Fixed { frame } => Ok(FrameCurve::Fixed(nonempty(frame_matrix(frame, n, &format!("{what}.frame"))?, what)?)),
            CurveSpec::Samples { points } => {
                let pts = points
                    .iter()
                    .enumerate()
                    .map(|(k, p)| {
                        let w = format!("{what}.points[{k}].frame");
                        Ok((p.s, nonempty(frame_matrix(&p.frame, n, &w)?, &w)?))
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(FrameCurve::Samples(check_grid(pts, what)?))
            }
            CurveSpec::Rotation { base, axes, mode, angle } => {
                if axes[0] >= n || axes[1] >= n || axes[0] == axes[1] {
                    return invalid(format!("{what}.axes {axes:?} must be two distinct coordinates below {n}"));
                }
                let angle = check_grid(angle.iter().map(|p| (p[0], p[1])).collect(), &format!("{what}.angle"))?;
                Ok(FrameCurve::Rotation { base: nonempty(frame_matrix(base, n, &format!("{what}.base"))?, what)?, axes: *axes, mode: *mode, angle })
            }
        }
    }

    fn grid(&self) -> Option<Vec<f64>> {
        match self {
            FrameCurve::Samples(p) => Some(p.iter().map(|x| x.0).collect()),
            _ => None,
        }
    }

    fn at(&self, s: f64) -> CMatrix {
        match self {
            FrameCurve::Fixed(m) => m.clone(),
            FrameCurve::Samples(p) => {
                // Only evaluated on the grid itself; SampledCurve interpolates in between.
                let k = p.iter().position(|x| x.0 >= s).unwrap_or(p.len() - 1);
                p[k].1.clone()
            }
            FrameCurve::Rotation { base, axes, mode, angle } => {
                let grid: Vec<f64> = angle.iter().map(|x| x.0).collect();
                let (k, t) = locate(&grid, s);
                let theta = angle[k].1 * (1.0 - t) + angle[k + 1].1 * t;
                let n = base.nrows();
                let mut r = CMatrix::identity(n, n);
                let [a, b] = *axes;
                match mode {
                    RotationMode::Plane => {
                        let (sn, cs) = theta.sin_cos();
                        r[(a, a)] = c(cs, 0.0);
                        r[(b, a)] = c(sn, 0.0);
                        r[(a, b)] = c(-sn, 0.0);
                        r[(b, b)] = c(cs, 0.0);
                    }
                    RotationMode::Phase => r[(b, b)] = Complex64::from_polar(1.0, theta),
                }
                r * base
            }
        }
    }
}

/// The scenario with defaults filled in, frames orthonormalized and J replaced by Ω.
pub fn normalized(sc: &Scenario) -> CliResult<Scenario> {
    let tol = sc.tolerances();
    let mut out = sc.clone();
    out.tolerances = Some(tol);
    if let Some(spec) = &sc.space {
        let metric = sc.metric()?;
        let n = spec.dim;
        let needs_form = spec.omega.is_some() || spec.j.is_some() || sc.lambda.is_some() || sc.mu.is_some();
        let omega = if needs_form {
            Some(matrix_spec(sc.space(&tol)?.omega()))
        } else {
            None
        };
        out.space = Some(SpaceSpec { dim: n, ip: Some(matrix_spec(metric.gram_matrix())), omega, j: None });
        let ortho = |f: &FrameSpec, what: &str| -> CliResult<FrameSpec> {
            Ok(frame_spec(Frame::span(&metric, &frame_matrix(f, n, what)?, tol.rank_tol)?.basis()))
        };
        let curve = |cs: &CurveSpec, what: &str| -> CliResult<CurveSpec> {
            Ok(match cs {
                CurveSpec::Fixed { frame } => CurveSpec::Fixed { frame: ortho(frame, what)? },
                CurveSpec::Samples { points } => CurveSpec::Samples {
                    points: points.iter().map(|p| Ok(FramePoint { s: p.s, frame: ortho(&p.frame, what)? })).collect::<CliResult<_>>()?,
                },
                // The rotation acts on the base linearly, so an orthonormal base spans the same curve.
                CurveSpec::Rotation { base, axes, mode, angle } => {
                    CurveSpec::Rotation { base: ortho(base, what)?, axes: *axes, mode: *mode, angle: angle.clone() }
                }
            })
        };
        out.lambda = sc.lambda.as_ref().map(|x| curve(x, "lambda")).transpose()?;
        out.mu = sc.mu.as_ref().map(|x| curve(x, "mu")).transpose()?;
        if let Some(pairs) = &sc.pairs {
            out.pairs = Some(
                pairs.iter().map(|p| Ok(PairSpec { m: ortho(&p.m, "pairs.m")?, n: ortho(&p.n, "pairs.n")? })).collect::<CliResult<_>>()?,
            );
        }
        out.splitting = match &sc.splitting {
            None => Some(SplittingSpec::Named("auto".into())),
            Some(SplittingSpec::Explicit { plus, minus }) => {
                Some(SplittingSpec::Explicit { plus: ortho(plus, "splitting.plus")?, minus: ortho(minus, "splitting.minus")? })
            }
            Some(other) => Some(other.clone()),
        };
    }
    Ok(out)
}
