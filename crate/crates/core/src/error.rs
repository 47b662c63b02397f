use thiserror::Error;

use num_complex::Complex64;

/// Broad classes of failure, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or inconsistent input data.
    Input,
    /// A mathematical hypothesis of the requested operation does not hold.
    Hypothesis,
    /// An iterative numerical routine failed.
    Numerical,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("invalid tolerances: {0}")]
    BadTolerances(String),
    #[error("inner product is not Hermitian positive definite: {0}")]
    NonHermitianInnerProduct(String),

    #[error("eigensolver did not converge on a {0}x{0} matrix")]
    NoConvergence(usize),
    #[error("function is singular on the contour at z = {0}")]
    SingularOnContour(Complex64),

    #[error("form is not skew-symmetric (defect {0:.3e})")]
    NotSkew(f64),
    #[error("form is degenerate: {0}")]
    Degenerate(String),
    #[error("bad inner product: {0}")]
    BadInnerProduct(String),
    #[error("invalid splitting: {0}")]
    BadSplitting(String),

    #[error("subspace is not isotropic (defect {0:.3e})")]
    NotIsotropic(f64),
    #[error("subspace meets X- in dimension {0}; no graph representation")]
    SplitCollision(usize),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("generator V is not invertible (smallest singular value {0:.3e})")]
    VNotInvertible(f64),

    #[error("subspace Y is not contained in {0}")]
    NotContaining(&'static str),

    #[error("z = {0} lies in the spectrum")]
    SpectralPoint(Complex64),
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("operator is not unitary for the given inner product (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("refinement budget exhausted on [{start}, {end}]: {reason}")]
    RefinementExceeded { start: f64, end: f64, reason: String },
    #[error("not admissible at s = {s}: {reason}")]
    NotAdmissibleAt { s: f64, reason: String },
    #[error("subspace is not invariant (defect {0:.3e})")]
    NotInvariant(f64),
    #[error("nullity difference is not constant: {0:?}")]
    NonConstantM(Vec<(f64, i64)>),
    #[error("spectral flow depends on the partition: {coarse} vs {refined}")]
    PartitionDependence { coarse: i64, refined: i64 },

    #[error("not a Lagrangian pair at s = {s}: {reason}")]
    NotLagrangianAt { s: f64, reason: String },
    #[error("pair index is {index} at s = {s}, expected 0")]
    IndexNonZeroAt { s: f64, index: i64 },
    #[error("generator V not invertible at s = {0}")]
    VNotInvertibleAt(f64),
    #[error("projections too far apart (||P - P0|| = {0:.3e})")]
    ProjectionsTooFar(f64),
    #[error("space is not strong: cond(J) = {cond:.3e} exceeds {bound:.3e}")]
    NotStrong { cond: f64, bound: f64 },
    #[error("bad real symplectic structure: {0}")]
    BadRealStructure(String),
    #[error("generator identity fails at s = {s} (defect {defect:.3e})")]
    GeneratorMismatch { s: f64, defect: f64 },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            DimensionMismatch(_) | NonFinite(_) | BadTolerances(_) | NonHermitianInnerProduct(_) => {
                ErrorClass::Input
            }
            NoConvergence(_) | RefinementExceeded { .. } => ErrorClass::Numerical,
            _ => ErrorClass::Hypothesis,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
