//! Spectral flow of parameter families through a co-oriented curve ℓ.
//!
//! The flow is the partition formula: on each segment [s_{k−1}, s_k] a test
//! box N around ℓ is chosen, and the segment contributes
//! rank P_{N⁻}(A_{s_{k−1}}) − rank P_{N⁻}(A_{s_k}). For finite-dimensional
//! operators the rank of P_{N⁻} is the number of eigenvalues in N⁻, counted
//! with algebraic multiplicity. Eigenvalues within `cross_tol` of ℓ belong to N⁰.

mod admissible;
mod curve;
mod matching;
mod sf;

pub use admissible::{check_admissible, check_unitary_admissible, nu, AdmissibleReport, Region, TestDomain, UnitaryReport};
pub use curve::{CoorientedCurve, CurveShape};
pub use matching::bottleneck;
pub use sf::{
    check_partition_independence, sf_embedding_check, spectral_flow, spectral_flow_on_grid, EmbeddingReport, Family,
    FlowOptions, FlowResult, FlowSample, FnFamily, SegmentRecord, Subinterval,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::relation::{self, PencilRelation};

/// The value of a family at one parameter: a matrix or a square pencil relation.
#[derive(Debug, Clone)]
pub enum Operator {
    Matrix(CMatrix),
    Pencil(PencilRelation),
}

impl Operator {
    /// Finite eigenvalues with repetition, or None when σ(A) = C.
    pub fn spectrum(&self) -> Result<Option<Vec<Complex64>>> {
        match self {
            Operator::Matrix(m) => {
                linalg::check_square(m, "operator")?;
                linalg::check_finite(m, "operator")?;
                linalg::eigenvalues(m).map(Some)
            }
            Operator::Pencil(p) => match relation::finite_spectrum(p) {
                Ok(v) => Ok(Some(v)),
                Err(Error::NotAdmissible(_)) => Ok(None),
                Err(e) => Err(e),
            },
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Operator::Matrix(m) => m.nrows(),
            Operator::Pencil(p) => p.ambient_dim(),
        }
    }
}

impl From<CMatrix> for Operator {
    fn from(m: CMatrix) -> Self {
        Operator::Matrix(m)
    }
}

impl From<PencilRelation> for Operator {
    fn from(p: PencilRelation) -> Self {
        Operator::Pencil(p)
    }
}
