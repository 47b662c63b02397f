//! Maslov indices of curves of Fredholm pairs of Lagrangian subspaces, computed
//! as spectral flow in finite-dimensional complex symplectic spaces.
//!
//! The crate is layered. [`linalg`] is the numeric substrate. [`symplectic`],
//! [`lagrangian`], [`gap`] and [`relation`] model the linear symplectic
//! objects. [`flow`] computes spectral flow through co-oriented curves and
//! [`maslov`] builds the Maslov index on top of it.

pub mod error;
pub mod flow;
pub mod gap;
pub mod lagrangian;
pub mod linalg;
pub mod maslov;
pub mod random;
pub mod relation;
pub mod symplectic;

pub use error::{Error, ErrorClass, Result};
pub use linalg::{c, CMatrix, CVector, Frame, Metric, Tolerances};
