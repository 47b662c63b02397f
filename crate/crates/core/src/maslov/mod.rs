//! The Maslov index of a curve of Lagrangian pairs as the spectral flow of
//! the block operator [[0, U_s], [V_s⁻¹, 0]] through (0, ∞), co-oriented upward.
//!
//! U_s and V_s are the generating operators of λ_s and µ_s for the splitting
//! X_s = X_s⁺ ⊕ X_s⁻. The block operator is h-unitary, so its spectrum meets
//! (0, ∞) only at 1, where the eigenspace is λ_s ∩ µ_s.

mod curve;
mod index;
mod properties;
mod real;
mod transport;

pub use curve::{unitary_power, Catenation, CurvePoint, FnCurve, Reparametrized, Restricted, Reversed, SampledCurve, SplitCurve};
pub use index::{block_operator_at, generators_at, maslov_index, MaslovOptions, MaslovResult};
pub use properties::{
    catenated_index, catenation_check, cayley_symplectic, compare_splittings, flipping_check, homotopy_check,
    intersection_dim, maslov_boxplus, maslov_embedding_check, maslov_properties_check, naturality_check,
    reparametrization_check, splitting_from_metric, splitting_independence_check, symplectic_defect, BoxplusReport,
    CatenationReport, FlipReport, HomotopyReport, MaslovEmbeddingReport, PropertyReport, SplittingComparison,
};
pub use real::{complex_generator, mas_bf, real_comparison, real_complexify, standard_j, BfResult, Complexified, RMatrix, RealComparison};
pub use transport::{transport_frame, transport_operator};
