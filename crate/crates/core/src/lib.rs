//! Numerical laboratory for the gap, Riesz and Cayley metrics on closed
//! operators, with Fredholm index and homotopy tooling.
//!
//! Operators are finite matrices or diagonal / shifted-diagonal operators on
//! ℓ² described exactly by a [`SymbolSpec`]. Every metric on ℓ² operators is
//! returned with a certified bound on its truncation error.

pub mod error;
pub mod fredholm;
pub mod metrics;
pub mod numkernel;
pub mod operators;
pub mod symbol;

pub use error::{GapError, Result};
pub use fredholm::{
    fredholm_index, homotopy_path, kernel_dims, validate_path, Dimension, HomotopyOutcome,
    HomotopyPath, IndexReport,
};
pub use metrics::{
    equivalence_constants, gap_projection_distance, gap_sup_distance, graph_projection,
    riesz_distance, tilde_distance, EquivalenceConstants, MetricMethod, MetricReport,
};
pub use numkernel::{ComplexMatrix, ToleranceConfig, C64};
pub use operators::{BoundedTransform, Operator, SpectralImage};
pub use symbol::{ContractionSymbol, SymbolSpec, Tail};
