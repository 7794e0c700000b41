//! Dense tensor algebra for `N` qudits of dimension `d`.
//!
//! Basis kets are addressed by a multi-index `(k_1, …, k_N)` flattened in
//! row-major order: subsystem 1 varies slowest, so
//! `flat = Σ_j k_j · d^(N-j)`. Every vector and matrix in the crate, and every
//! serialized amplitude list, uses this order.

mod operator;
mod permutation;
mod space;
mod state;
mod symmetry;

pub use operator::{expectation, symmetrizer, HermitianOperator, StateRef};
pub use permutation::Permutation;
pub use space::{MultiIndex, SpaceSpec};
pub use state::{apply_permutation, project_symmetrize, tensor_product, StateVector};
pub use symmetry::{subspace_dimension, Sign, SymmetryClass};

pub(crate) use operator::MatrixData;
pub(crate) use permutation::{inversion_count, next_permutation};
pub(crate) use state::symmetrize_raw;

/// Largest particle number for which `N!` permutations are enumerated.
pub const MAX_PARTICLES: usize = 8;
