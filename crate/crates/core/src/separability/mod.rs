//! Maximal expectation values of a test operator over separable states.
//!
//! For two particles and rank-one operators `L = |ψ⟩⟨ψ|` the bounds follow
//! from matrix decompositions of the coefficient matrix `M = (ψ_{k,l})`:
//!
//! | product | decomposition | bound |
//! |---|---|---|
//! | `⊗` | Schmidt (SVD) | `max_k λ_k²` |
//! | `∨` | Takagi `M = U Σ Uᵀ` | `max_{k>l} (λ_k² + λ_l²)` |
//! | `∧` | Slater (paired SVD) | `max_k 2λ_k²` |
//!
//! General operators and multipartite splittings go through
//! [`separability_eigen_solve`], an alternating solver for the separability
//! eigenvalue equations.

mod decomposition;
mod partition;
mod solver;

pub use decomposition::{
    coefficient_matrix, schmidt, slater, takagi, takagi_factorization, SchmidtSpectrum,
    SchmidtVariant, TakagiFactorization,
};
pub use partition::PartitionSpec;
pub use solver::{
    partial_and_full_bounds, separability_eigen_solve, MultipartiteBounds, RestartSummary,
    SolverOptions, SolverOutcome,
};
