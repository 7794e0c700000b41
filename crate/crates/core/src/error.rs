use thiserror::Error;

use crate::hilbert::Sign;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("local dimensions differ: {0} vs {1}")]
    LocalDimMismatch(usize, usize),

    #[error("permutation acts on {symbols} symbols but the state has {particles} particles")]
    ArityMismatch { symbols: usize, particles: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{0} particles is too many for exact permutation enumeration (max 8)")]
    TooManyParticles(usize),

    #[error("state has no component in the {0} sector")]
    NullProjection(Sign),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("imaginary residue {0:e} in an expectation value")]
    ImaginaryResidue(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("level {level} out of range for local dimension {dim}")]
    LevelOutOfRange { level: usize, dim: usize },

    #[error("superposition needs two distinct levels, got {0} twice")]
    RepeatedLevel(usize),

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty classical set: fermionic states need local_dim >= n_particles ({n_particles} > {local_dim})")]
    EmptyClassicalSet { n_particles: usize, local_dim: usize },

    #[error("relative strength needs a positive bound, got {0}")]
    NonpositiveBound(f64),

    #[error("expected a two-particle state, found {0} particles")]
    NotBipartite(usize),

    #[error("coefficient matrix is not {kind} (deviation {deviation:e})")]
    SymmetryViolated { kind: &'static str, deviation: f64 },

    #[error("operator does not commute with the projector (deviation {0:e})")]
    CommutatorViolation(f64),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
