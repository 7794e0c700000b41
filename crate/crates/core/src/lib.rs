//! Witness bounds for the origin of quantum correlations in systems of qudits.
//!
//! A test operator `L` certifies a non-classical correlation whenever its
//! expectation value exceeds the largest value reachable by a family of
//! classical reference states. This crate computes those maxima for four
//! families:
//!
//! * incoherent product states `|k_1⟩⊗…⊗|k_N⟩` (distinguishable particles),
//! * their symmetrized and antisymmetrized counterparts (bosons, fermions),
//! * separable states built with `⊗`,
//! * separable states built with `∨` or `∧`.
//!
//! Comparing which bounds a state violates tells apart local superpositions,
//! entanglement and superpositions forced by the exchange symmetry.
//!
//! ```
//! use qcorr::coherence::{classify, ClassifyOptions};
//! use qcorr::hilbert::HermitianOperator;
//! use qcorr::states::ExampleState;
//!
//! let psi = "psi3_plus".parse::<ExampleState>()?.build()?;
//! let l = HermitianOperator::projector(&psi);
//! let report = classify(&l, &psi, &ClassifyOptions::default())?;
//! assert!((report.g0 - 0.25).abs() < 1e-12);
//! assert!((report.gplus.value().unwrap() - 0.5).abs() < 1e-12);
//! # Ok::<(), qcorr::Error>(())
//! ```

pub mod coherence;
mod error;
pub mod hilbert;
mod linalg;
pub mod separability;
pub mod states;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;

/// Tolerance for normalization and Hermiticity checks at construction.
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Norms at or below this are treated as zero (null projections, empty sectors).
pub const NULL_TOL: f64 = 1e-10;

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/hilbert.md")]
    mod hilbert {}
    #[doc = include_str!("../../../book/src/classical-bounds.md")]
    mod classical_bounds {}
    #[doc = include_str!("../../../book/src/separability.md")]
    mod separability {}
    #[doc = include_str!("../../../book/src/continuous-variables.md")]
    mod continuous_variables {}
    #[doc = include_str!("../../../book/src/multipartite.md")]
    mod multipartite {}
}
