//! JSON files describing states and observables.
//!
//! ```json
//! {"n_particles": 2, "local_dim": 2, "amplitudes": [[0, 0], [0.7071067811865476, 0], [-0.7071067811865476, 0], [0, 0]]}
//! {"n_particles": 1, "local_dim": 2, "matrix": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]}
//! ```
//!
//! Amplitudes follow the row-major flattening with particle 1 slowest.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use qcorr::hilbert::{HermitianOperator, SpaceSpec, StateVector};
use qcorr::states::DensityMatrix;
use qcorr::C64;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    n_particles: usize,
    local_dim: usize,
    #[serde(default)]
    amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

/// Parsed contents of a state or observable file.
#[derive(Debug)]
pub enum Payload {
    Vector(SpaceSpec, DVector<C64>),
    Matrix(SpaceSpec, DMatrix<C64>),
}

fn complex(pair: &[f64; 2]) -> C64 {
    C64::new(pair[0], pair[1])
}

pub fn parse_payload(text: &str) -> Result<Payload, CliError> {
    let raw: RawFile = serde_json::from_str(text).map_err(|e| {
        CliError::input(format!("malformed JSON at line {}, column {}: {e}", e.line(), e.column()))
    })?;
    let space = SpaceSpec::new(raw.n_particles, raw.local_dim)?;
    let dim = space.dim();
    match (raw.amplitudes, raw.matrix) {
        (Some(amps), None) => {
            if amps.len() != dim {
                return Err(CliError::input(format!(
                    "expected {dim} amplitudes for {} particles of dimension {}, found {}",
                    raw.n_particles,
                    raw.local_dim,
                    amps.len()
                )));
            }
            Ok(Payload::Vector(space, DVector::from_iterator(dim, amps.iter().map(complex))))
        }
        (None, Some(rows)) => {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(CliError::input(format!("matrix must be {dim}×{dim}")));
            }
            Ok(Payload::Matrix(space, DMatrix::from_fn(dim, dim, |i, j| complex(&rows[i][j]))))
        }
        (Some(_), Some(_)) => Err(CliError::input("give either \"amplitudes\" or \"matrix\", not both")),
        (None, None) => Err(CliError::input("missing \"amplitudes\" or \"matrix\"")),
    }
}

pub fn read_payload(path: &Path) -> Result<Payload, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    parse_payload(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// A state read from a file: amplitude vectors must have unit norm within
/// `1e-10` and are then renormalized exactly.
pub enum InputState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

pub fn state_from_payload(payload: Payload) -> Result<InputState, CliError> {
    match payload {
        Payload::Vector(space, amps) => {
            let norm = amps.norm();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(qcorr::Error::NotNormalized(norm).into());
            }
            Ok(InputState::Pure(StateVector::normalized(space, amps)?))
        }
        Payload::Matrix(space, m) => Ok(InputState::Mixed(DensityMatrix::from_dense(space, m)?)),
    }
}

/// An amplitude vector `v` stands for the projector `|v⟩⟨v|`.
pub fn observable_from_payload(payload: Payload) -> Result<HermitianOperator, CliError> {
    match payload {
        Payload::Vector(space, amps) => Ok(HermitianOperator::projector(&StateVector::from_amplitudes(space, amps)?)),
        Payload::Matrix(space, m) => Ok(HermitianOperator::from_dense(space, m)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_vector_and_matrix() {
        let text = r#"{"n_particles": 1, "local_dim": 2, "amplitudes": [[1, 0], [0, 0]]}"#;
        assert!(matches!(parse_payload(text).unwrap(), Payload::Vector(_, v) if v.len() == 2));
        let text = r#"{"n_particles": 1, "local_dim": 2, "matrix": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}"#;
        assert!(matches!(parse_payload(text).unwrap(), Payload::Matrix(_, m) if m.nrows() == 2));
    }

    #[test]
    fn reports_position_of_syntax_errors() {
        let err = parse_payload("{\n  \"n_particles\": 1,\n  \"local_dim\": }").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn rejects_wrong_lengths_and_norms() {
        let text = r#"{"n_particles": 2, "local_dim": 2, "amplitudes": [[1, 0]]}"#;
        assert!(parse_payload(text).is_err());
        let text = r#"{"n_particles": 1, "local_dim": 2, "amplitudes": [[1, 0], [1, 0]]}"#;
        let payload = parse_payload(text).unwrap();
        assert!(state_from_payload(payload).is_err());
        let text = r#"{"n_particles": 1, "local_dim": 2}"#;
        assert!(parse_payload(text).is_err());
    }
}
