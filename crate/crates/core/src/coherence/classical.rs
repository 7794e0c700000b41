use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::hilbert::{MultiIndex, SpaceSpec, StateVector, SymmetryClass, MAX_PARTICLES};
use crate::hilbert::{inversion_count, next_permutation};
use crate::states::DensityMatrix;
use crate::{Error, Result, C64, CONSTRUCTION_TOL};

/// Labels of the pure classical states of a symmetry class, in
/// lexicographic order: all tuples, non-decreasing tuples (bosons) or
/// strictly increasing tuples (fermions).
pub fn classical_labels(space: SpaceSpec, sym: SymmetryClass) -> Result<Vec<MultiIndex>> {
    let (n, d) = (space.n_particles(), space.local_dim());
    if n > MAX_PARTICLES {
        return Err(Error::TooManyParticles(n));
    }
    if sym == SymmetryClass::Fermionic && d < n {
        return Err(Error::EmptyClassicalSet {
            n_particles: n,
            local_dim: d,
        });
    }
    let mut labels = Vec::new();
    let mut levels = vec![0usize; n];
    for flat in 0..space.dim() {
        space.unflatten_into(flat, &mut levels);
        let keep = match sym {
            SymmetryClass::Distinguishable => true,
            SymmetryClass::Bosonic => levels.windows(2).all(|w| w[0] <= w[1]),
            SymmetryClass::Fermionic => levels.windows(2).all(|w| w[0] < w[1]),
        };
        if keep {
            labels.push(MultiIndex(levels.clone()));
        }
    }
    Ok(labels)
}

fn check_label(space: SpaceSpec, label: &MultiIndex, sym: SymmetryClass) -> Result<()> {
    let levels = label.levels();
    if levels.len() != space.n_particles() {
        return Err(Error::ArityMismatch {
            symbols: levels.len(),
            particles: space.n_particles(),
        });
    }
    if let Some(&level) = levels.iter().find(|&&k| k >= space.local_dim()) {
        return Err(Error::LevelOutOfRange {
            level,
            dim: space.local_dim(),
        });
    }
    match sym {
        SymmetryClass::Distinguishable => Ok(()),
        SymmetryClass::Bosonic if label.is_non_decreasing() => Ok(()),
        SymmetryClass::Fermionic if label.is_strictly_increasing() => Ok(()),
        SymmetryClass::Bosonic => Err(Error::InvalidParameter(format!(
            "bosonic label {levels:?} must be non-decreasing"
        ))),
        SymmetryClass::Fermionic => {
            let repeated = levels.windows(2).find(|w| w[0] == w[1]).map(|w| w[0]);
            match repeated {
                Some(level) => Err(Error::RepeatedLevel(level)),
                None => Err(Error::InvalidParameter(format!(
                    "fermionic label {levels:?} must be strictly increasing"
                ))),
            }
        }
    }
}

/// Nonzero amplitudes `(flat index, c_x)` of a classical state.
///
/// Bosonic states spread `1/√(N!/ΠN_k!)` over the distinct rearrangements
/// of the label; fermionic states put `sgn(σ)/√N!` on every permutation.
pub(crate) fn classical_terms(space: SpaceSpec, label: &[usize], sym: SymmetryClass) -> Vec<(usize, C64)> {
    let flat = |levels: &[usize]| levels.iter().fold(0, |acc, &k| acc * space.local_dim() + k);
    match sym {
        SymmetryClass::Distinguishable => vec![(flat(label), C64::new(1.0, 0.0))],
        SymmetryClass::Bosonic | SymmetryClass::Fermionic => {
            let mut arrangement = label.to_vec();
            let mut terms = Vec::new();
            loop {
                let sign = if sym == SymmetryClass::Fermionic && inversion_count(&arrangement) % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                terms.push((flat(&arrangement), sign));
                if !next_permutation(&mut arrangement) {
                    break;
                }
            }
            let amp = 1.0 / (terms.len() as f64).sqrt();
            terms
                .into_iter()
                .map(|(i, s)| (i, C64::new(s * amp, 0.0)))
                .collect()
        }
    }
}

/// The normalized classical state `|c⟩` labeled by a multi-index.
pub fn classical_state(space: SpaceSpec, label: &MultiIndex, sym: SymmetryClass) -> Result<StateVector> {
    check_label(space, label, sym)?;
    let mut amplitudes = DVector::zeros(space.dim());
    for (i, amp) in classical_terms(space, label.levels(), sym) {
        amplitudes[i] = amp;
    }
    StateVector::from_amplitudes(space, amplitudes)
}

/// `ρ = Σ p_k |c_k⟩⟨c_k|`, a convex mixture of classical states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalMixture {
    space: SpaceSpec,
    class: SymmetryClass,
    weights: Vec<f64>,
    labels: Vec<MultiIndex>,
}

impl ClassicalMixture {
    pub fn new(space: SpaceSpec, class: SymmetryClass, weights: Vec<f64>, labels: Vec<MultiIndex>) -> Result<Self> {
        if weights.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                found: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0)) {
            return Err(Error::InvalidParameter(format!("negative mixture weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::InvalidParameter(format!("mixture weights sum to {total}, not 1")));
        }
        for label in &labels {
            check_label(space, label, class)?;
        }
        Ok(ClassicalMixture {
            space,
            class,
            weights,
            labels,
        })
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn labels(&self) -> &[MultiIndex] {
        &self.labels
    }

    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        let members = self
            .weights
            .iter()
            .zip(&self.labels)
            .map(|(&w, label)| Ok((w, classical_state(self.space, label, self.class)?)))
            .collect::<Result<Vec<_>>>()?;
        DensityMatrix::from_ensemble(members)
    }
}
