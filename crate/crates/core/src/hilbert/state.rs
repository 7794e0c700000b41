use nalgebra::DVector;

use crate::{Error, Result, C64, CONSTRUCTION_TOL, NULL_TOL};

use super::{Permutation, Sign, SpaceSpec, MAX_PARTICLES};

/// Amplitude vector over `d^N` product basis kets.
///
/// `normalized` records whether `Σ|a|² = 1` held within `1e-12` when the
/// vector was built. Unnormalized ("raw") vectors appear as test-operator
/// directions such as `|χ⟩ = Σ_k |k⟩⊗|k⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    space: SpaceSpec,
    amplitudes: DVector<C64>,
    normalized: bool,
}

impl StateVector {
    /// Wraps amplitudes as given; the normalization flag is derived.
    pub fn from_amplitudes(space: SpaceSpec, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: amplitudes.len(),
            });
        }
        let normalized = (amplitudes.norm_squared() - 1.0).abs() <= CONSTRUCTION_TOL;
        Ok(Self {
            space,
            amplitudes,
            normalized,
        })
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(space: SpaceSpec, amplitudes: DVector<C64>) -> Result<Self> {
        Self::from_amplitudes(space, amplitudes)?.normalize()
    }

    pub fn from_real(space: SpaceSpec, amplitudes: &[f64]) -> Result<Self> {
        let amps = DVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|&a| C64::new(a, 0.0)));
        Self::from_amplitudes(space, amps)
    }

    /// Product basis ket `|k_1⟩⊗…⊗|k_N⟩`.
    pub fn basis(space: SpaceSpec, levels: &[usize]) -> Result<Self> {
        let flat = space.flatten(levels)?;
        let mut amplitudes = DVector::zeros(space.dim());
        amplitudes[flat] = C64::new(1.0, 0.0);
        Ok(Self {
            space,
            amplitudes,
            normalized: true,
        })
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn amplitude(&self, levels: &[usize]) -> Result<C64> {
        Ok(self.amplitudes[self.space.flatten(levels)?])
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                found: other.space.dim(),
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn normalize(self) -> Result<Self> {
        let norm = self.norm();
        if norm <= NULL_TOL {
            return Err(Error::NotNormalized(norm * norm));
        }
        Ok(Self {
            space: self.space,
            amplitudes: self.amplitudes.unscale(norm),
            normalized: true,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        let amplitudes = self.amplitudes.scale(factor);
        let normalized = (amplitudes.norm_squared() - 1.0).abs() <= CONSTRUCTION_TOL;
        Self {
            space: self.space,
            amplitudes,
            normalized,
        }
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.amplitudes.norm_squared()))
        }
    }
}

/// `|a⟩⊗|b⟩` on `N_a + N_b` particles.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let d = a.space.local_dim();
    if d != b.space.local_dim() {
        return Err(Error::LocalDimMismatch(d, b.space.local_dim()));
    }
    let space = SpaceSpec::new(a.space.n_particles() + b.space.n_particles(), d)?;
    let amplitudes = a.amplitudes.kronecker(&b.amplitudes);
    StateVector::from_amplitudes(space, amplitudes)
}

/// Applies `P_σ`, which sends `|x_1…x_N⟩` to `|x_σ(1)…x_σ(N)⟩`.
pub fn apply_permutation(sigma: &Permutation, psi: &StateVector) -> Result<StateVector> {
    let space = psi.space;
    if sigma.len() != space.n_particles() {
        return Err(Error::ArityMismatch {
            symbols: sigma.len(),
            particles: space.n_particles(),
        });
    }
    let strides = space.strides();
    let mut levels = vec![0; space.n_particles()];
    let mut out = DVector::zeros(space.dim());
    for (flat, amp) in psi.amplitudes.iter().enumerate() {
        space.unflatten_into(flat, &mut levels);
        let target: usize = sigma
            .mapping()
            .iter()
            .zip(&strides)
            .map(|(&s, &stride)| levels[s] * stride)
            .sum();
        out[target] = *amp;
    }
    Ok(StateVector {
        space,
        amplitudes: out,
        normalized: psi.normalized,
    })
}

/// `Π± v` without normalization.
pub(crate) fn symmetrize_raw(space: SpaceSpec, v: &DVector<C64>, sign: Sign) -> Result<DVector<C64>> {
    let n = space.n_particles();
    if n > MAX_PARTICLES {
        return Err(Error::TooManyParticles(n));
    }
    let perms = Permutation::all(n)?;
    let weights: Vec<f64> = perms.iter().map(|p| sign.weight(p.parity())).collect();
    let norm = 1.0 / perms.len() as f64;
    let strides = space.strides();
    let mut levels = vec![0; n];
    let mut out = DVector::zeros(space.dim());
    for (flat, amp) in v.iter().enumerate() {
        if *amp == C64::new(0.0, 0.0) {
            continue;
        }
        space.unflatten_into(flat, &mut levels);
        for (perm, &w) in perms.iter().zip(&weights) {
            let target: usize = perm
                .mapping()
                .iter()
                .zip(&strides)
                .map(|(&s, &stride)| levels[s] * stride)
                .sum();
            out[target] += amp * (w * norm);
        }
    }
    Ok(out)
}

/// `Π±ψ / ‖Π±ψ‖`.
///
/// Fails with [`Error::NullProjection`] when `ψ` has no component in the
/// requested sector, e.g. antisymmetrizing `|a⟩⊗|a⟩`.
pub fn project_symmetrize(psi: &StateVector, sign: Sign) -> Result<StateVector> {
    psi.require_normalized()?;
    let projected = symmetrize_raw(psi.space, &psi.amplitudes, sign)?;
    let norm = projected.norm();
    if norm <= NULL_TOL {
        return Err(Error::NullProjection(sign));
    }
    Ok(StateVector {
        space: psi.space,
        amplitudes: projected.unscale(norm),
        normalized: true,
    })
}
