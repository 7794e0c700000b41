//! Constructors for the reference states: basis superpositions, the worked
//! two- and three-qudit examples, and the (dephased) two-mode squeezed vacuum.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::hilbert::{
    project_symmetrize, tensor_product, MatrixData, SpaceSpec, StateVector, SymmetryClass,
};
use crate::linalg::hermitian_eigen;
use crate::{Error, Result, C64, CONSTRUCTION_TOL, NULL_TOL};

/// Truncation used for two-mode states when none is given.
pub const DEFAULT_N_MAX: usize = 64;

/// Unit-trace, positive semidefinite operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    space: SpaceSpec,
    data: MatrixData,
}

impl DensityMatrix {
    pub fn from_dense(space: SpaceSpec, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Self::checked(space, MatrixData::dense(matrix))
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        Self::from_ensemble(vec![(1.0, psi.clone())])
    }

    /// `ρ = Σ_i p_i |ψ_i⟩⟨ψ_i|` for normalized `ψ_i` and a probability vector `p`.
    pub fn from_ensemble(members: Vec<(f64, StateVector)>) -> Result<Self> {
        let space = members
            .first()
            .map(|(_, psi)| psi.space())
            .ok_or_else(|| Error::InvalidDensityMatrix("empty ensemble".into()))?;
        let mut total = 0.0;
        let mut terms = Vec::with_capacity(members.len());
        for (p, psi) in members {
            if psi.space() != space {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    found: psi.space().dim(),
                });
            }
            if !(p >= 0.0) {
                return Err(Error::InvalidDensityMatrix(format!("negative weight {p}")));
            }
            psi.require_normalized()?;
            total += p;
            terms.push((p, psi.into_amplitudes()));
        }
        if (total - 1.0).abs() > CONSTRUCTION_TOL {
            return Err(Error::InvalidDensityMatrix(format!("weights sum to {total}")));
        }
        Ok(Self {
            space,
            data: MatrixData::Spectral { terms },
        })
    }

    pub(crate) fn from_block(space: SpaceSpec, support: Vec<usize>, block: DMatrix<C64>) -> Result<Self> {
        Self::checked(space, MatrixData::Block { support, block })
    }

    fn checked(space: SpaceSpec, data: MatrixData) -> Result<Self> {
        let defect = data.hermiticity_defect();
        if defect > CONSTRUCTION_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let rho = Self { space, data };
        let trace = rho.trace();
        if (trace - 1.0).abs() > NULL_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace}")));
        }
        let min = rho.min_eigenvalue();
        if min < -NULL_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.data.entry(row, col)
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        self.data.to_dense(self.space.dim())
    }

    /// Smallest eigenvalue (on the stored support; zero outside it).
    pub fn min_eigenvalue(&self) -> f64 {
        match &self.data {
            MatrixData::Block { support, block } => {
                let (values, _) = hermitian_eigen(block.clone());
                let inner = values.last().copied().unwrap_or(0.0);
                if support.len() < self.space.dim() {
                    inner.min(0.0)
                } else {
                    inner
                }
            }
            MatrixData::Spectral { terms } => {
                let dense = self.data.to_dense(self.space.dim());
                if terms.iter().all(|(w, _)| *w >= 0.0) && terms.len() < self.space.dim() {
                    0.0
                } else {
                    hermitian_eigen(dense).0.last().copied().unwrap_or(0.0)
                }
            }
        }
    }

    pub(crate) fn data(&self) -> &MatrixData {
        &self.data
    }
}

/// `|s_{k,l}⟩ = (|k⟩ + |l⟩)/√2` on a single qudit of dimension `d`.
pub fn superposition_s(k: usize, l: usize, d: usize) -> Result<StateVector> {
    if k == l {
        return Err(Error::RepeatedLevel(k));
    }
    for level in [k, l] {
        if level >= d {
            return Err(Error::LevelOutOfRange { level, dim: d });
        }
    }
    let space = SpaceSpec::new(1, d)?;
    let mut amps = DVector::zeros(d);
    amps[k] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[l] = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::from_amplitudes(space, amps)
}

/// The worked examples `ψ_1 … ψ_5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExampleFamily {
    /// `|0⟩⊗|s_{1,2}⟩`, one-sided local superposition (`d = 4`).
    Psi1,
    /// `|s_{0,1}⟩⊗|s_{2,3}⟩`, two-sided local superposition (`d = 4`).
    Psi2,
    /// `(|0⟩⊗|1⟩ + |2⟩⊗|3⟩)/√2`, entangled (`d = 4`).
    Psi3,
    /// `|0⟩⊗(|1⟩⊗|2⟩ + |3⟩⊗|4⟩)/√2`, partially separable (`d = 5`).
    Psi4,
    /// `(|0⟩⊗|1⟩⊗|2⟩ + |3⟩⊗|4⟩⊗|5⟩)/√2`, GHZ type (`d = 6`).
    Psi5,
}

impl ExampleFamily {
    pub const ALL: [ExampleFamily; 5] = [
        ExampleFamily::Psi1,
        ExampleFamily::Psi2,
        ExampleFamily::Psi3,
        ExampleFamily::Psi4,
        ExampleFamily::Psi5,
    ];

    /// Smallest local dimension containing every referenced level.
    pub fn local_dim(self) -> usize {
        match self {
            ExampleFamily::Psi1 | ExampleFamily::Psi2 | ExampleFamily::Psi3 => 4,
            ExampleFamily::Psi4 => 5,
            ExampleFamily::Psi5 => 6,
        }
    }

    pub fn n_particles(self) -> usize {
        match self {
            ExampleFamily::Psi4 | ExampleFamily::Psi5 => 3,
            _ => 2,
        }
    }

    fn index(self) -> usize {
        self as usize + 1
    }

    /// The distinguishable-particle version `ψ_n^(0)`.
    fn distinguishable(self) -> Result<StateVector> {
        let d = self.local_dim();
        let ket = |k: usize| StateVector::basis(SpaceSpec::new(1, d)?, &[k]);
        match self {
            ExampleFamily::Psi1 => tensor_product(&ket(0)?, &superposition_s(1, 2, d)?),
            ExampleFamily::Psi2 => tensor_product(&superposition_s(0, 1, d)?, &superposition_s(2, 3, d)?),
            ExampleFamily::Psi3 => ghz_like(d, &[&[0, 1], &[2, 3]]),
            ExampleFamily::Psi4 => tensor_product(&ket(0)?, &ghz_like(d, &[&[1, 2], &[3, 4]])?),
            ExampleFamily::Psi5 => ghz_like(d, &[&[0, 1, 2], &[3, 4, 5]]),
        }
    }
}

/// Equal-weight superposition of product basis kets.
fn ghz_like(d: usize, terms: &[&[usize]]) -> Result<StateVector> {
    let space = SpaceSpec::new(terms[0].len(), d)?;
    let mut amps = DVector::zeros(space.dim());
    for levels in terms {
        amps[space.flatten(levels)?] += C64::new(1.0, 0.0);
    }
    StateVector::normalized(space, amps)
}

/// `ψ_n^(s)`: an example family in one of the three symmetry variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExampleState {
    pub family: ExampleFamily,
    pub class: SymmetryClass,
}

impl ExampleState {
    pub fn new(family: ExampleFamily, class: SymmetryClass) -> Self {
        Self { family, class }
    }

    /// Every family in every variant, in table order.
    pub fn all() -> Vec<ExampleState> {
        let classes = [SymmetryClass::Distinguishable, SymmetryClass::Bosonic, SymmetryClass::Fermionic];
        ExampleFamily::ALL
            .iter()
            .flat_map(|&f| classes.iter().map(move |&c| ExampleState::new(f, c)))
            .collect()
    }

    /// Normalized amplitude vector; `(±)` variants are `Π±ψ^(0)` renormalized.
    pub fn build(&self) -> Result<StateVector> {
        let base = self.family.distinguishable()?;
        match self.class.sign() {
            None => Ok(base),
            Some(sign) => project_symmetrize(&base, sign),
        }
    }
}

impl fmt::Display for ExampleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = match self.class {
            SymmetryClass::Distinguishable => "0",
            SymmetryClass::Bosonic => "plus",
            SymmetryClass::Fermionic => "minus",
        };
        write!(f, "psi{}_{}", self.family.index(), suffix)
    }
}

impl FromStr for ExampleState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownState(s.to_string());
        let rest = s.strip_prefix("psi").ok_or_else(unknown)?;
        let (index, variant) = rest.split_once('_').ok_or_else(unknown)?;
        let family = match index {
            "1" => ExampleFamily::Psi1,
            "2" => ExampleFamily::Psi2,
            "3" => ExampleFamily::Psi3,
            "4" => ExampleFamily::Psi4,
            "5" => ExampleFamily::Psi5,
            _ => return Err(unknown()),
        };
        let class = match variant {
            "0" => SymmetryClass::Distinguishable,
            "plus" | "+" => SymmetryClass::Bosonic,
            "minus" | "-" => SymmetryClass::Fermionic,
            _ => return Err(unknown()),
        };
        Ok(Self { family, class })
    }
}

/// Squeezing `κ`, dephasing width `Δφ` and Fock truncation `n_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TmsvParams {
    kappa: f64,
    delta_phi: f64,
    n_max: usize,
}

impl TmsvParams {
    pub fn new(kappa: f64, delta_phi: f64, n_max: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&kappa) {
            return Err(Error::InvalidParameter(format!("kappa must lie in [0, 1), got {kappa}")));
        }
        if !(0.0..=PI).contains(&delta_phi) {
            return Err(Error::InvalidParameter(format!(
                "delta_phi must lie in [0, pi], got {delta_phi}"
            )));
        }
        if n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be at least 1".into()));
        }
        Ok(Self { kappa, delta_phi, n_max })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn delta_phi(&self) -> f64 {
        self.delta_phi
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Two modes truncated at Fock level `n_max`.
    pub fn space(&self) -> SpaceSpec {
        SpaceSpec::new(2, self.n_max + 1).expect("n_max validated")
    }

    /// Weight `κ^(2(n_max+1))` discarded by the truncation.
    pub fn truncated_weight(&self) -> f64 {
        self.kappa.powi(2 * (self.n_max as i32 + 1))
    }

    /// Flat indices of the diagonal pairs `|k⟩⊗|k⟩`.
    fn diagonal_support(&self) -> Vec<usize> {
        let d = self.n_max + 1;
        (0..d).map(|k| k * d + k).collect()
    }
}

/// A Fock-truncated state with the weight the truncation removed.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedState {
    pub state: StateVector,
    pub truncated_weight: f64,
}

/// Two-mode squeezed vacuum `√(1-κ²) Σ_k κ^k |k⟩⊗|k⟩`, truncated at `n_max`
/// and renormalized.
pub fn tmsv(params: &TmsvParams) -> Result<TruncatedState> {
    let space = params.space();
    let mut amps = DVector::zeros(space.dim());
    for (k, flat) in params.diagonal_support().into_iter().enumerate() {
        amps[flat] = C64::new(params.kappa.powi(k as i32), 0.0);
    }
    Ok(TruncatedState {
        state: StateVector::normalized(space, amps)?,
        truncated_weight: params.truncated_weight(),
    })
}

/// Raw test vector `|χ⟩ = Σ_{k ≤ n_max} |k⟩⊗|k⟩` (norm² = `n_max + 1`).
pub fn chi_vector(n_max: usize) -> Result<StateVector> {
    let d = n_max + 1;
    let space = SpaceSpec::new(2, d)?;
    let mut amps = DVector::zeros(space.dim());
    for k in 0..d {
        amps[k * d + k] = C64::new(1.0, 0.0);
    }
    StateVector::from_amplitudes(space, amps)
}

/// `sin(x)/x` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Two-mode squeezed vacuum after a joint phase kick uniformly distributed
/// over `[-Δφ/2, Δφ/2]`:
/// `ρ = Σ_{k,l} (1-κ²) κ^(k+l) sinc((k-l)Δφ) |k⟩⟨l|⊗|k⟩⟨l|`,
/// truncated at `n_max` and renormalized like [`tmsv`].
pub fn dephased_tmsv(params: &TmsvParams) -> Result<DensityMatrix> {
    let d = params.n_max + 1;
    let norm = 1.0 - params.truncated_weight();
    let prefactor = (1.0 - params.kappa * params.kappa) / norm;
    let block = DMatrix::from_fn(d, d, |k, l| {
        // sin((k-l)π) is not exactly zero in floating point
        let damping = if k != l && params.delta_phi == PI {
            0.0
        } else {
            sinc((k as f64 - l as f64) * params.delta_phi)
        };
        let value = prefactor * params.kappa.powi((k + l) as i32) * damping;
        C64::new(value, 0.0)
    });
    DensityMatrix::from_block(params.space(), params.diagonal_support(), block)
}

/// Closed form of `⟨χ|ρ_Δφ|χ⟩` for the untruncated state:
/// `(2/Δφ) arctan(((1+κ)/(1-κ)) tan(Δφ/2))`, with the limits
/// `(1+κ)/(1-κ)` at `Δφ = 0` and `1` at `Δφ = π`.
pub fn chi_expectation_analytic(kappa: f64, delta_phi: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::InvalidParameter(format!("kappa must lie in [0, 1), got {kappa}")));
    }
    if !(0.0..=PI).contains(&delta_phi) {
        return Err(Error::InvalidParameter(format!(
            "delta_phi must lie in [0, pi], got {delta_phi}"
        )));
    }
    let ratio = (1.0 + kappa) / (1.0 - kappa);
    Ok(if delta_phi == 0.0 {
        ratio
    } else if delta_phi == PI {
        1.0
    } else {
        2.0 / delta_phi * (ratio * (delta_phi / 2.0).tan()).atan()
    })
}
