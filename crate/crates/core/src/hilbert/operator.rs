use nalgebra::{DMatrix, DVector};

use crate::linalg::hermitian_eigen;
use crate::states::DensityMatrix;
use crate::{Error, Result, C64, CONSTRUCTION_TOL};

use super::state::symmetrize_raw;
use super::{Sign, SpaceSpec, StateVector};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Storage for Hermitian matrices on `d^N`-dimensional spaces.
///
/// Rank-one test operators and dephased two-mode states live on spaces of a
/// few thousand dimensions but touch only a thin slice of them, so neither is
/// materialized densely.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum MatrixData {
    /// Dense block on the coordinate subspace spanned by `support`
    /// (sorted, strictly increasing flat indices); zero elsewhere.
    Block {
        support: Vec<usize>,
        block: DMatrix<C64>,
    },
    /// `Σ_i w_i |v_i⟩⟨v_i|` with real weights.
    Spectral { terms: Vec<(f64, DVector<C64>)> },
}

impl MatrixData {
    pub(crate) fn dense(matrix: DMatrix<C64>) -> Self {
        MatrixData::Block {
            support: (0..matrix.nrows()).collect(),
            block: matrix,
        }
    }

    pub(crate) fn entry(&self, row: usize, col: usize) -> C64 {
        match self {
            MatrixData::Block { support, block } => {
                match (support.binary_search(&row), support.binary_search(&col)) {
                    (Ok(i), Ok(j)) => block[(i, j)],
                    _ => ZERO,
                }
            }
            MatrixData::Spectral { terms } => terms
                .iter()
                .map(|(w, v)| v[row] * v[col].conj() * *w)
                .sum(),
        }
    }

    pub(crate) fn apply(&self, x: &DVector<C64>) -> DVector<C64> {
        match self {
            MatrixData::Block { support, block } => {
                let gathered = DVector::from_iterator(support.len(), support.iter().map(|&s| x[s]));
                let product = block * gathered;
                let mut out = DVector::zeros(x.len());
                for (&s, v) in support.iter().zip(product.iter()) {
                    out[s] = *v;
                }
                out
            }
            MatrixData::Spectral { terms } => {
                let mut out = DVector::zeros(x.len());
                for (w, v) in terms {
                    out.axpy(v.dotc(x) * *w, v, C64::new(1.0, 0.0));
                }
                out
            }
        }
    }

    /// `⟨x|A|x⟩`.
    pub(crate) fn quad(&self, x: &DVector<C64>) -> C64 {
        match self {
            MatrixData::Block { support, block } => {
                let gathered = DVector::from_iterator(support.len(), support.iter().map(|&s| x[s]));
                gathered.dotc(&(block * &gathered))
            }
            MatrixData::Spectral { terms } => terms
                .iter()
                .map(|(w, v)| C64::new(w * v.dotc(x).norm_sqr(), 0.0))
                .sum(),
        }
    }

    /// `⟨x|A|x⟩` for `x` given as `(flat index, amplitude)` pairs.
    pub(crate) fn quad_sparse(&self, x: &[(usize, C64)]) -> C64 {
        match self {
            MatrixData::Spectral { terms } => terms
                .iter()
                .map(|(w, v)| {
                    let overlap: C64 = x.iter().map(|&(i, a)| v[i].conj() * a).sum();
                    C64::new(w * overlap.norm_sqr(), 0.0)
                })
                .sum(),
            MatrixData::Block { .. } => {
                let mut acc = ZERO;
                for &(i, a) in x {
                    for &(j, b) in x {
                        acc += a.conj() * self.entry(i, j) * b;
                    }
                }
                acc
            }
        }
    }

    pub(crate) fn trace(&self) -> C64 {
        match self {
            MatrixData::Block { block, .. } => block.trace(),
            MatrixData::Spectral { terms } => {
                terms.iter().map(|(w, v)| C64::new(w * v.norm_squared(), 0.0)).sum()
            }
        }
    }

    /// `tr[A B]`.
    pub(crate) fn trace_product(&self, other: &MatrixData) -> C64 {
        match (self, other) {
            (MatrixData::Spectral { terms }, m) | (m, MatrixData::Spectral { terms }) => {
                terms.iter().map(|(w, v)| m.quad(v) * *w).sum()
            }
            (MatrixData::Block { support, block }, b) => {
                let mut acc = ZERO;
                for (i, &si) in support.iter().enumerate() {
                    for (j, &sj) in support.iter().enumerate() {
                        let a = block[(i, j)];
                        if a != ZERO {
                            acc += a * b.entry(sj, si);
                        }
                    }
                }
                acc
            }
        }
    }

    pub(crate) fn to_dense(&self, dim: usize) -> DMatrix<C64> {
        match self {
            MatrixData::Block { support, block } => {
                let mut out = DMatrix::zeros(dim, dim);
                for (i, &si) in support.iter().enumerate() {
                    for (j, &sj) in support.iter().enumerate() {
                        out[(si, sj)] = block[(i, j)];
                    }
                }
                out
            }
            MatrixData::Spectral { terms } => {
                let mut out = DMatrix::zeros(dim, dim);
                for (w, v) in terms {
                    out += (v * v.adjoint()).scale(*w);
                }
                out
            }
        }
    }

    /// Largest entrywise deviation from `A = A†`.
    pub(crate) fn hermiticity_defect(&self) -> f64 {
        match self {
            MatrixData::Block { block, .. } => {
                let mut worst: f64 = 0.0;
                for i in 0..block.nrows() {
                    for j in i..block.ncols() {
                        worst = worst.max((block[(i, j)] - block[(j, i)].conj()).norm());
                    }
                }
                worst
            }
            MatrixData::Spectral { .. } => 0.0,
        }
    }

    /// Spectral factors `(w_i, v_i)` with eigenvalues below `1e-12·max|w|` dropped.
    pub(crate) fn factors(&self, dim: usize) -> Vec<(f64, DVector<C64>)> {
        match self {
            MatrixData::Spectral { terms } => terms.clone(),
            MatrixData::Block { support, block } => {
                let (values, vectors) = hermitian_eigen(block.clone());
                let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                values
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| w.abs() > 1e-12 * scale)
                    .map(|(k, &w)| {
                        let mut v = DVector::zeros(dim);
                        for (i, &s) in support.iter().enumerate() {
                            v[s] = vectors[(i, k)];
                        }
                        (w, v)
                    })
                    .collect()
            }
        }
    }

    pub(crate) fn scaled(&self, factor: f64) -> MatrixData {
        match self {
            MatrixData::Block { support, block } => MatrixData::Block {
                support: support.clone(),
                block: block.scale(factor),
            },
            MatrixData::Spectral { terms } => MatrixData::Spectral {
                terms: terms.iter().map(|(w, v)| (w * factor, v.clone())).collect(),
            },
        }
    }
}

/// Bounded Hermitian operator on a multi-qudit space: test operators `L`
/// and witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    space: SpaceSpec,
    data: MatrixData,
}

impl HermitianOperator {
    /// Dense matrix; must equal its conjugate transpose within `1e-12`.
    pub fn from_dense(space: SpaceSpec, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Self::checked(space, MatrixData::dense(matrix))
    }

    /// Matrix that vanishes outside the coordinate subspace spanned by the
    /// flat indices in `support`.
    pub fn from_block(space: SpaceSpec, support: Vec<usize>, block: DMatrix<C64>) -> Result<Self> {
        if block.nrows() != support.len() || block.ncols() != support.len() {
            return Err(Error::DimensionMismatch {
                expected: support.len(),
                found: block.nrows().max(block.ncols()),
            });
        }
        if support.windows(2).any(|w| w[0] >= w[1]) || support.last().is_some_and(|&s| s >= space.dim()) {
            return Err(Error::InvalidParameter(
                "support must be strictly increasing flat indices inside the space".into(),
            ));
        }
        Self::checked(space, MatrixData::Block { support, block })
    }

    /// `L = |v⟩⟨v|` for the vector as given (no normalization).
    pub fn projector(v: &StateVector) -> Self {
        Self {
            space: v.space(),
            data: MatrixData::Spectral {
                terms: vec![(1.0, v.amplitudes().clone())],
            },
        }
    }

    /// `Σ_i w_i |v_i⟩⟨v_i|`.
    pub fn from_terms(space: SpaceSpec, terms: Vec<(f64, StateVector)>) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for (w, v) in terms {
            if v.space() != space {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    found: v.space().dim(),
                });
            }
            if !w.is_finite() {
                return Err(Error::InvalidParameter(format!("weight {w} is not finite")));
            }
            out.push((w, v.into_amplitudes()));
        }
        Ok(Self {
            space,
            data: MatrixData::Spectral { terms: out },
        })
    }

    pub fn identity(space: SpaceSpec) -> Self {
        Self {
            space,
            data: MatrixData::dense(DMatrix::identity(space.dim(), space.dim())),
        }
    }

    fn checked(space: SpaceSpec, data: MatrixData) -> Result<Self> {
        let defect = data.hermiticity_defect();
        if defect > CONSTRUCTION_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { space, data })
    }

    pub fn space(&self) -> SpaceSpec {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Matrix element `⟨row|L|col⟩` in the flat basis.
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.data.entry(row, col)
    }

    pub fn apply(&self, psi: &StateVector) -> Result<DVector<C64>> {
        self.check_space(psi.space())?;
        Ok(self.data.apply(psi.amplitudes()))
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        self.data.to_dense(self.dim())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            space: self.space,
            data: self.data.scaled(factor),
        }
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    /// Eigen-factors `(w_i, v_i)` with `L = Σ w_i |v_i⟩⟨v_i|`, negligible
    /// eigenvalues dropped.
    pub fn factors(&self) -> Vec<(f64, StateVector)> {
        self.data
            .factors(self.dim())
            .into_iter()
            .map(|(w, v)| {
                let state = StateVector::from_amplitudes(self.space, v).expect("factor has space dimension");
                (w, state)
            })
            .collect()
    }

    /// `Some(|v⟩)` with `L = |v⟩⟨v|` when `L` is a positive rank-one operator.
    pub fn rank_one_vector(&self) -> Option<StateVector> {
        let factors = self.factors();
        match factors.as_slice() {
            [(w, v)] if *w > 0.0 => Some(v.scale(w.sqrt())),
            _ => None,
        }
    }

    /// Frobenius norm of `Π±L − L`; zero exactly when `L` lives in the sector.
    pub fn sector_defect(&self, sign: Sign) -> Result<f64> {
        let dim = self.dim();
        match &self.data {
            MatrixData::Spectral { terms } => {
                // ‖(Π−I)L‖² = Σ_ij w_i w_j ⟨r_j|r_i⟩⟨v_i|v_j⟩ with r_i = (Π−I)v_i
                let residuals = terms
                    .iter()
                    .map(|(_, v)| Ok(symmetrize_raw(self.space, v, sign)? - v))
                    .collect::<Result<Vec<_>>>()?;
                let mut acc = 0.0;
                for (i, (wi, vi)) in terms.iter().enumerate() {
                    for (j, (wj, vj)) in terms.iter().enumerate() {
                        acc += (residuals[j].dotc(&residuals[i]) * vi.dotc(vj)).re * wi * wj;
                    }
                }
                Ok(acc.max(0.0).sqrt())
            }
            MatrixData::Block { support, block } => {
                let mut acc = 0.0;
                for j in 0..support.len() {
                    let mut column = DVector::zeros(dim);
                    for (i, &si) in support.iter().enumerate() {
                        column[si] = block[(i, j)];
                    }
                    let projected = symmetrize_raw(self.space, &column, sign)?;
                    acc += (projected - column).norm_squared();
                }
                Ok(acc.sqrt())
            }
        }
    }

    pub(crate) fn data(&self) -> &MatrixData {
        &self.data
    }

    fn check_space(&self, other: SpaceSpec) -> Result<()> {
        if self.space != other {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

/// The projector `Π± = (1/N!) Σ_σ (±1)^|σ| P_σ` as a dense operator.
pub fn symmetrizer(space: SpaceSpec, sign: Sign) -> Result<HermitianOperator> {
    let dim = space.dim();
    let mut matrix = DMatrix::zeros(dim, dim);
    let mut column = DVector::zeros(dim);
    for m in 0..dim {
        column[m] = C64::new(1.0, 0.0);
        let image = symmetrize_raw(space, &column, sign)?;
        matrix.set_column(m, &image);
        column[m] = ZERO;
    }
    Ok(HermitianOperator {
        space,
        data: MatrixData::dense(matrix),
    })
}

/// A pure or mixed state, for functions that accept either.
#[derive(Clone, Copy, Debug)]
pub enum StateRef<'a> {
    Pure(&'a StateVector),
    Mixed(&'a DensityMatrix),
}

impl StateRef<'_> {
    pub fn space(&self) -> SpaceSpec {
        match self {
            StateRef::Pure(psi) => psi.space(),
            StateRef::Mixed(rho) => rho.space(),
        }
    }
}

impl<'a> From<&'a StateVector> for StateRef<'a> {
    fn from(psi: &'a StateVector) -> Self {
        StateRef::Pure(psi)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(rho: &'a DensityMatrix) -> Self {
        StateRef::Mixed(rho)
    }
}

/// `⟨ψ|L|ψ⟩` or `tr[ρL]` for a normalized state.
pub fn expectation<'a>(l: &HermitianOperator, state: impl Into<StateRef<'a>>) -> Result<f64> {
    let state = state.into();
    l.check_space(state.space())?;
    let value = match state {
        StateRef::Pure(psi) => {
            psi.require_normalized()?;
            l.data.quad(psi.amplitudes())
        }
        StateRef::Mixed(rho) => rho.data().trace_product(&l.data),
    };
    if value.im.abs() > 1e-10 * value.re.abs().max(1.0) {
        return Err(Error::ImaginaryResidue(value.im));
    }
    Ok(value.re)
}
