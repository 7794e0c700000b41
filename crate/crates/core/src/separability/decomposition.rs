use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::hilbert::{Sign, StateVector};
use crate::{Error, Result, C64, NULL_TOL};

/// Which bipartite decomposition produced a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchmidtVariant {
    /// Singular values of `M` (distinguishable particles).
    Schmidt,
    /// Takagi values of a symmetric `M` (bosons).
    Takagi,
    /// One value per antisymmetric pair of a skew `M` (fermions).
    Slater,
}

/// Descending, nonnegative decomposition coefficients `λ_k`.
///
/// For a normalized input `Σλ² = 1` (Schmidt, Takagi) or `2Σλ² = 1` (Slater,
/// where each value weighs a two-term pair).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtSpectrum {
    pub values: Vec<f64>,
    pub variant: SchmidtVariant,
}

impl SchmidtSpectrum {
    /// Largest separable expectation of `|ψ⟩⟨ψ|` for the matching product.
    pub fn separable_bound(&self) -> f64 {
        let first = self.values.first().copied().unwrap_or(0.0);
        let second = self.values.get(1).copied().unwrap_or(0.0);
        match self.variant {
            SchmidtVariant::Schmidt => first * first,
            // values are sorted, so the best pair is the top two (a missing
            // partner counts as zero)
            SchmidtVariant::Takagi => first * first + second * second,
            SchmidtVariant::Slater => 2.0 * first * first,
        }
    }

    /// `Σλ²` weighted by the number of kets per term.
    pub fn weight(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|v| v * v).sum();
        match self.variant {
            SchmidtVariant::Slater => 2.0 * sum,
            _ => sum,
        }
    }
}

/// `M[k][l] = ψ_{k,l}` for a two-particle state.
///
/// With `claim = Some(sign)` the matrix must be symmetric (`+`) or
/// antisymmetric (`-`) within `1e-10`.
pub fn coefficient_matrix(psi: &StateVector, claim: Option<Sign>) -> Result<DMatrix<C64>> {
    let space = psi.space();
    if space.n_particles() != 2 {
        return Err(Error::NotBipartite(space.n_particles()));
    }
    let d = space.local_dim();
    let amps = psi.amplitudes();
    let m = DMatrix::from_fn(d, d, |k, l| amps[k * d + l]);
    if let Some(sign) = claim {
        let transposed = match sign {
            Sign::Plus => m.transpose(),
            Sign::Minus => -m.transpose(),
        };
        let deviation = (&m - transposed).iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        if deviation > NULL_TOL {
            let kind = match sign {
                Sign::Plus => "symmetric",
                Sign::Minus => "antisymmetric",
            };
            return Err(Error::SymmetryViolated { kind, deviation });
        }
    }
    Ok(m)
}

fn singular_values_desc(m: DMatrix<C64>) -> Vec<f64> {
    let mut values: Vec<f64> = m.singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Schmidt coefficients: singular values of the coefficient matrix.
pub fn schmidt(psi: &StateVector) -> Result<SchmidtSpectrum> {
    let m = coefficient_matrix(psi, None)?;
    Ok(SchmidtSpectrum {
        values: singular_values_desc(m),
        variant: SchmidtVariant::Schmidt,
    })
}

/// `M = U diag(values) Uᵀ` with `U` unitary and values descending.
#[derive(Clone, Debug)]
pub struct TakagiFactorization {
    pub unitary: DMatrix<C64>,
    pub values: Vec<f64>,
}

/// Takagi (Autonne) factorization of a complex symmetric matrix.
///
/// Writing `M = B + iC`, a Takagi vector `u = x + iy` with `M ū = σ u`
/// corresponds to the eigenvector `(x, y)` of the real symmetric matrix
/// `[[B, C], [C, -B]]` for eigenvalue `σ`; its spectrum is `±σ_k`. Positive
/// eigenvalues give the nonzero Takagi values and mutually orthogonal
/// vectors even when values are degenerate; the null part of `U` is any
/// orthonormal completion.
pub fn takagi_factorization(m: &DMatrix<C64>) -> Result<TakagiFactorization> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.ncols(),
        });
    }
    let deviation = (m - m.transpose()).iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    if deviation > NULL_TOL {
        return Err(Error::SymmetryViolated {
            kind: "symmetric",
            deviation,
        });
    }
    let embedded = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i % n, j % n);
        let z = m[(bi, bj)];
        match (i < n, j < n) {
            (true, true) => z.re,
            (true, false) | (false, true) => z.im,
            (false, false) => -z.re,
        }
    });
    let eig = SymmetricEigen::new(embedded);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let scale = eig.eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);

    let mut columns: Vec<DVector<C64>> = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for &i in order.iter().take(n) {
        let sigma = eig.eigenvalues[i];
        if sigma <= 1e-12 * scale {
            break;
        }
        let v = eig.eigenvectors.column(i);
        let u = DVector::from_fn(n, |k, _| C64::new(v[k], v[k + n]));
        columns.push(u.normalize());
        values.push(sigma);
    }
    // orthonormal completion for the null space
    for k in 0..n {
        if columns.len() == n {
            break;
        }
        let mut e = DVector::zeros(n);
        e[k] = C64::new(1.0, 0.0);
        for c in &columns {
            let overlap = c.dotc(&e);
            e -= c * overlap;
        }
        let norm = e.norm();
        if norm > 1e-8 {
            columns.push(e.unscale(norm));
            values.push(0.0);
        }
    }
    if columns.len() != n {
        return Err(Error::SolverFailure("Takagi completion lost rank".into()));
    }
    Ok(TakagiFactorization {
        unitary: DMatrix::from_columns(&columns),
        values,
    })
}

/// Takagi values of the symmetric coefficient matrix of a bosonic state.
pub fn takagi(psi: &StateVector) -> Result<SchmidtSpectrum> {
    let m = coefficient_matrix(psi, Some(Sign::Plus))?;
    let mut values = takagi_factorization(&m)?.values;
    values.retain(|&v| v > 0.0);
    Ok(SchmidtSpectrum {
        values,
        variant: SchmidtVariant::Takagi,
    })
}

/// Slater coefficients of an antisymmetric coefficient matrix.
///
/// The singular values of a skew-symmetric matrix come in equal pairs
/// `(s, s)`; each pair is one term `λ(|e⟩⊗|f⟩ − |f⟩⊗|e⟩)` with `λ = s`. For
/// odd `d` the single unpaired zero mode is dropped.
pub fn slater(psi: &StateVector) -> Result<SchmidtSpectrum> {
    let m = coefficient_matrix(psi, Some(Sign::Minus))?;
    let singular = singular_values_desc(m);
    let scale = singular.first().copied().unwrap_or(0.0).max(1.0);
    let mut values = Vec::with_capacity(singular.len() / 2);
    for pair in singular.chunks_exact(2) {
        if (pair[0] - pair[1]).abs() > 1e-9 * scale {
            return Err(Error::SolverFailure(format!(
                "singular values {} and {} of a skew matrix do not pair",
                pair[0], pair[1]
            )));
        }
        values.push(0.5 * (pair[0] + pair[1]));
    }
    values.retain(|&v| v > 1e-15 * scale);
    Ok(SchmidtSpectrum {
        values,
        variant: SchmidtVariant::Slater,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{tensor_product, SpaceSpec};
    use crate::states::ExampleState;

    fn example(name: &str) -> StateVector {
        name.parse::<ExampleState>().unwrap().build().unwrap()
    }

    #[test]
    fn psi3_coefficients() {
        let m = coefficient_matrix(&example("psi3_0"), None).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m[(0, 1)].re - h).abs() < 1e-15 && (m[(2, 3)].re - h).abs() < 1e-15);
        assert!(m[(1, 0)].norm() < 1e-15);
        assert!(coefficient_matrix(&example("psi3_0"), Some(Sign::Plus)).is_err());
        assert!(coefficient_matrix(&example("psi4_0"), None).is_err());
    }

    #[test]
    fn product_state_has_one_coefficient() {
        let space = SpaceSpec::new(1, 3).unwrap();
        let a = StateVector::normalized(space, DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0), C64::new(0.5, 0.0)])).unwrap();
        let b = StateVector::normalized(space, DVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(1.0, 1.0), C64::new(-0.5, 0.0)])).unwrap();
        let spectrum = schmidt(&tensor_product(&a, &b).unwrap()).unwrap();
        assert!((spectrum.values[0] - 1.0).abs() < 1e-12);
        assert!(spectrum.values[1..].iter().all(|v| v.abs() < 1e-12));
        assert!((spectrum.separable_bound() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn table_values() {
        assert!((schmidt(&example("psi3_0")).unwrap().separable_bound() - 0.5).abs() < 1e-12);
        let t = takagi(&example("psi3_plus")).unwrap();
        assert_eq!(t.values.len(), 4);
        assert!(t.values.iter().all(|v| (v - 0.5).abs() < 1e-12));
        assert!((t.separable_bound() - 0.5).abs() < 1e-12);
        let s = slater(&example("psi3_minus")).unwrap();
        assert_eq!(s.values.len(), 2);
        assert!((s.separable_bound() - 0.5).abs() < 1e-12);
        assert!((slater(&example("psi2_minus")).unwrap().separable_bound() - 1.0).abs() < 1e-12);
        assert!((slater(&example("psi1_minus")).unwrap().separable_bound() - 1.0).abs() < 1e-12);
        assert!((takagi(&example("psi1_plus")).unwrap().separable_bound() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn minimal_fermionic_pair() {
        let space = SpaceSpec::new(2, 2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::from_real(space, &[0.0, h, -h, 0.0]).unwrap();
        let m = coefficient_matrix(&psi, Some(Sign::Minus)).unwrap();
        assert!((m[(0, 1)].re - h).abs() < 1e-15 && (m[(1, 0)].re + h).abs() < 1e-15);
        let s = slater(&psi).unwrap();
        assert!((s.values[0] - h).abs() < 1e-12);
        assert!((s.weight() - 1.0).abs() < 1e-12);
        assert!((s.separable_bound() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_product_pairs_with_zero() {
        let psi = StateVector::basis(SpaceSpec::new(2, 3).unwrap(), &[0, 0]).unwrap();
        let t = takagi(&psi).unwrap();
        assert_eq!(t.values.len(), 1);
        assert!((t.separable_bound() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn takagi_reconstructs_with_degeneracy() {
        let m = coefficient_matrix(&example("psi3_plus"), Some(Sign::Plus)).unwrap();
        let f = takagi_factorization(&m).unwrap();
        let sigma = DMatrix::from_diagonal(&DVector::from_iterator(4, f.values.iter().map(|&v| C64::new(v, 0.0))));
        let rebuilt = &f.unitary * sigma * f.unitary.transpose();
        assert!((rebuilt - &m).norm() < 1e-12);
        let gram = f.unitary.adjoint() * &f.unitary;
        assert!((gram - DMatrix::identity(4, 4)).norm() < 1e-12);
    }
}
