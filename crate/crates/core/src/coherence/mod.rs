//! Classical reference states, incoherent bounds and the classifier that
//! compares a measured `⟨L⟩` against every bound at once.
//!
//! A classical state of `N` qudits is a basis ket `|k_1…k_N⟩` for
//! distinguishable particles, or its (anti)symmetrized and normalized
//! version for bosons (fermions). Mixtures of these are incoherent, and by
//! convexity their largest `⟨L⟩` is reached on a pure member of the family.

mod classical;
mod report;

use crate::hilbert::{expectation, HermitianOperator, MultiIndex, StateRef, StateVector, SymmetryClass};
use crate::{Error, Result, NULL_TOL};

pub use classical::{classical_labels, classical_state, ClassicalMixture};
pub(crate) use classical::classical_terms;
pub use report::{
    classify, Bound, BoundsReport, ClassifyOptions, ConventionVerdicts, Inference, PerBound,
    SeparableMethod,
};

/// `max ⟨c|L|c⟩` over the pure classical states of `sym`.
pub fn incoherent_bound(l: &HermitianOperator, sym: SymmetryClass) -> Result<f64> {
    incoherent_argmax(l, sym).map(|(g, _)| g)
}

/// The incoherent bound together with the first label attaining it.
pub fn incoherent_argmax(l: &HermitianOperator, sym: SymmetryClass) -> Result<(f64, MultiIndex)> {
    let space = l.space();
    let mut best: Option<(f64, MultiIndex)> = None;
    for label in classical_labels(space, sym)? {
        let terms = classical_terms(space, label.levels(), sym);
        let value = l.data().quad_sparse(&terms).re;
        if best.as_ref().is_none_or(|(g, _)| value > *g) {
            best = Some((value, label));
        }
    }
    best.ok_or(Error::EmptyClassicalSet {
        n_particles: space.n_particles(),
        local_dim: space.local_dim(),
    })
}

/// `F(ψ) = max |⟨c|ψ⟩|` over the classical states of `sym`.
pub fn classical_fidelity(psi: &StateVector, sym: SymmetryClass) -> Result<f64> {
    psi.require_normalized()?;
    let space = psi.space();
    let amplitudes = psi.amplitudes();
    let mut best = 0.0f64;
    for label in classical_labels(space, sym)? {
        let overlap: crate::C64 = classical_terms(space, label.levels(), sym)
            .into_iter()
            .map(|(i, c)| c.conj() * amplitudes[i])
            .sum();
        best = best.max(overlap.norm());
    }
    Ok(best)
}

/// Slack below which `⟨L⟩ − g` counts as equality.
pub(crate) fn violation_slack(g: f64) -> f64 {
    NULL_TOL * g.abs().max(1.0)
}

/// Relative strength `Γ = max{(⟨L⟩ − g)/g, 0}` of a violation.
///
/// Excesses within `1e-10·max(1, |g|)` are rounding noise and give `Γ = 0`,
/// so `Γ > 0` exactly when the criterion `⟨L⟩ > g` is reported violated.
pub fn gamma(expectation: f64, g_max: f64) -> Result<f64> {
    if !(g_max > 0.0) {
        return Err(Error::NonpositiveBound(g_max));
    }
    let excess = expectation - g_max;
    if excess <= violation_slack(g_max) {
        return Ok(0.0);
    }
    Ok(excess / g_max)
}

/// `W = g 𝟙 − L`; a negative expectation certifies a state outside the
/// classical family the bound was taken over.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub observable: HermitianOperator,
    pub bound: f64,
    pub family: SymmetryClass,
}

pub fn make_witness(l: HermitianOperator, g_max: f64, family: SymmetryClass) -> Witness {
    Witness {
        observable: l,
        bound: g_max,
        family,
    }
}

impl Witness {
    /// `⟨W⟩ = g − ⟨L⟩` on a normalized state.
    pub fn expectation<'a>(&self, state: impl Into<StateRef<'a>>) -> Result<f64> {
        Ok(self.bound - expectation(&self.observable, state)?)
    }

    pub fn detects<'a>(&self, state: impl Into<StateRef<'a>>) -> Result<bool> {
        Ok(-self.expectation(state)? > violation_slack(self.bound))
    }

    /// Dense `g 𝟙 − L`.
    pub fn to_operator(&self) -> Result<HermitianOperator> {
        let space = self.observable.space();
        let dim = space.dim();
        let matrix = nalgebra::DMatrix::<crate::C64>::identity(dim, dim).scale(self.bound) - self.observable.to_dense();
        HermitianOperator::from_dense(space, matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::SpaceSpec;
    use crate::states::{superposition_s, ExampleState};

    fn example(name: &str) -> StateVector {
        name.parse::<ExampleState>().unwrap().build().unwrap()
    }

    #[test]
    fn table_incoherent_bounds() {
        let cases = [
            ("psi1_0", SymmetryClass::Distinguishable, 0.5),
            ("psi1_plus", SymmetryClass::Distinguishable, 0.25),
            ("psi1_plus", SymmetryClass::Bosonic, 0.5),
            ("psi1_minus", SymmetryClass::Fermionic, 0.5),
            ("psi2_minus", SymmetryClass::Distinguishable, 0.125),
            ("psi2_minus", SymmetryClass::Fermionic, 0.25),
            ("psi3_plus", SymmetryClass::Bosonic, 0.5),
            ("psi4_plus", SymmetryClass::Distinguishable, 1.0 / 12.0),
            ("psi4_minus", SymmetryClass::Fermionic, 0.5),
        ];
        for (name, sym, expected) in cases {
            let l = HermitianOperator::projector(&example(name));
            let g = incoherent_bound(&l, sym).unwrap();
            assert!((g - expected).abs() < 1e-12, "{name} {sym:?}: {g}");
        }
    }

    #[test]
    fn fidelity_examples() {
        let space = SpaceSpec::new(1, 4).unwrap();
        let k = StateVector::basis(space, &[2]).unwrap();
        assert!((classical_fidelity(&k, SymmetryClass::Distinguishable).unwrap() - 1.0).abs() < 1e-15);
        let s = superposition_s(1, 3, 4).unwrap();
        assert!((classical_fidelity(&s, SymmetryClass::Distinguishable).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((classical_fidelity(&example("psi2_0"), SymmetryClass::Distinguishable).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(1.0, 0.5).unwrap(), 1.0);
        assert_eq!(gamma(1.0, 0.25).unwrap(), 3.0);
        assert_eq!(gamma(0.3, 0.5).unwrap(), 0.0);
        assert_eq!(gamma(1.0 + 1e-15, 1.0).unwrap(), 0.0);
        assert!(matches!(gamma(1.0, 0.0), Err(Error::NonpositiveBound(_))));
        assert!(gamma(1.0, -0.5).is_err());
    }

    #[test]
    fn single_qudit_witness() {
        let s = superposition_s(0, 2, 4).unwrap();
        let w = make_witness(HermitianOperator::projector(&s), 0.5, SymmetryClass::Distinguishable);
        assert!((w.expectation(&s).unwrap() + 0.5).abs() < 1e-15);
        assert!(w.detects(&s).unwrap());
        let space = s.space();
        let k = StateVector::basis(space, &[0]).unwrap();
        assert!(w.expectation(&k).unwrap().abs() < 1e-15);
        assert!(!w.detects(&k).unwrap());
        let m = StateVector::basis(space, &[1]).unwrap();
        assert!((w.expectation(&m).unwrap() - 0.5).abs() < 1e-15);
        let dense = w.to_operator().unwrap();
        assert!((expectation(&dense, &s).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn fermions_need_enough_levels() {
        let space = SpaceSpec::new(3, 2).unwrap();
        let l = HermitianOperator::identity(space);
        assert!(matches!(
            incoherent_bound(&l, SymmetryClass::Fermionic),
            Err(Error::EmptyClassicalSet { n_particles: 3, local_dim: 2 })
        ));
    }
}
