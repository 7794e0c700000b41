mod support;

use nalgebra::DMatrix;
use proptest::prelude::*;
use qcorr::coherence::{
    classical_fidelity, classical_labels, classical_state, classify, gamma, incoherent_bound, make_witness,
    ClassicalMixture, ClassifyOptions,
};
use qcorr::hilbert::{
    expectation, project_symmetrize, subspace_dimension, symmetrizer, HermitianOperator, Sign, SpaceSpec,
    SymmetryClass,
};
use qcorr::separability::{
    schmidt, separability_eigen_solve, takagi_factorization, PartitionSpec, SolverOptions,
};
use qcorr::states::{dephased_tmsv, TmsvParams};
use qcorr::C64;
use rand::Rng;
use support::*;

fn dense(op: &HermitianOperator) -> DMatrix<C64> {
    op.to_dense()
}

#[test]
fn subspace_dimensions_are_projector_traces() {
    for n in 1..=4 {
        for d in 1..=6 {
            let space = SpaceSpec::new(n, d).unwrap();
            if space.dim() > 1296 {
                continue;
            }
            for (sign, class) in [(Sign::Plus, SymmetryClass::Bosonic), (Sign::Minus, SymmetryClass::Fermionic)] {
                let trace = symmetrizer(space, sign).unwrap().trace();
                assert!((trace - subspace_dimension(space, class) as f64).abs() < 1e-9, "N={n} d={d} {sign}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetrizers_are_orthogonal_projectors(n in 1usize..=3, d in 1usize..=4, plus in any::<bool>()) {
        let space = SpaceSpec::new(n, d).unwrap();
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let p = dense(&symmetrizer(space, sign).unwrap());
        prop_assert!((&p * &p - &p).norm() < 1e-12);
        prop_assert!((p.adjoint() - &p).norm() < 1e-12);
    }

    #[test]
    fn two_particle_sectors_are_complete(d in 1usize..=6) {
        let space = SpaceSpec::new(2, d).unwrap();
        let sum = dense(&symmetrizer(space, Sign::Plus).unwrap()) + dense(&symmetrizer(space, Sign::Minus).unwrap());
        prop_assert!((sum - DMatrix::identity(space.dim(), space.dim())).norm() < 1e-12);
    }

    #[test]
    fn fidelity_squared_is_incoherent_bound(seed in any::<u64>(), n in 1usize..=3, d in 2usize..=4, class in 0usize..3) {
        let class = [SymmetryClass::Distinguishable, SymmetryClass::Bosonic, SymmetryClass::Fermionic][class];
        prop_assume!(!(class == SymmetryClass::Fermionic && d < n));
        let mut rng = rng(seed);
        let space = SpaceSpec::new(n, d).unwrap();
        let psi = random_state(&mut rng, space);
        let f = classical_fidelity(&psi, class).unwrap();
        let g = incoherent_bound(&HermitianOperator::projector(&psi), class).unwrap();
        prop_assert!((f * f - g).abs() < 1e-12);
    }

    #[test]
    fn schmidt_spectrum_is_normalized(seed in any::<u64>(), d in 2usize..=5) {
        let mut rng = rng(seed);
        let psi = random_state(&mut rng, SpaceSpec::new(2, d).unwrap());
        let spectrum = schmidt(&psi).unwrap();
        prop_assert!((spectrum.weight() - 1.0).abs() < 1e-10);
        let g = spectrum.separable_bound();
        let rank = spectrum.values.iter().filter(|v| **v > 1e-12).count();
        prop_assert!(g <= 1.0 + 1e-12 && g >= 1.0 / rank as f64 - 1e-12);
    }

    #[test]
    fn takagi_values_are_singular_values(seed in any::<u64>(), d in 1usize..=6) {
        let mut rng = rng(seed);
        let a = DMatrix::from_fn(d, d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let m = (&a + a.transpose()).scale(0.5);
        let f = takagi_factorization(&m).unwrap();
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        for (t, s) in f.values.iter().zip(&sv) {
            prop_assert!((t - s).abs() < 1e-10);
        }
        let sigma = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(d, f.values.iter().map(|&v| C64::new(v, 0.0))));
        prop_assert!((&f.unitary * sigma * f.unitary.transpose() - &m).norm() < 1e-10);
    }

    #[test]
    fn skew_singular_values_pair(seed in any::<u64>(), d in 2usize..=7) {
        let mut rng = rng(seed);
        let a = DMatrix::from_fn(d, d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let m = &a - a.transpose();
        let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
        sv.sort_by(|x, y| y.total_cmp(x));
        for pair in sv.chunks_exact(2) {
            prop_assert!((pair[0] - pair[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn witness_is_nonnegative_on_classical_mixtures(seed in any::<u64>(), class in 0usize..3) {
        let class = [SymmetryClass::Distinguishable, SymmetryClass::Bosonic, SymmetryClass::Fermionic][class];
        let mut rng = rng(seed);
        let space = SpaceSpec::new(2, 3).unwrap();
        let l = random_hermitian(&mut rng, space).op;
        let g = incoherent_bound(&l, class).unwrap();
        let w = make_witness(l, g, class);
        let labels = classical_labels(space, class).unwrap();
        let k = rng.random_range(1..=labels.len());
        let mut weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|x| *x /= total);
        let chosen = (0..k).map(|_| labels[rng.random_range(0..labels.len())].clone()).collect();
        let rho = ClassicalMixture::new(space, class, weights, chosen).unwrap().density_matrix().unwrap();
        prop_assert!(w.expectation(&rho).unwrap() >= -1e-10);
        let pure = classical_state(space, &labels[rng.random_range(0..labels.len())], class).unwrap();
        prop_assert!(!w.detects(&pure).unwrap());
    }

    #[test]
    fn violation_verdict_is_scale_invariant(value in -5.0f64..5.0, g in 0.01f64..5.0, alpha in 0.01f64..100.0) {
        let before = gamma(value, g).unwrap() > 0.0;
        let after = gamma(alpha * value, alpha * g).unwrap() > 0.0;
        // the tolerance band is relative for |g| > 1 and absolute below
        prop_assume!((value - g).abs() > 1e-8 * (1.0 + alpha));
        prop_assert_eq!(before, after);
    }

    #[test]
    fn solver_sweeps_never_decrease(seed in any::<u64>(), n in 2usize..=3) {
        let mut rng = rng(seed);
        let space = SpaceSpec::new(n, 2).unwrap();
        let l = random_hermitian(&mut rng, space).op;
        let opts = SolverOptions { restarts: 4, seed, ..SolverOptions::default() };
        let out = separability_eigen_solve(&l, &PartitionSpec::full(n), SymmetryClass::Distinguishable, &opts).unwrap();
        for run in &out.restarts {
            for pair in run.history.windows(2) {
                prop_assert!(pair[1] >= pair[0] - 1e-12);
            }
        }
        let top = nalgebra::SymmetricEigen::new(l.to_dense()).eigenvalues.max();
        let diagonal = incoherent_bound(&l, SymmetryClass::Distinguishable).unwrap();
        prop_assert!(out.g <= top + 1e-9);
        prop_assert!(out.g >= diagonal - 1e-9);
    }

    #[test]
    fn dephasing_only_removes_coherence(k in 0usize..8, l in 0usize..8, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let m = k.abs_diff(l).max(1) as f64;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (d1, d2) = (lo * std::f64::consts::PI / m, hi * std::f64::consts::PI / m);
        let entry = |dphi: f64| {
            let rho = dephased_tmsv(&TmsvParams::new(0.5, dphi, 8).unwrap()).unwrap();
            rho.entry(k * 10, l * 10).norm()
        };
        prop_assert!(entry(d2) <= entry(d1) + 1e-12);
    }
}

/// Random positive operator supported on a sector: `Π A A† Π`.
///
/// Positivity matters: `⟨m|Π L Π|m⟩ / ⟨m|Π|m⟩ ≥ ⟨m|L|m⟩` uses
/// `⟨m|Π|m⟩ ≤ 1` and a nonnegative numerator; an indefinite `Π L Π` can have
/// `g± < g0 = 0`.
fn sector_operator(rng: &mut rand_chacha::ChaCha8Rng, space: SpaceSpec, sign: Sign) -> HermitianOperator {
    let a = random_hermitian(rng, space).op.to_dense();
    let p = symmetrizer(space, sign).unwrap().to_dense();
    let m = &p * &a * a.adjoint() * &p;
    HermitianOperator::from_dense(space, (&m + m.adjoint()).scale(0.5)).unwrap()
}

#[test]
fn bound_orderings_for_sector_supported_operators() {
    let mut rng = rng(23);
    let space = SpaceSpec::new(2, 3).unwrap();
    let opts = ClassifyOptions::default();
    for trial in 0..50 {
        let sign = if trial % 2 == 0 { Sign::Plus } else { Sign::Minus };
        let l = sector_operator(&mut rng, space, sign);
        let psi = project_symmetrize(&random_state(&mut rng, space), sign).unwrap();
        let r = classify(&l, &psi, &opts).unwrap();
        let (g_s, gsep_s) = match sign {
            Sign::Plus => (r.gplus, r.gsep_plus),
            Sign::Minus => (r.gminus, r.gsep_minus),
        };
        let (g_s, gsep_s, gsep0) = (g_s.value().unwrap(), gsep_s.value().unwrap(), r.gsep0.value().unwrap());
        assert!(r.g0 <= gsep0 + 1e-9, "trial {trial}: g0 {} > gsep0 {gsep0}", r.g0);
        assert!(r.g0 <= g_s + 1e-9, "trial {trial}: g0 {} > g± {g_s}", r.g0);
        assert!(gsep0 <= gsep_s + 1e-8, "trial {trial}: gsep0 {gsep0} > gsep± {gsep_s}");
        assert!((expectation(&l, &psi).unwrap() - r.expectation).abs() < 1e-15);
    }
}
