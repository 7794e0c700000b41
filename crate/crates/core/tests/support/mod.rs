//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use qcorr::hilbert::{
    HermitianOperator, Permutation, SpaceSpec, StateVector, SymmetryClass,
};
use qcorr::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, dim: usize) -> DVector<C64> {
    DVector::from_fn(dim, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    })
}

pub fn random_state(rng: &mut ChaCha8Rng, space: SpaceSpec) -> StateVector {
    StateVector::normalized(space, gaussian_vector(rng, space.dim())).unwrap()
}

/// A test operator together with the data the oracles evaluate it from.
pub struct TestOperator {
    pub op: HermitianOperator,
    repr: Repr,
}

enum Repr {
    Dense(DMatrix<C64>),
    Terms(Vec<(f64, DVector<C64>)>),
}

impl TestOperator {
    pub fn dense(space: SpaceSpec, matrix: DMatrix<C64>) -> Self {
        let op = HermitianOperator::from_dense(space, matrix.clone()).unwrap();
        TestOperator {
            op,
            repr: Repr::Dense(matrix),
        }
    }

    pub fn terms(space: SpaceSpec, terms: Vec<(f64, DVector<C64>)>) -> Self {
        let states = terms
            .iter()
            .map(|(w, v)| (*w, StateVector::from_amplitudes(space, v.clone()).unwrap()))
            .collect();
        TestOperator {
            op: HermitianOperator::from_terms(space, states).unwrap(),
            repr: Repr::Terms(terms),
        }
    }

    /// `⟨x|L|x⟩` straight from the matrix or the terms.
    pub fn quad(&self, x: &DVector<C64>) -> f64 {
        match &self.repr {
            Repr::Dense(m) => x.dotc(&(m * x)).re,
            Repr::Terms(terms) => terms.iter().map(|(w, v)| w * v.dotc(x).norm_sqr()).sum(),
        }
    }

    /// `⟨x|L|x⟩` for a vector given by its nonzero entries.
    pub fn quad_sparse(&self, x: &[(usize, C64)]) -> f64 {
        match &self.repr {
            Repr::Dense(m) => x
                .iter()
                .flat_map(|&(i, a)| x.iter().map(move |&(j, b)| a.conj() * m[(i, j)] * b))
                .sum::<C64>()
                .re,
            Repr::Terms(terms) => terms
                .iter()
                .map(|(w, v)| w * x.iter().map(|&(i, a)| v[i].conj() * a).sum::<C64>().norm_sqr())
                .sum(),
        }
    }
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, space: SpaceSpec) -> TestOperator {
    let dim = space.dim();
    let a = DMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    TestOperator::dense(space, (&a + a.adjoint()).scale(0.5))
}

pub fn random_low_rank(rng: &mut ChaCha8Rng, space: SpaceSpec, rank: usize) -> TestOperator {
    let terms = (0..rank)
        .map(|_| {
            let w: f64 = rng.random_range(-1.0..1.0);
            (w, gaussian_vector(rng, space.dim()))
        })
        .collect();
    TestOperator::terms(space, terms)
}

/// `Π±|k⟩`, normalized, built by summing the permuted kets one by one.
pub fn materialized_classical(space: SpaceSpec, levels: &[usize], class: SymmetryClass) -> Option<DVector<C64>> {
    let flat = |ls: &[usize]| ls.iter().fold(0, |acc, &k| acc * space.local_dim() + k);
    let mut sum = DVector::zeros(space.dim());
    let Some(sign) = class.sign() else {
        sum[flat(levels)] = C64::new(1.0, 0.0);
        return Some(sum);
    };
    for sigma in Permutation::all(space.n_particles()).unwrap() {
        let moved: Vec<usize> = sigma.mapping().iter().map(|&i| levels[i]).collect();
        sum[flat(&moved)] += C64::new(sign.weight(sigma.parity()), 0.0);
    }
    let norm = sum.norm();
    (norm > 1e-9).then(|| sum.unscale(norm))
}

/// Sorted labels for a class, found by scanning every basis ket.
pub fn scanned_labels(space: SpaceSpec, class: SymmetryClass) -> Vec<Vec<usize>> {
    (0..space.dim())
        .map(|flat| space.unflatten(flat).unwrap().levels().to_vec())
        .filter(|levels| match class {
            SymmetryClass::Distinguishable => true,
            SymmetryClass::Bosonic => levels.windows(2).all(|w| w[0] <= w[1]),
            SymmetryClass::Fermionic => levels.windows(2).all(|w| w[0] < w[1]),
        })
        .collect()
}

/// Brute-force incoherent bound; `None` for an empty family.
pub fn brute_incoherent_bound(l: &TestOperator, class: SymmetryClass) -> Option<f64> {
    let space = l.op.space();
    let labels = scanned_labels(space, class);
    if class == SymmetryClass::Distinguishable {
        // the family is the basis itself, so each vector has one entry
        return labels
            .iter()
            .map(|levels| {
                let flat = levels.iter().fold(0, |acc, &k| acc * space.local_dim() + k);
                l.quad_sparse(&[(flat, C64::new(1.0, 0.0))])
            })
            .reduce(f64::max);
    }
    labels
        .iter()
        .filter_map(|levels| materialized_classical(space, levels, class))
        .map(|c| l.quad_sparse(&nonzeros(&c)))
        .reduce(f64::max)
}

fn nonzeros(x: &DVector<C64>) -> Vec<(usize, C64)> {
    x.iter().enumerate().filter(|(_, a)| a.norm_sqr() > 0.0).map(|(i, a)| (i, *a)).collect()
}

/// Adaptive Simpson quadrature.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64, m: f64, fm: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// `⟨χ|ρ_Δφ|χ⟩` as the phase average of `(1−κ²)/(1+κ²−2κ cos 2φ)`.
pub fn chi_quadrature(kappa: f64, delta_phi: f64) -> f64 {
    let f = |phi: f64| (1.0 - kappa * kappa) / (1.0 + kappa * kappa - 2.0 * kappa * (2.0 * phi).cos());
    if delta_phi == 0.0 {
        return f(0.0);
    }
    integrate(&f, -delta_phi / 2.0, delta_phi / 2.0, 1e-13) / delta_phi
}

fn qubit(theta: f64, phi: f64) -> DVector<C64> {
    DVector::from_vec(vec![
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ])
}

fn product3(angles: &[f64; 6]) -> DVector<C64> {
    let a = qubit(angles[0], angles[1]);
    let b = qubit(angles[2], angles[3]);
    let c = qubit(angles[4], angles[5]);
    a.kronecker(&b).kronecker(&c)
}

/// Max of `⟨abc|L|abc⟩` over three-qubit product states: a Bloch-sphere grid
/// followed by pattern-search refinement of the best grid points.
pub fn three_qubit_product_oracle(l: &TestOperator, grid: usize) -> f64 {
    let thetas: Vec<f64> = (0..=grid).map(|i| std::f64::consts::PI * i as f64 / grid as f64).collect();
    let phis: Vec<f64> = (0..2 * grid).map(|i| std::f64::consts::PI * i as f64 / grid as f64).collect();
    let singles: Vec<(f64, f64)> = thetas
        .iter()
        .flat_map(|&t| phis.iter().map(move |&p| (t, p)))
        .collect();
    let mut scored: Vec<(f64, [f64; 6])> = Vec::new();
    for &(t0, p0) in &singles {
        for &(t1, p1) in &singles {
            for &(t2, p2) in &singles {
                let angles = [t0, p0, t1, p1, t2, p2];
                scored.push((l.quad(&product3(&angles)), angles));
            }
        }
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    scored
        .iter()
        .take(8)
        .map(|&(value, angles)| refine(l, value, angles))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn refine(l: &TestOperator, mut best: f64, mut angles: [f64; 6]) -> f64 {
    let mut step = 0.2;
    while step > 1e-9 {
        let mut improved = false;
        for i in 0..6 {
            for dir in [1.0, -1.0] {
                let mut trial = angles;
                trial[i] += dir * step;
                let value = l.quad(&product3(&trial));
                if value > best {
                    best = value;
                    angles = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    best
}
