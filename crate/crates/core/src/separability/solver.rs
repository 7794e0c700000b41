use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hilbert::{
    apply_permutation, symmetrize_raw, HermitianOperator, MultiIndex, Permutation, SpaceSpec,
    StateVector, SymmetryClass,
};
use crate::linalg::{hermitian_eigen, top_eigenpair};
use crate::{Error, Result, C64, NULL_TOL};

use super::PartitionSpec;

/// How many fresh random draws a restart may take before giving up.
const MAX_REDRAWS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            restarts: 32,
            max_iters: 500,
            tol: 1e-10,
            seed: 42,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidParameter(
                "restarts and max_iters must be at least 1".into(),
            ));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "solver tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub g: f64,
    pub sweeps: usize,
    /// Objective at the initial point and after every sweep.
    pub history: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct SolverOutcome {
    /// Best objective over all restarts.
    pub g: f64,
    /// Index of the restart that produced `g` (lowest index among ties).
    pub restart: usize,
    pub sweeps: usize,
    pub history: Vec<f64>,
    /// Unit block vectors `x_j`, one per partition block, at the optimum.
    pub factors: Vec<DVector<C64>>,
    pub restarts: Vec<RestartSummary>,
}

/// Bounds over partially and fully separable states of `N ≥ 3` particles.
#[derive(Clone, Debug, PartialEq)]
pub struct MultipartiteBounds {
    /// Largest bipartition bound.
    pub partsep: f64,
    /// Bound over full products `|x_1⟩⊗…⊗|x_N⟩`.
    pub fullsep: f64,
    pub bipartitions: Vec<(PartitionSpec, f64)>,
}

/// Problem data after moving each block's particles next to each other.
struct Problem {
    space: SpaceSpec,
    dims: Vec<usize>,
    /// Factors of the numerator `ℙLℙ`.
    terms: Vec<(f64, DVector<C64>)>,
    sign: Option<crate::hilbert::Sign>,
}

impl Problem {
    fn product(&self, xs: &[DVector<C64>]) -> DVector<C64> {
        let mut out = xs[0].clone();
        for x in &xs[1..] {
            out = out.kronecker(x);
        }
        out
    }

    fn numerator(&self, x: &DVector<C64>) -> f64 {
        self.terms.iter().map(|(w, u)| w * u.dotc(x).norm_sqr()).sum()
    }

    fn denominator(&self, x: &DVector<C64>) -> Result<f64> {
        match self.sign {
            None => Ok(x.norm_squared()),
            Some(sign) => Ok(x.dotc(&symmetrize_raw(self.space, x, sign)?).re),
        }
    }

    /// `(⟨x_{-j}| ⊗ 𝟙_j) u`: contracts every block except `j`.
    fn contract(&self, u: &DVector<C64>, xs: &[DVector<C64>], j: usize) -> DVector<C64> {
        let k = self.dims.len();
        let mut out = DVector::zeros(self.dims[j]);
        let mut idx = vec![0usize; k];
        for amp in u.iter() {
            if *amp != C64::new(0.0, 0.0) {
                let mut coeff = *amp;
                for (b, x) in xs.iter().enumerate() {
                    if b != j {
                        coeff *= x[idx[b]].conj();
                    }
                }
                out[idx[j]] += coeff;
            }
            // odometer over block indices, last block fastest
            for b in (0..k).rev() {
                idx[b] += 1;
                if idx[b] < self.dims[b] {
                    break;
                }
                idx[b] = 0;
            }
        }
        out
    }

    /// Reduced operators `(A_j, B_j)` so that the objective as a function of
    /// `x_j` reads `x_j† A_j x_j / x_j† B_j x_j`.
    fn reduced(&self, xs: &[DVector<C64>], j: usize) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
        let dj = self.dims[j];
        let mut a = DMatrix::zeros(dj, dj);
        for (w, u) in &self.terms {
            let phi = self.contract(u, xs, j);
            a += (&phi * phi.adjoint()).scale(*w);
        }
        let b = match self.sign {
            None => {
                let others: f64 = xs
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| *b != j)
                    .map(|(_, x)| x.norm_squared())
                    .product();
                DMatrix::identity(dj, dj).scale(others)
            }
            Some(sign) => {
                let mut b = DMatrix::zeros(dj, dj);
                let mut probe = xs.to_vec();
                for col in 0..dj {
                    let mut e = DVector::zeros(dj);
                    e[col] = C64::new(1.0, 0.0);
                    probe[j] = e;
                    let projected = symmetrize_raw(self.space, &self.product(&probe), sign)?;
                    b.set_column(col, &self.contract(&projected, xs, j));
                }
                // B is Hermitian in exact arithmetic
                (&b + b.adjoint()).scale(0.5)
            }
        };
        Ok((a, b))
    }

    fn objective(&self, xs: &[DVector<C64>]) -> Result<Option<f64>> {
        let x = self.product(xs);
        let den = self.denominator(&x)?;
        if den < NULL_TOL {
            return Ok(None);
        }
        Ok(Some(self.numerator(&x) / den))
    }
}

/// Top solution of `A x = g B x` restricted to the range of `B`.
fn generalized_top(a: &DMatrix<C64>, b: &DMatrix<C64>) -> Option<DVector<C64>> {
    let (values, vectors) = hermitian_eigen(b.clone());
    let scale = values.first().copied().unwrap_or(0.0);
    if scale < NULL_TOL {
        return None;
    }
    let kept: Vec<usize> = (0..values.len()).filter(|&i| values[i] > NULL_TOL * scale.max(1.0)).collect();
    let n = a.nrows();
    // columns u_i / sqrt(b_i) whiten B on its range
    let w = DMatrix::from_fn(n, kept.len(), |r, c| vectors[(r, kept[c])] / values[kept[c]].sqrt());
    let reduced = w.adjoint() * a * &w;
    let reduced = (&reduced + reduced.adjoint()).scale(0.5);
    let (_, y) = top_eigenpair(&reduced);
    let x = w * y;
    let norm = x.norm();
    (norm > 0.0).then(|| x.unscale(norm))
}

fn check_commutator(l: &HermitianOperator, terms: &[(f64, DVector<C64>)], projected: &[DVector<C64>]) -> Result<()> {
    // A = ℙL = Σ w |ℙv⟩⟨v|; [L, ℙ] = 0 iff A is Hermitian. Work in an
    // orthonormal basis of span{v_i, ℙv_i} to avoid cancellation.
    let r = terms.len();
    if r == 0 {
        return Ok(());
    }
    let dim = l.dim();
    let mut s = DMatrix::zeros(dim, 2 * r);
    for (i, ((_, v), p)) in terms.iter().zip(projected).enumerate() {
        s.set_column(i, v);
        s.set_column(r + i, p);
    }
    let q = s.clone().qr().q();
    let coords = q.adjoint() * &s;
    let m = coords.nrows();
    let mut a = DMatrix::<C64>::zeros(m, m);
    for (i, (w, _)) in terms.iter().enumerate() {
        let cv = coords.column(i);
        let cp = coords.column(r + i);
        a += (cp * cv.adjoint()).scale(*w);
    }
    let defect = (&a - a.adjoint()).norm();
    let scale = terms.iter().fold(1.0f64, |acc, (w, _)| acc.max(w.abs()));
    if defect > NULL_TOL * scale {
        return Err(Error::CommutatorViolation(defect));
    }
    Ok(())
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    });
    let norm = v.norm();
    v.unscale(norm)
}

/// Reduced density matrix of `u` on block `j`, as `Tr_{-j}|u⟩⟨u|`.
fn block_marginal(u: &DVector<C64>, dims: &[usize], j: usize) -> DMatrix<C64> {
    let inner: usize = dims[j + 1..].iter().product();
    let dj = dims[j];
    let outer: usize = dims[..j].iter().product();
    let mut rho = DMatrix::zeros(dj, dj);
    for o in 0..outer {
        for i in 0..inner {
            let column = DVector::from_fn(dj, |a, _| u[(o * dj + a) * inner + i]);
            rho += &column * column.adjoint();
        }
    }
    rho
}

/// `⟨m|Π±|m⟩` for a basis ket: the fraction of permutations fixing `m`,
/// signed for fermions.
fn basis_sector_weight(levels: &[usize], d: usize, class: SymmetryClass) -> f64 {
    let n = levels.len();
    let occupations = MultiIndex(levels.to_vec()).occupations(d);
    let n_fact: f64 = (1..=n).map(|k| k as f64).product();
    match class {
        SymmetryClass::Distinguishable => 1.0,
        SymmetryClass::Bosonic => {
            occupations.iter().map(|&c| (1..=c).map(|k| k as f64).product::<f64>()).product::<f64>() / n_fact
        }
        SymmetryClass::Fermionic => {
            if occupations.iter().all(|&c| c <= 1) {
                1.0 / n_fact
            } else {
                0.0
            }
        }
    }
}

fn basis_blocks(levels: &[usize], dims: &[usize], d: usize) -> Vec<DVector<C64>> {
    let mut pos = 0;
    dims.iter()
        .map(|&dj| {
            let mut width = 0;
            let mut size = 1;
            while size < dj {
                size *= d;
                width += 1;
            }
            let index = levels[pos..pos + width].iter().fold(0, |acc, &x| acc * d + x);
            pos += width;
            let mut e = DVector::zeros(dj);
            e[index] = C64::new(1.0, 0.0);
            e
        })
        .collect()
}

fn best_basis_product(problem: &Problem, class: SymmetryClass) -> Option<Vec<DVector<C64>>> {
    let space = problem.space;
    let d = space.local_dim();
    let mut levels = vec![0; space.n_particles()];
    let mut best: Option<(f64, usize)> = None;
    for flat in 0..space.dim() {
        space.unflatten_into(flat, &mut levels);
        let den = basis_sector_weight(&levels, d, class);
        if den < NULL_TOL {
            continue;
        }
        let num: f64 = problem.terms.iter().map(|(w, u)| w * u[flat].norm_sqr()).sum();
        let ratio = num / den;
        if best.is_none_or(|(b, _)| ratio > b + 1e-14) {
            best = Some((ratio, flat));
        }
    }
    let (_, flat) = best?;
    space.unflatten_into(flat, &mut levels);
    Some(basis_blocks(&levels, &problem.dims, d))
}

fn run_restart(
    problem: &Problem,
    init: Option<Vec<DVector<C64>>>,
    restart: usize,
    opts: &SolverOptions,
) -> Result<(RestartSummary, Vec<DVector<C64>>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(restart as u64);
    let draw = |rng: &mut ChaCha8Rng| problem.dims.iter().map(|&dj| random_unit(rng, dj)).collect::<Vec<_>>();

    let mut xs = init.unwrap_or_else(|| draw(&mut rng));
    let mut redraws = 0;
    let mut g = loop {
        match problem.objective(&xs)? {
            Some(g) => break g,
            None if redraws < MAX_REDRAWS => {
                redraws += 1;
                xs = draw(&mut rng);
            }
            None => {
                return Err(Error::SolverFailure(format!(
                    "restart {restart}: product iterate has vanishing projection"
                )))
            }
        }
    };

    let mut history = vec![g];
    let mut sweeps = 0;
    while sweeps < opts.max_iters {
        sweeps += 1;
        for j in 0..xs.len() {
            let (a, b) = problem.reduced(&xs, j)?;
            if let Some(x) = generalized_top(&a, &b) {
                xs[j] = x;
            }
        }
        let next = problem.objective(&xs)?.ok_or_else(|| {
            Error::SolverFailure(format!("restart {restart}: iterate left the sector"))
        })?;
        history.push(next);
        let improvement = next - g;
        g = g.max(next);
        if improvement < opts.tol {
            break;
        }
    }
    Ok((RestartSummary { g, sweeps, history }, xs))
}

/// Lower bound on `max ⟨X|ℙLℙ|X⟩ / ⟨X|ℙ|X⟩` over products `X` across the
/// blocks of `partition`.
///
/// Each sweep replaces one block vector at a time with the top solution of
/// the reduced generalized eigenproblem, so the objective never decreases.
/// Restart 0 starts from the block marginals of the dominant eigenvector of
/// `L`, restart 1 from the best basis product, the rest from seeded random
/// vectors; restarts run in parallel and the lowest-index maximum wins.
pub fn separability_eigen_solve(
    l: &HermitianOperator,
    partition: &PartitionSpec,
    projector: SymmetryClass,
    opts: &SolverOptions,
) -> Result<SolverOutcome> {
    opts.validate()?;
    let space = l.space();
    if partition.n_particles() != space.n_particles() {
        return Err(Error::ArityMismatch {
            symbols: partition.n_particles(),
            particles: space.n_particles(),
        });
    }
    if partition.n_blocks() < 2 {
        return Err(Error::InvalidPartition("need at least two blocks".into()));
    }
    let sign = projector.sign();
    let factors = l.factors();
    let raw: Vec<(f64, DVector<C64>)> = factors.into_iter().map(|(w, v)| (w, v.into_amplitudes())).collect();
    let terms = match sign {
        None => raw,
        Some(sign) => {
            let projected = raw
                .iter()
                .map(|(_, v)| symmetrize_raw(space, v, sign))
                .collect::<Result<Vec<_>>>()?;
            check_commutator(l, &raw, &projected)?;
            raw.iter().zip(projected).map(|((w, _), p)| (*w, p)).collect()
        }
    };

    let ordering = Permutation::new(partition.ordering())?;
    let terms = terms
        .into_iter()
        .map(|(w, u)| {
            let state = StateVector::from_amplitudes(space, u)?;
            Ok((w, apply_permutation(&ordering, &state)?.into_amplitudes()))
        })
        .collect::<Result<Vec<_>>>()?;
    let d = space.local_dim();
    let dims: Vec<usize> = partition.blocks().iter().map(|b| d.pow(b.len() as u32)).collect();
    let problem = Problem {
        space,
        dims,
        terms,
        sign,
    };

    if problem.terms.is_empty() {
        return Err(Error::SolverFailure("operator has no nonzero eigenvalue".into()));
    }

    let top = problem
        .terms
        .iter()
        .enumerate()
        .fold(0, |best, (i, (w, _))| if *w > problem.terms[best].0 { i } else { best });
    let marginal_start: Vec<DVector<C64>> = (0..problem.dims.len())
        .map(|j| top_eigenpair(&block_marginal(&problem.terms[top].1, &problem.dims, j)).1)
        .collect();
    let basis_start = best_basis_product(&problem, projector);

    let runs: Vec<Result<(RestartSummary, Vec<DVector<C64>>)>> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let init = match r {
                0 => Some(marginal_start.clone()),
                1 => basis_start.clone(),
                _ => None,
            };
            run_restart(&problem, init, r, opts)
        })
        .collect();

    let mut best: Option<(usize, Vec<DVector<C64>>)> = None;
    let mut summaries = Vec::with_capacity(runs.len());
    let mut first_error = None;
    for (r, run) in runs.into_iter().enumerate() {
        match run {
            Ok((summary, xs)) => {
                let better = match &best {
                    None => true,
                    Some((b, _)) => summary.g > summaries_g(&summaries, *b),
                };
                summaries.push(Some(summary));
                if better {
                    best = Some((r, xs));
                }
            }
            Err(e) => {
                summaries.push(None);
                first_error.get_or_insert(e);
            }
        }
    }
    let Some((restart, factors)) = best else {
        return Err(first_error.unwrap_or_else(|| Error::SolverFailure("no restart ran".into())));
    };
    let restarts: Vec<RestartSummary> = summaries
        .into_iter()
        .map(|s| {
            s.unwrap_or(RestartSummary {
                g: f64::NAN,
                sweeps: 0,
                history: Vec::new(),
            })
        })
        .collect();
    let winner = &restarts[restart];
    Ok(SolverOutcome {
        g: winner.g,
        restart,
        sweeps: winner.sweeps,
        history: winner.history.clone(),
        factors,
        restarts,
    })
}

fn summaries_g(summaries: &[Option<RestartSummary>], index: usize) -> f64 {
    summaries[index].as_ref().map_or(f64::NEG_INFINITY, |s| s.g)
}

/// Partial and full separability bounds for `N ≥ 3` distinguishable
/// particles; the partial bound is the maximum over all bipartitions.
pub fn partial_and_full_bounds(l: &HermitianOperator, opts: &SolverOptions) -> Result<MultipartiteBounds> {
    let n = l.space().n_particles();
    if n < 3 {
        return Err(Error::InvalidPartition(format!(
            "partial separability needs at least 3 particles, got {n}"
        )));
    }
    let fullsep = separability_eigen_solve(l, &PartitionSpec::full(n), SymmetryClass::Distinguishable, opts)?.g;
    let mut bipartitions = Vec::new();
    let mut partsep = f64::NEG_INFINITY;
    for partition in PartitionSpec::bipartitions(n) {
        let g = separability_eigen_solve(l, &partition, SymmetryClass::Distinguishable, opts)?.g;
        partsep = partsep.max(g);
        bipartitions.push((partition, g));
    }
    Ok(MultipartiteBounds {
        partsep,
        fullsep,
        bipartitions,
    })
}
