use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::hilbert::{expectation, HermitianOperator, Sign, SpaceSpec, StateRef, SymmetryClass};
use crate::separability::{
    partial_and_full_bounds, schmidt, separability_eigen_solve, slater, takagi, PartitionSpec,
    SolverOptions,
};
use crate::{Result, NULL_TOL};

use super::{gamma, incoherent_bound, violation_slack};

/// Largest particle number handled by the separability solver in [`classify`].
pub const MAX_SOLVER_PARTICLES: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub solver: SolverOptions,
}

/// One entry of a bounds table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    Value(f64),
    /// The operator has no support in the sector, or the classical family
    /// is empty (serialized as `"n.a."`).
    NotApplicable,
    /// Defined, but not computed for this particle number.
    Unavailable,
}

impl Bound {
    pub fn value(&self) -> Option<f64> {
        match self {
            Bound::Value(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_applicable(&self) -> bool {
        !matches!(self, Bound::NotApplicable)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Value(v) => write!(f, "{v}"),
            Bound::NotApplicable => f.write_str("n.a."),
            Bound::Unavailable => f.write_str("unavailable"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Value(v) => s.serialize_f64(*v),
            Bound::NotApplicable => s.serialize_str("n.a."),
            Bound::Unavailable => s.serialize_str("unavailable"),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Bound::Value(v)),
            Raw::Text(t) if t == "n.a." => Ok(Bound::NotApplicable),
            Raw::Text(t) if t == "unavailable" => Ok(Bound::Unavailable),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("unknown bound marker {t:?}"))),
        }
    }
}

/// How the separable bounds were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparableMethod {
    /// Closed form from a Schmidt, Takagi or Slater decomposition.
    Exact,
    /// Best value found by the alternating solver (heuristic global max).
    LowerBound,
}

/// One slot per bound of the report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PerBound<T> {
    pub g0: T,
    pub gplus: T,
    pub gminus: T,
    pub gsep0: T,
    pub gsep_plus: T,
    pub gsep_minus: T,
    pub gpartsep: T,
}

impl<T> PerBound<T> {
    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> PerBound<U> {
        PerBound {
            g0: f(&self.g0),
            gplus: f(&self.gplus),
            gminus: f(&self.gminus),
            gsep0: f(&self.gsep0),
            gsep_plus: f(&self.gsep_plus),
            gsep_minus: f(&self.gsep_minus),
            gpartsep: f(&self.gpartsep),
        }
    }

    fn sector(&self, sign: Sign) -> (&T, &T) {
        match sign {
            Sign::Plus => (&self.gplus, &self.gsep_plus),
            Sign::Minus => (&self.gminus, &self.gsep_minus),
        }
    }
}

/// Entanglement verdicts under the three ways of composing particles.
///
/// `tensor` compares against `⊗` products; `symmetric` and `antisymmetric`
/// against `∨` and `∧` products. `None` when the bound is not available.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConventionVerdicts {
    pub tensor: Option<bool>,
    pub symmetric: Option<bool>,
    pub antisymmetric: Option<bool>,
}

/// Conclusions drawn from which bounds are violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "sector", rename_all = "snake_case")]
pub enum Inference {
    /// `g0` violated, `gsep0` respected: the detected correlations are local.
    LocalOnly,
    /// `g0` violated, `g±` respected: the coherence comes from (anti)symmetrization.
    ExchangeSymmetryOrigin(Sign),
    /// `Γ^(s) = Γ^(sep,s) > 0` for every applicable `s`: only global superpositions.
    GlobalOnly,
    /// Entangled with respect to `⊗` but not to `∨`/`∧`.
    ConventionDependentEntanglement(Sign),
    /// Entangled with respect to both `⊗` and `∨`/`∧`.
    EntangledBothConventions(Sign),
    /// Not fully separable, but some bipartition explains `⟨L⟩`.
    FullInseparabilityOnly,
    /// No bipartition explains `⟨L⟩`.
    GenuineMultipartite,
    /// No bound is violated by this observable.
    NoDetection,
}

impl fmt::Display for Inference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let product = |s: &Sign| match s {
            Sign::Plus => "∨",
            Sign::Minus => "∧",
        };
        match self {
            Inference::LocalOnly => f.write_str("local quantum superposition only: coherence detected, no entanglement"),
            Inference::ExchangeSymmetryOrigin(s) => {
                write!(f, "detected coherence originates from the {s} exchange symmetry")
            }
            Inference::GlobalOnly => f.write_str("only global quantum superpositions: coherence fully accounted for by entanglement"),
            Inference::ConventionDependentEntanglement(s) => {
                write!(f, "entangled with respect to ⊗ but not with respect to {}", product(s))
            }
            Inference::EntangledBothConventions(s) => {
                write!(f, "entangled with respect to both ⊗ and {}", product(s))
            }
            Inference::FullInseparabilityOnly => {
                f.write_str("not fully separable, but compatible with partial separability")
            }
            Inference::GenuineMultipartite => f.write_str("fully entangled: no bipartition is compatible"),
            Inference::NoDetection => f.write_str("no bound violated by this observable"),
        }
    }
}

/// Every bound for one `(L, state)` pair, with Γ values and verdicts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub space: SpaceSpec,
    pub expectation: f64,
    pub g0: f64,
    pub gplus: Bound,
    pub gminus: Bound,
    /// Separable bound for `⊗`; for three or more particles this is the
    /// full-separability bound.
    pub gsep0: Bound,
    pub gsep_plus: Bound,
    pub gsep_minus: Bound,
    /// Partial-separability bound (largest over bipartitions), `N ≥ 3` only.
    pub gpartsep: Bound,
    pub separable_method: Option<SeparableMethod>,
    pub gammas: PerBound<Option<f64>>,
    pub violations: PerBound<Option<bool>>,
    pub conventions: ConventionVerdicts,
    pub inferences: Vec<Inference>,
    pub verdicts: Vec<String>,
}

impl BoundsReport {
    pub fn bounds(&self) -> PerBound<Bound> {
        PerBound {
            g0: Bound::Value(self.g0),
            gplus: self.gplus,
            gminus: self.gminus,
            gsep0: self.gsep0,
            gsep_plus: self.gsep_plus,
            gsep_minus: self.gsep_minus,
            gpartsep: self.gpartsep,
        }
    }
}

struct Separable {
    gsep0: Bound,
    gsep_plus: Bound,
    gsep_minus: Bound,
    gpartsep: Bound,
    method: Option<SeparableMethod>,
}

fn sector_bound(l: &HermitianOperator, sign: Sign) -> Result<Bound> {
    let space = l.space();
    if sign == Sign::Minus && space.local_dim() < space.n_particles() {
        return Ok(Bound::NotApplicable);
    }
    if l.sector_defect(sign)? > NULL_TOL {
        return Ok(Bound::NotApplicable);
    }
    Ok(Bound::Value(incoherent_bound(l, sign.class())?))
}

fn separable_bounds(l: &HermitianOperator, sectors: [Bound; 2], opts: &ClassifyOptions) -> Result<Separable> {
    let n = l.space().n_particles();
    let in_sector = |b: Bound| b.is_applicable();
    match n {
        1 => Ok(Separable {
            gsep0: Bound::NotApplicable,
            gsep_plus: Bound::NotApplicable,
            gsep_minus: Bound::NotApplicable,
            gpartsep: Bound::NotApplicable,
            method: None,
        }),
        2 => {
            let mut out = Separable {
                gsep0: Bound::NotApplicable,
                gsep_plus: Bound::NotApplicable,
                gsep_minus: Bound::NotApplicable,
                gpartsep: Bound::NotApplicable,
                method: None,
            };
            if let Some(v) = l.rank_one_vector() {
                out.method = Some(SeparableMethod::Exact);
                out.gsep0 = Bound::Value(schmidt(&v)?.separable_bound());
                if in_sector(sectors[0]) {
                    out.gsep_plus = Bound::Value(takagi(&v)?.separable_bound());
                }
                if in_sector(sectors[1]) {
                    out.gsep_minus = Bound::Value(slater(&v)?.separable_bound());
                }
            } else {
                out.method = Some(SeparableMethod::LowerBound);
                let pair = PartitionSpec::full(2);
                let solve = |class| separability_eigen_solve(l, &pair, class, &opts.solver).map(|o| Bound::Value(o.g));
                out.gsep0 = solve(SymmetryClass::Distinguishable)?;
                if in_sector(sectors[0]) {
                    out.gsep_plus = solve(SymmetryClass::Bosonic)?;
                }
                if in_sector(sectors[1]) {
                    out.gsep_minus = solve(SymmetryClass::Fermionic)?;
                }
            }
            Ok(out)
        }
        _ => {
            let unavailable_if = |b: Bound| if in_sector(b) { Bound::Unavailable } else { Bound::NotApplicable };
            if n > MAX_SOLVER_PARTICLES {
                return Ok(Separable {
                    gsep0: Bound::Unavailable,
                    gsep_plus: unavailable_if(sectors[0]),
                    gsep_minus: unavailable_if(sectors[1]),
                    gpartsep: Bound::Unavailable,
                    method: None,
                });
            }
            let multi = partial_and_full_bounds(l, &opts.solver)?;
            Ok(Separable {
                gsep0: Bound::Value(multi.fullsep),
                gsep_plus: unavailable_if(sectors[0]),
                gsep_minus: unavailable_if(sectors[1]),
                gpartsep: Bound::Value(multi.partsep),
                method: Some(SeparableMethod::LowerBound),
            })
        }
    }
}

fn infer(gammas: &PerBound<Option<f64>>, violations: &PerBound<Option<bool>>, n: usize) -> Vec<Inference> {
    let mut out = Vec::new();
    let yes = |v: &Option<bool>| *v == Some(true);
    let no = |v: &Option<bool>| *v == Some(false);

    if yes(&violations.g0) && no(&violations.gsep0) {
        out.push(Inference::LocalOnly);
    }
    for sign in [Sign::Plus, Sign::Minus] {
        let (coherent, _) = violations.sector(sign);
        if yes(&violations.g0) && no(coherent) {
            out.push(Inference::ExchangeSymmetryOrigin(sign));
        }
    }

    let mut pairs = vec![(gammas.g0, gammas.gsep0)];
    for sign in [Sign::Plus, Sign::Minus] {
        let (a, b) = gammas.sector(sign);
        pairs.push((*a, *b));
    }
    let applicable: Vec<(f64, f64)> = pairs
        .into_iter()
        .filter_map(|(a, b)| Some((a?, b?)))
        .collect();
    if gammas.gsep0.is_some()
        && !applicable.is_empty()
        && applicable
            .iter()
            .all(|&(a, b)| a > 0.0 && (a - b).abs() <= 1e-9 * a.max(1.0))
    {
        out.push(Inference::GlobalOnly);
    }

    for sign in [Sign::Plus, Sign::Minus] {
        let (_, separable) = violations.sector(sign);
        if yes(&violations.gsep0) && no(separable) {
            out.push(Inference::ConventionDependentEntanglement(sign));
        }
        if yes(&violations.gsep0) && yes(separable) {
            out.push(Inference::EntangledBothConventions(sign));
        }
    }

    if n >= 3 {
        if yes(&violations.gsep0) && no(&violations.gpartsep) {
            out.push(Inference::FullInseparabilityOnly);
        }
        if yes(&violations.gpartsep) {
            out.push(Inference::GenuineMultipartite);
        }
    }

    let any = [
        violations.g0,
        violations.gplus,
        violations.gminus,
        violations.gsep0,
        violations.gsep_plus,
        violations.gsep_minus,
        violations.gpartsep,
    ]
    .iter()
    .any(yes);
    if !any {
        out.push(Inference::NoDetection);
    }
    out
}

/// Evaluates `⟨L⟩` on `state` and compares it with every applicable bound.
///
/// Sector bounds are `n.a.` when `‖Π±L − L‖ > 1e-10`. For two particles and
/// a positive rank-one `L` the separable bounds come from closed forms;
/// otherwise, and for three or four particles, from the alternating solver.
pub fn classify<'a>(
    l: &HermitianOperator,
    state: impl Into<StateRef<'a>>,
    opts: &ClassifyOptions,
) -> Result<BoundsReport> {
    let space = l.space();
    let expectation = expectation(l, state)?;
    let g0 = incoherent_bound(l, SymmetryClass::Distinguishable)?;
    let gplus = sector_bound(l, Sign::Plus)?;
    let gminus = sector_bound(l, Sign::Minus)?;
    let sep = separable_bounds(l, [gplus, gminus], opts)?;

    let bounds = PerBound {
        g0: Bound::Value(g0),
        gplus,
        gminus,
        gsep0: sep.gsep0,
        gsep_plus: sep.gsep_plus,
        gsep_minus: sep.gsep_minus,
        gpartsep: sep.gpartsep,
    };
    let gammas = bounds.map(|b| b.value().and_then(|g| gamma(expectation, g).ok()));
    let violations = bounds.map(|b| b.value().map(|g| expectation - g > violation_slack(g)));
    let conventions = ConventionVerdicts {
        tensor: violations.gsep0,
        symmetric: violations.gsep_plus,
        antisymmetric: violations.gsep_minus,
    };
    let inferences = infer(&gammas, &violations, space.n_particles());
    let verdicts = inferences.iter().map(|i| i.to_string()).collect();
    Ok(BoundsReport {
        space,
        expectation,
        g0,
        gplus,
        gminus,
        gsep0: sep.gsep0,
        gsep_plus: sep.gsep_plus,
        gsep_minus: sep.gsep_minus,
        gpartsep: sep.gpartsep,
        separable_method: sep.method,
        gammas,
        violations,
        conventions,
        inferences,
        verdicts,
    })
}
