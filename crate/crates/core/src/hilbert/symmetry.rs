use std::fmt;

use serde::{Deserialize, Serialize};

use super::SpaceSpec;

/// Exchange sign selecting `Π+` (bosons) or `Π-` (fermions).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(±1)^|σ|` for a permutation of the given parity.
    pub fn weight(self, parity: i8) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => f64::from(parity),
        }
    }

    pub fn class(self) -> SymmetryClass {
        match self {
            Sign::Plus => SymmetryClass::Bosonic,
            Sign::Minus => SymmetryClass::Fermionic,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "symmetric",
            Sign::Minus => "antisymmetric",
        })
    }
}

/// Which tensor product composes the particles: `⊗`, `∨` or `∧`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryClass {
    Distinguishable,
    Bosonic,
    Fermionic,
}

impl SymmetryClass {
    pub fn sign(self) -> Option<Sign> {
        match self {
            SymmetryClass::Distinguishable => None,
            SymmetryClass::Bosonic => Some(Sign::Plus),
            SymmetryClass::Fermionic => Some(Sign::Minus),
        }
    }

    /// Superscript used in the literature: `0`, `+` or `-`.
    pub fn label(self) -> &'static str {
        match self {
            SymmetryClass::Distinguishable => "0",
            SymmetryClass::Bosonic => "+",
            SymmetryClass::Fermionic => "-",
        }
    }
}

/// Dimension of `H^⊗N`, `H^∨N` or `H^∧N`.
pub fn subspace_dimension(space: SpaceSpec, sym: SymmetryClass) -> u128 {
    let n = space.n_particles() as u64;
    let d = space.local_dim() as u64;
    match sym {
        SymmetryClass::Distinguishable => space.dim() as u128,
        SymmetryClass::Bosonic => binomial(n + d - 1, n),
        SymmetryClass::Fermionic => binomial(d, n),
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}
