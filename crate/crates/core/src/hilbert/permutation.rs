use crate::{Error, Result};

use super::MAX_PARTICLES;

/// A bijection `σ` on `{0, …, N-1}`.
///
/// The permutation operator exchanges subsystems as
/// `P_σ |x_0⟩⊗…⊗|x_{N-1}⟩ = |x_σ(0)⟩⊗…⊗|x_σ(N-1)⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &m in &mapping {
            if m >= mapping.len() || std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidPermutation(format!("{mapping:?} is not a bijection")));
            }
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    /// Exchange of positions `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::InvalidPermutation(format!(
                "transposition ({i} {j}) on {n} symbols"
            )));
        }
        let mut mapping: Vec<usize> = (0..n).collect();
        mapping.swap(i, j);
        Ok(Self { mapping })
    }

    /// Cyclic shift `j ↦ j + 1 mod n`.
    pub fn cycle(n: usize) -> Self {
        Self {
            mapping: (0..n).map(|j| (j + 1) % n.max(1)).collect(),
        }
    }

    /// All `N!` permutations in lexicographic order, identity first.
    pub fn all(n: usize) -> Result<Vec<Self>> {
        if n > MAX_PARTICLES {
            return Err(Error::TooManyParticles(n));
        }
        let mut current: Vec<usize> = (0..n).collect();
        let mut out = Vec::new();
        loop {
            out.push(Self {
                mapping: current.clone(),
            });
            if !next_permutation(&mut current) {
                break;
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn inversions(&self) -> usize {
        inversion_count(&self.mapping)
    }

    /// `(-1)^|σ|`.
    pub fn parity(&self) -> i8 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `(self ∘ other)(j) = self(other(j))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::InvalidPermutation(format!(
                "cannot compose permutations on {} and {} symbols",
                self.len(),
                other.len()
            )));
        }
        Ok(Self {
            mapping: other.mapping.iter().map(|&j| self.mapping[j]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut mapping = vec![0; self.len()];
        for (j, &m) in self.mapping.iter().enumerate() {
            mapping[m] = j;
        }
        Self { mapping }
    }
}

pub(crate) fn inversion_count<T: Ord>(seq: &[T]) -> usize {
    let mut count = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                count += 1;
            }
        }
    }
    count
}

/// Advance to the next lexicographic arrangement; repeated elements are
/// visited once. Returns `false` after the last arrangement.
pub(crate) fn next_permutation<T: Ord>(seq: &mut [T]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut i = seq.len() - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = seq.len() - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}
