use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Number of particles and the local (single-particle) dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceSpec {
    n_particles: usize,
    local_dim: usize,
}

impl SpaceSpec {
    pub fn new(n_particles: usize, local_dim: usize) -> Result<Self> {
        if n_particles == 0 || local_dim == 0 {
            return Err(Error::InvalidSpace(format!(
                "n_particles and local_dim must be positive (got N={n_particles}, d={local_dim})"
            )));
        }
        let exp = u32::try_from(n_particles)
            .map_err(|_| Error::InvalidSpace(format!("N={n_particles} is too large")))?;
        local_dim
            .checked_pow(exp)
            .filter(|&dim| dim <= isize::MAX as usize)
            .ok_or_else(|| {
                Error::InvalidSpace(format!("d^N overflows for N={n_particles}, d={local_dim}"))
            })?;
        Ok(Self { n_particles, local_dim })
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    /// Total dimension `d^N`.
    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.n_particles as u32)
    }

    /// Place value of each subsystem in the flat index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.n_particles];
        for j in (0..self.n_particles.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * self.local_dim;
        }
        strides
    }

    pub fn flatten(&self, levels: &[usize]) -> Result<usize> {
        if levels.len() != self.n_particles {
            return Err(Error::DimensionMismatch {
                expected: self.n_particles,
                found: levels.len(),
            });
        }
        let mut flat = 0;
        for &k in levels {
            if k >= self.local_dim {
                return Err(Error::LevelOutOfRange {
                    level: k,
                    dim: self.local_dim,
                });
            }
            flat = flat * self.local_dim + k;
        }
        Ok(flat)
    }

    pub fn unflatten(&self, flat: usize) -> Result<MultiIndex> {
        if flat >= self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: flat,
            });
        }
        let mut levels = vec![0; self.n_particles];
        self.unflatten_into(flat, &mut levels);
        Ok(MultiIndex(levels))
    }

    /// Unchecked digit expansion into a caller-provided buffer.
    pub(crate) fn unflatten_into(&self, mut flat: usize, levels: &mut [usize]) {
        for slot in levels.iter_mut().rev() {
            *slot = flat % self.local_dim;
            flat /= self.local_dim;
        }
    }
}

/// Occupied levels `(k_1, …, k_N)` of a product basis ket.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn levels(&self) -> &[usize] {
        &self.0
    }

    /// Occupation numbers `N_k`: how often each level `k < d` appears.
    pub fn occupations(&self, local_dim: usize) -> Vec<usize> {
        let mut counts = vec![0; local_dim];
        for &k in &self.0 {
            counts[k] += 1;
        }
        counts
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(levels: Vec<usize>) -> Self {
        Self(levels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_spaces() {
        assert!(SpaceSpec::new(0, 2).is_err());
        assert!(SpaceSpec::new(2, 0).is_err());
        assert!(SpaceSpec::new(200, 10).is_err());
    }

    #[test]
    fn subsystem_one_is_slowest() {
        let space = SpaceSpec::new(3, 4).unwrap();
        assert_eq!(space.flatten(&[0, 0, 1]).unwrap(), 1);
        assert_eq!(space.flatten(&[1, 0, 0]).unwrap(), 16);
        assert_eq!(space.strides(), vec![16, 4, 1]);
        assert!(matches!(
            space.flatten(&[0, 4, 0]),
            Err(Error::LevelOutOfRange { level: 4, dim: 4 })
        ));
    }

    #[test]
    fn flatten_round_trips_exhaustively() {
        for (n, d) in [(1, 10_000), (2, 100), (3, 21), (4, 10), (6, 4), (8, 3), (13, 2)] {
            let space = SpaceSpec::new(n, d).unwrap();
            assert!(space.dim() <= 10_000);
            for flat in 0..space.dim() {
                let idx = space.unflatten(flat).unwrap();
                assert_eq!(space.flatten(idx.levels()).unwrap(), flat);
            }
        }
    }

    #[test]
    fn occupation_counts() {
        let idx = MultiIndex(vec![0, 0, 1]);
        assert_eq!(idx.occupations(3), vec![2, 1, 0]);
        assert!(idx.is_non_decreasing());
        assert!(!idx.is_strictly_increasing());
    }
}
