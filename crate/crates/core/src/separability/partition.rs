use std::fmt;

use crate::{Error, Result};

/// A set partition of the particles `{0, …, N-1}` into `K` blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionSpec {
    blocks: Vec<Vec<usize>>,
    n_particles: usize,
}

impl PartitionSpec {
    /// Blocks hold 0-based particle indices; each block is sorted on input.
    pub fn new(mut blocks: Vec<Vec<usize>>, n_particles: usize) -> Result<Self> {
        let mut seen = vec![false; n_particles];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &p in block.iter() {
                if p >= n_particles {
                    return Err(Error::InvalidPartition(format!(
                        "particle {p} out of range for N={n_particles}"
                    )));
                }
                if std::mem::replace(&mut seen[p], true) {
                    return Err(Error::InvalidPartition(format!("particle {p} appears twice")));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("particle {missing} is not covered")));
        }
        Ok(Self { blocks, n_particles })
    }

    /// `{0}|{1}|…|{N-1}`.
    pub fn full(n_particles: usize) -> Self {
        Self {
            blocks: (0..n_particles).map(|p| vec![p]).collect(),
            n_particles,
        }
    }

    /// Every two-block partition, with particle 0 in the first block.
    pub fn bipartitions(n_particles: usize) -> Vec<Self> {
        if n_particles < 2 {
            return Vec::new();
        }
        let rest = n_particles - 1;
        (0..(1usize << rest) - 1)
            .map(|mask| {
                let mut first = vec![0];
                let mut second = Vec::new();
                for p in 1..n_particles {
                    if mask & (1 << (p - 1)) != 0 {
                        first.push(p);
                    } else {
                        second.push(p);
                    }
                }
                Self {
                    blocks: vec![first, second],
                    n_particles,
                }
            })
            .collect()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    /// Particles listed block after block.
    pub(crate) fn ordering(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            let labels: Vec<String> = block.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "{{{}}}", labels.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_cover() {
        assert!(PartitionSpec::new(vec![vec![0], vec![1, 2]], 3).is_ok());
        assert!(PartitionSpec::new(vec![vec![0], vec![0, 1, 2]], 3).is_err());
        assert!(PartitionSpec::new(vec![vec![0], vec![2]], 3).is_err());
        assert!(PartitionSpec::new(vec![vec![0, 1, 2], vec![]], 3).is_err());
        assert!(PartitionSpec::new(vec![vec![0, 3]], 3).is_err());
    }

    #[test]
    fn enumerates_bipartitions() {
        let parts = PartitionSpec::bipartitions(3);
        let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
        assert_eq!(names, vec!["{1}|{2,3}", "{1,2}|{3}", "{1,3}|{2}"]);
        assert_eq!(PartitionSpec::bipartitions(4).len(), 7);
        assert_eq!(PartitionSpec::full(3).to_string(), "{1}|{2}|{3}");
    }
}
