use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mode-occupation list `(s₁, …, s_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OutcomeSequence(Vec<u32>);

impl OutcomeSequence {
    pub fn new(occupations: Vec<u32>) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::Dimension("outcome sequence needs at least one mode".into()));
        }
        Ok(OutcomeSequence(occupations))
    }

    /// Checked against the ambient `(m, n)`.
    pub fn in_space(occupations: Vec<u32>, m: usize, n: usize) -> Result<Self> {
        let s = Self::new(occupations)?;
        if s.modes() != m || s.photons() != n {
            return Err(Error::Dimension(format!(
                "sequence {s} is not in Φ_{{{m},{n}}}"
            )));
        }
        Ok(s)
    }

    /// The input pattern `1_n = (1, …, 1, 0, …, 0)`.
    pub fn first_n(m: usize, n: usize) -> Result<Self> {
        if n > m {
            return Err(Error::Dimension(format!("1_n needs n <= m, got n={n}, m={m}")));
        }
        Self::new((0..m).map(|j| u32::from(j < n)).collect())
    }

    /// Builds from the (unordered) list of modes the photons occupy.
    pub fn from_modes(m: usize, modes: &[u16]) -> Result<Self> {
        let mut occ = vec![0u32; m];
        for &j in modes {
            let j = usize::from(j);
            if j >= m {
                return Err(Error::Dimension(format!("mode {j} out of {m}")));
            }
            occ[j] += 1;
        }
        Self::new(occ)
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn photons(&self) -> usize {
        self.0.iter().map(|&s| s as usize).sum()
    }

    pub fn is_collision_free(&self) -> bool {
        self.0.iter().all(|&s| s <= 1)
    }

    /// `S̃`: the occupations with zeros removed.
    pub fn nonzero(&self) -> Vec<u32> {
        self.0.iter().copied().filter(|&s| s > 0).collect()
    }

    /// Sorted list of occupied modes with multiplicity, e.g. `(2,0,1) → [0,0,2]`.
    pub fn mode_list(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(j, &s)| std::iter::repeat_n(j, s as usize))
            .collect()
    }

    /// `Π sⱼ!`.
    pub fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&s| crate::combinatorics::factorial(s)).product()
    }

    /// Relabels modes: mode `j` becomes mode `perm[j]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.modes() {
            return Err(Error::Dimension("permutation length differs from mode count".into()));
        }
        let mut occ = vec![0u32; self.modes()];
        for (j, &s) in self.0.iter().enumerate() {
            occ[perm[j]] = s;
        }
        Self::new(occ)
    }
}

impl fmt::Display for OutcomeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accessors() {
        let s = OutcomeSequence::new(vec![2, 0, 1]).unwrap();
        assert_eq!(s.photons(), 3);
        assert!(!s.is_collision_free());
        assert_eq!(s.nonzero(), vec![2, 1]);
        assert_eq!(s.mode_list(), vec![0, 0, 2]);
        assert_eq!(s.factorial_product(), 2.0);
        assert_eq!(s.to_string(), "(2,0,1)");
        assert_eq!(OutcomeSequence::from_modes(3, &[2, 0, 0]).unwrap(), s);
    }

    #[test]
    fn first_n_pattern() {
        let s = OutcomeSequence::first_n(5, 2).unwrap();
        assert_eq!(s.occupations(), &[1, 1, 0, 0, 0]);
        assert!(s.is_collision_free());
        assert!(OutcomeSequence::first_n(2, 3).is_err());
    }

    #[test]
    fn ambient_check() {
        assert!(OutcomeSequence::in_space(vec![1, 1], 2, 2).is_ok());
        assert!(OutcomeSequence::in_space(vec![1, 0], 2, 2).is_err());
        assert!(OutcomeSequence::in_space(vec![1, 1, 0], 2, 2).is_err());
    }
}
