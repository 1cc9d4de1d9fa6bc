use super::OutcomeSequence;
use crate::combinatorics::binomial;
use crate::error::{Error, Result};

/// Default hard limit on the number of enumerated outcomes.
pub const DEFAULT_ENUMERATION_CAP: usize = 10_000_000;

/// Enumerated sample space `Φ_{m,n}`, or its collision-free part `Φ*_{m,n}`.
///
/// Elements are ordered lexicographically on occupation vectors, largest
/// first: `(n,0,…,0)` is element 0 and `(0,…,0,n)` the last. Each element is
/// stored compactly as its sorted list of occupied modes; in that
/// representation the ordering is plain ascending lexicographic order, which
/// also gives a closed-form rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSpace {
    m: usize,
    n: usize,
    restricted: bool,
    modes: Vec<u16>,
}

impl SampleSpace {
    pub fn enumerate(m: usize, n: usize, restricted: bool) -> Result<Self> {
        Self::enumerate_with_cap(m, n, restricted, DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_with_cap(m: usize, n: usize, restricted: bool, cap: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Dimension(format!("sample space needs m, n >= 1, got m={m}, n={n}")));
        }
        if m > usize::from(u16::MAX) {
            return Err(Error::Dimension(format!("at most {} modes supported", u16::MAX)));
        }
        let size = Self::size_of(m, n, restricted);
        if size > cap as u128 {
            return Err(Error::TooLarge { size, cap });
        }
        let size = size as usize;
        let mut modes = Vec::with_capacity(size * n);
        if size > 0 {
            let mut cur: Vec<u16> = if restricted {
                (0..n as u16).collect()
            } else {
                vec![0; n]
            };
            loop {
                modes.extend_from_slice(&cur);
                if !advance(&mut cur, m, restricted) {
                    break;
                }
            }
        }
        debug_assert_eq!(modes.len(), size * n);
        Ok(SampleSpace { m, n, restricted, modes })
    }

    /// `|Φ_{m,n}| = binom(m+n−1, n)` or `|Φ*_{m,n}| = binom(m, n)`.
    pub fn size_of(m: usize, n: usize, restricted: bool) -> u128 {
        if restricted {
            binomial(m as u64, n as u64)
        } else {
            binomial((m + n - 1) as u64, n as u64)
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn restricted(&self) -> bool {
        self.restricted
    }

    pub fn len(&self) -> usize {
        self.modes.len() / self.n
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Sorted occupied-mode list of element `i`.
    pub fn modes_of(&self, i: usize) -> &[u16] {
        &self.modes[i * self.n..(i + 1) * self.n]
    }

    pub fn element(&self, i: usize) -> OutcomeSequence {
        OutcomeSequence::from_modes(self.m, self.modes_of(i)).expect("enumerated element is valid")
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = OutcomeSequence> + '_ {
        (0..self.len()).map(|i| self.element(i))
    }

    /// Position of `s` in the enumeration, or `None` if `s` is not in the space.
    pub fn index_of(&self, s: &OutcomeSequence) -> Option<usize> {
        if s.modes() != self.m || s.photons() != self.n {
            return None;
        }
        if self.restricted && !s.is_collision_free() {
            return None;
        }
        let list = s.mode_list();
        // Count the elements whose mode list is lexicographically smaller.
        let mut rank: u128 = 0;
        let mut lo = 0usize;
        for (i, &c) in list.iter().enumerate() {
            let rest = (self.n - i - 1) as u64;
            for v in lo..c {
                rank += if self.restricted {
                    binomial((self.m - v - 1) as u64, rest)
                } else {
                    binomial((self.m - v + rest as usize - 1) as u64, rest)
                };
            }
            lo = if self.restricted { c + 1 } else { c };
        }
        Some(rank as usize)
    }
}

fn advance(cur: &mut [u16], m: usize, restricted: bool) -> bool {
    let n = cur.len();
    for i in (0..n).rev() {
        let limit = if restricted { m - (n - i) } else { m - 1 };
        if usize::from(cur[i]) < limit {
            cur[i] += 1;
            for j in i + 1..n {
                cur[j] = if restricted { cur[j - 1] + 1 } else { cur[i] };
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn two_modes_one_photon() {
        let s = SampleSpace::enumerate(2, 1, false).unwrap();
        let elems: Vec<_> = s.iter().map(|e| e.occupations().to_vec()).collect();
        assert_eq!(elems, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn sizes() {
        assert_eq!(SampleSpace::enumerate(4, 2, false).unwrap().len(), 10);
        assert_eq!(SampleSpace::enumerate(4, 2, true).unwrap().len(), 6);
        for m in 1..8 {
            for n in 1..6 {
                for restricted in [false, true] {
                    let s = SampleSpace::enumerate(m, n, restricted).unwrap();
                    assert_eq!(s.len() as u128, SampleSpace::size_of(m, n, restricted));
                }
            }
        }
    }

    #[test]
    fn restricted_with_too_few_modes_is_empty() {
        let s = SampleSpace::enumerate(2, 3, true).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let err = SampleSpace::enumerate_with_cap(10, 3, false, 100).unwrap_err();
        assert!(matches!(err, Error::TooLarge { size: 220, cap: 100 }));
        assert!(err.to_string().contains("100"));
    }

    #[test]
    fn ordering_and_rank() {
        for restricted in [false, true] {
            let s = SampleSpace::enumerate(6, 3, restricted).unwrap();
            let mut seen = HashSet::new();
            let mut prev: Option<OutcomeSequence> = None;
            for (i, e) in s.iter().enumerate() {
                assert_eq!(e.photons(), 3);
                assert!(!restricted || e.is_collision_free());
                assert_eq!(s.index_of(&e), Some(i));
                if let Some(p) = prev {
                    assert!(p > e, "descending lexicographic order");
                }
                assert!(seen.insert(e.clone()));
                prev = Some(e);
            }
        }
        let s = SampleSpace::enumerate(3, 2, true).unwrap();
        assert_eq!(s.index_of(&OutcomeSequence::new(vec![2, 0, 0]).unwrap()), None);
        assert_eq!(s.index_of(&OutcomeSequence::new(vec![1, 0, 0]).unwrap()), None);
    }

    #[test]
    fn restricted_is_the_zero_one_subset() {
        let full = SampleSpace::enumerate(5, 3, false).unwrap();
        let restricted = SampleSpace::enumerate(5, 3, true).unwrap();
        let expected: Vec<_> = full.iter().filter(|e| e.is_collision_free()).collect();
        let got: Vec<_> = restricted.iter().collect();
        assert_eq!(got, expected);
    }
}
