use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fingerprint of `k` sample sequences of length `l` over a label set of size
/// `N`: entry `(k₁,…,k_k)` counts the labels occurring exactly `kⱼ` times in
/// sequence `j`, for every `j` at once.
///
/// Stored sparsely; absent index tuples are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FingerprintTensor {
    k: usize,
    l: usize,
    space_size: usize,
    counts: BTreeMap<Vec<u32>, u64>,
}

impl FingerprintTensor {
    /// The tensor in which no label occurs more than once across all
    /// sequences. `None` when `N < k·l`, where no such tensor exists.
    pub fn trivial(k: usize, l: usize, space_size: usize) -> Option<Self> {
        let used = k.checked_mul(l)?;
        if used > space_size {
            return None;
        }
        let mut counts = BTreeMap::new();
        if space_size > used {
            counts.insert(vec![0; k], (space_size - used) as u64);
        }
        if l > 0 {
            for j in 0..k {
                let mut idx = vec![0; k];
                idx[j] = 1;
                counts.insert(idx, l as u64);
            }
        }
        Some(FingerprintTensor { k, l, space_size, counts })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn space_size(&self) -> usize {
        self.space_size
    }

    pub fn get(&self, index: &[u32]) -> u64 {
        self.counts.get(index).copied().unwrap_or(0)
    }

    pub fn nonzeros(&self) -> impl Iterator<Item = (&[u32], u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Dense `(l+1)×(l+1)` view of a two-sequence fingerprint.
    pub fn as_matrix(&self) -> Option<Vec<Vec<u64>>> {
        if self.k != 2 {
            return None;
        }
        let mut dense = vec![vec![0; self.l + 1]; self.l + 1];
        for (idx, &c) in &self.counts {
            dense[idx[0] as usize][idx[1] as usize] = c;
        }
        Some(dense)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let total: u64 = self.counts.values().sum();
        if total != self.space_size as u64 {
            return Err(Error::Internal(format!(
                "fingerprint counts sum to {total}, space has {}",
                self.space_size
            )));
        }
        for j in 0..self.k {
            let weighted: u64 = self.counts.iter().map(|(idx, &c)| u64::from(idx[j]) * c).sum();
            if weighted != self.l as u64 {
                return Err(Error::Internal(format!(
                    "sequence {j} accounts for {weighted} samples, expected {}",
                    self.l
                )));
            }
        }
        Ok(())
    }

    pub fn to_file(&self) -> FingerprintFile {
        FingerprintFile {
            k: self.k,
            l: self.l,
            space_size: self.space_size,
            nonzeros: self.counts.iter().map(|(k, &v)| (k.clone(), v)).collect(),
        }
    }
}

/// Export format: `{"k":, "l":, "N":, "nonzeros": [[[k1,...,kk], count], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FingerprintFile {
    pub k: usize,
    pub l: usize,
    #[serde(rename = "N")]
    pub space_size: usize,
    pub nonzeros: Vec<(Vec<u32>, u64)>,
}

impl TryFrom<FingerprintFile> for FingerprintTensor {
    type Error = Error;

    fn try_from(file: FingerprintFile) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (idx, c) in file.nonzeros {
            if idx.len() != file.k || idx.iter().any(|&x| x as usize > file.l) {
                return Err(Error::Dimension(format!("bad fingerprint index {idx:?}")));
            }
            if c > 0 {
                *counts.entry(idx).or_insert(0) += c;
            }
        }
        let t = FingerprintTensor {
            k: file.k,
            l: file.l,
            space_size: file.space_size,
            counts,
        };
        t.check_invariants()?;
        Ok(t)
    }
}

/// Builds the fingerprint of `sequences` (labels in `0..space_size`).
pub fn fingerprint(sequences: &[Vec<usize>], space_size: usize) -> Result<FingerprintTensor> {
    let k = sequences.len();
    if k == 0 {
        return Err(Error::Parameter("fingerprint needs at least one sequence".into()));
    }
    let l = sequences[0].len();
    if sequences.iter().any(|s| s.len() != l) {
        return Err(Error::Dimension("all sequences must have the same length".into()));
    }
    let mut occurrences: HashMap<usize, Vec<u32>> = HashMap::new();
    for (j, seq) in sequences.iter().enumerate() {
        for &label in seq {
            if label >= space_size {
                return Err(Error::Label { label, size: space_size });
            }
            occurrences.entry(label).or_insert_with(|| vec![0; k])[j] += 1;
        }
    }
    let mut counts = BTreeMap::new();
    let unseen = space_size - occurrences.len();
    if unseen > 0 {
        counts.insert(vec![0; k], unseen as u64);
    }
    for idx in occurrences.into_values() {
        *counts.entry(idx).or_insert(0) += 1;
    }
    let t = FingerprintTensor { k, l, space_size, counts };
    t.check_invariants()?;
    Ok(t)
}

/// True iff no label occurs more than once across all sequences combined.
pub fn is_trivial_fingerprint(c: &FingerprintTensor) -> bool {
    FingerprintTensor::trivial(c.k, c.l, c.space_size).is_some_and(|t| t == *c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example() {
        // Labels 1..6 shifted to 0..5.
        let s1 = vec![0, 4, 0, 0, 1];
        let s2 = vec![1, 5, 0, 3, 5];
        let c = fingerprint(&[s1, s2], 6).unwrap();
        let expected = vec![
            vec![1, 1, 1, 0, 0, 0],
            vec![1, 1, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 0, 0],
        ];
        assert_eq!(c.as_matrix().unwrap(), expected);
        assert!(!is_trivial_fingerprint(&c));
    }

    #[test]
    fn distinct_samples_give_trivial_vector() {
        let c = fingerprint(&[vec![3, 1, 7, 0]], 10).unwrap();
        assert_eq!(c.get(&[0]), 6);
        assert_eq!(c.get(&[1]), 4);
        assert_eq!(c.get(&[2]), 0);
        assert!(is_trivial_fingerprint(&c));
    }

    #[test]
    fn empty_sequences() {
        let c = fingerprint(&[vec![], vec![]], 5).unwrap();
        assert_eq!(c.nonzeros().collect::<Vec<_>>(), vec![(&[0u32, 0][..], 5)]);
        assert!(is_trivial_fingerprint(&c));
    }

    #[test]
    fn cross_sequence_repeat_is_nontrivial() {
        let c = fingerprint(&[vec![0, 1], vec![1, 2]], 10).unwrap();
        assert!(!is_trivial_fingerprint(&c));
    }

    #[test]
    fn label_errors() {
        assert!(matches!(fingerprint(&[vec![6]], 6), Err(Error::Label { label: 6, size: 6 })));
        assert!(fingerprint(&[vec![0], vec![0, 1]], 6).is_err());
        assert!(fingerprint(&[], 6).is_err());
    }

    #[test]
    fn export_round_trip() {
        let c = fingerprint(&[vec![0, 4, 0], vec![1, 1, 2]], 6).unwrap();
        let json = serde_json::to_string(&c.to_file()).unwrap();
        assert!(json.starts_with(r#"{"k":2,"l":3,"N":6,"nonzeros":[[[0,0],"#));
        let back: FingerprintFile = serde_json::from_str(&json).unwrap();
        assert_eq!(FingerprintTensor::try_from(back).unwrap(), c);
    }
}
