use std::collections::BTreeMap;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{
    coherent_state, lossy_channel, passive_network_channel, pattern_string, rows_to_matrix, squeezed_state,
    vacuum_state, BucketDetector, GaussianChannel, GaussianState, Pattern,
};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, MatrixFile, UnitaryMatrix};

/// Input state of a circuit file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputSpec {
    Vacuum,
    /// One `[r1, r2]` displacement per mode.
    Coherent(Vec<[f64; 2]>),
    /// One squeezing parameter per mode.
    Squeezed(Vec<f64>),
    Gaussian { mean: Vec<f64>, cov: Vec<Vec<f64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelSpec {
    Explicit {
        #[serde(rename = "X")]
        x: Vec<Vec<f64>>,
        #[serde(rename = "Y")]
        y: Vec<Vec<f64>>,
        d: Vec<f64>,
    },
    Unitary { unitary: MatrixFile },
    Loss { loss: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorSpec {
    #[serde(rename = "R")]
    pub radius: f64,
}

/// `{"m": .., "input": .., "channel": .., "detector": {"R": ..}}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub m: usize,
    pub input: InputSpec,
    pub channel: ChannelSpec,
    pub detector: DetectorSpec,
}

impl CircuitFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<(GaussianState, GaussianChannel, BucketDetector)> {
        let m = self.m;
        let state = match &self.input {
            InputSpec::Vacuum => vacuum_state(m)?,
            InputSpec::Coherent(d) => coherent_state(&d.iter().map(|r| (r[0], r[1])).collect::<Vec<_>>())?,
            InputSpec::Squeezed(s) => squeezed_state(s)?,
            InputSpec::Gaussian { mean, cov } => {
                GaussianState::new(DVector::from_column_slice(mean), rows_to_matrix(cov, "cov")?)?
            }
        };
        let channel = match &self.channel {
            ChannelSpec::Explicit { x, y, d } => {
                GaussianChannel::new(rows_to_matrix(x, "X")?, rows_to_matrix(y, "Y")?, DVector::from_column_slice(d))?
            }
            ChannelSpec::Unitary { unitary } => {
                passive_network_channel(&UnitaryMatrix::new(ComplexMatrix::try_from(unitary.clone())?)?)
            }
            ChannelSpec::Loss { loss } => lossy_channel(*loss, m)?,
        };
        if state.modes() != m || channel.modes() != m {
            return Err(Error::Dimension(format!(
                "circuit declares m={m} but input has {} modes and channel {}",
                state.modes(),
                channel.modes()
            )));
        }
        Ok((state, channel, BucketDetector::new(self.detector.radius)?))
    }
}

/// Pattern histogram, keyed by bit strings such as `"0110"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternCounts {
    pub m: usize,
    pub samples: usize,
    pub counts: BTreeMap<String, u64>,
    pub click_rates: Vec<f64>,
}

impl PatternCounts {
    pub fn from_patterns(m: usize, patterns: &[Pattern]) -> Self {
        let mut counts = BTreeMap::new();
        let mut clicks = vec![0u64; m];
        for p in patterns {
            *counts.entry(pattern_string(p)).or_insert(0) += 1;
            for (c, b) in clicks.iter_mut().zip(p) {
                *c += u64::from(*b);
            }
        }
        let l = patterns.len().max(1) as f64;
        PatternCounts {
            m,
            samples: patterns.len(),
            counts,
            click_rates: clicks.iter().map(|&c| c as f64 / l).collect(),
        }
    }

    /// Raw patterns as CSV, one row per sample: `sample,s1,..,sm`.
    pub fn patterns_csv(m: usize, patterns: &[Pattern]) -> String {
        let mut out = String::from("sample");
        for j in 1..=m {
            out.push_str(&format!(",s{j}"));
        }
        out.push('\n');
        for (i, p) in patterns.iter().enumerate() {
            out.push_str(&i.to_string());
            for b in p {
                out.push(',');
                out.push(if *b == 0 { '0' } else { '1' });
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_variants() {
        let c = CircuitFile::from_json(
            r#"{"m": 2, "input": {"coherent": [[1, 0], [0, 0]]},
                "channel": {"unitary": {"rows": 2, "cols": 2, "entries": [[0.7071067811865476,0],[0.7071067811865476,0],[0.7071067811865476,0],[-0.7071067811865476,0]]}},
                "detector": {"R": 1.6}}"#,
        )
        .unwrap();
        let (s, ch, d) = c.build().unwrap();
        assert_eq!(s.modes(), 2);
        assert_eq!(ch.modes(), 2);
        assert_eq!(d.radius(), 1.6);

        let loss = CircuitFile::from_json(r#"{"m": 1, "input": "vacuum", "channel": {"loss": 0.3}, "detector": {"R": 1}}"#).unwrap();
        assert!(loss.build().is_ok());

        let explicit = CircuitFile::from_json(
            r#"{"m": 1, "input": {"squeezed": [0.2]}, "channel": {"X": [[1,0],[0,1]], "Y": [[0,0],[0,0]], "d": [0.5, 0]}, "detector": {"R": 1}}"#,
        )
        .unwrap();
        let (s, ch, _) = explicit.build().unwrap();
        let out = crate::gaussian::apply_channel(&s, &ch).unwrap();
        assert_eq!(out.mean()[0], 0.5);
    }

    #[test]
    fn rejects_mismatch_and_unknown_keys() {
        let bad = CircuitFile::from_json(r#"{"m": 2, "input": "vacuum", "channel": {"loss": 0.3}, "detector": {"R": 1}, "extra": 1}"#);
        assert!(bad.is_err());
        let mismatch =
            CircuitFile::from_json(r#"{"m": 2, "input": {"coherent": [[1, 0]]}, "channel": {"loss": 0.3}, "detector": {"R": 1}}"#)
                .unwrap();
        assert!(matches!(mismatch.build(), Err(Error::Dimension(_))));
    }

    #[test]
    fn counts_and_csv() {
        let pats = vec![vec![0, 1], vec![0, 1], vec![1, 1]];
        let c = PatternCounts::from_patterns(2, &pats);
        assert_eq!(c.counts["01"], 2);
        assert_eq!(c.click_rates, vec![1.0 / 3.0, 1.0]);
        assert_eq!(PatternCounts::patterns_csv(2, &pats), "sample,s1,s2\n0,0,1\n1,0,1\n2,1,1\n");
    }
}
