use nalgebra::Cholesky;
use rayon::prelude::*;

use super::state::draw_with;
use super::{apply_channel, GaussianChannel, GaussianState, PhasePoint};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Click (1) / no-click (0) per mode.
pub type Pattern = Vec<u8>;

/// Dichotomic detector whose no-click element has Wigner function `1/(2π)`
/// on the disk `|r| < R` and 0 outside.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BucketDetector {
    radius: f64,
}

impl BucketDetector {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Parameter(format!("detector radius must be positive, got {radius}")));
        }
        Ok(BucketDetector { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `⟨0|Π₁|0⟩ = e^{−R²}`.
    pub fn dark_count_rate(&self) -> f64 {
        (-self.radius * self.radius).exp()
    }
}

/// Mode `j` clicks unless `(x_j, p_j)` lies strictly inside the disk. The
/// multi-mode element is the product of single-mode detectors.
pub fn bucket_detect(r: &PhasePoint, detector: &BucketDetector) -> Pattern {
    (0..r.modes())
        .map(|j| {
            let (x, p) = r.mode(j);
            u8::from(x.hypot(p) >= detector.radius)
        })
        .collect()
}

/// `l` detection patterns of `input` sent through `network`. Pattern `i` is
/// drawn from `rng.split(i)`, so the output does not depend on the thread count.
pub fn classical_sample(
    input: &GaussianState,
    network: &GaussianChannel,
    detector: &BucketDetector,
    l: usize,
    rng: &RngStream,
) -> Result<Vec<Pattern>> {
    let out = apply_channel(input, network)?;
    let chol = Cholesky::new(out.covariance().clone())
        .ok_or_else(|| Error::State("output covariance not positive definite".into()))?;
    let lower = chol.l();
    Ok((0..l as u64)
        .into_par_iter()
        .map(|i| bucket_detect(&draw_with(&lower, out.mean(), &mut rng.split(i)), detector))
        .collect())
}

pub fn pattern_string(p: &[u8]) -> String {
    p.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect()
}
