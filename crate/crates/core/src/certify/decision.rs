use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::divergence::{discrimination_error_bound, discrimination_eta};
use super::fingerprint::{fingerprint, is_trivial_fingerprint, FingerprintTensor};
use crate::boson::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Which of two known hypotheses a discriminator settles on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    P,
    Q,
}

/// Outcome of a uniformity certifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertifierDecision {
    Accept,
    Reject,
}

/// A decision rule that sees only the fingerprint of the samples. Any rule
/// expressed this way is automatically invariant under reordering the samples
/// and relabeling the sample space.
pub trait SymmetricPolicy {
    fn decide(&self, fingerprint: &FingerprintTensor) -> CertifierDecision;
}

impl<F: Fn(&FingerprintTensor) -> CertifierDecision> SymmetricPolicy for F {
    fn decide(&self, fingerprint: &FingerprintTensor) -> CertifierDecision {
        self(fingerprint)
    }
}

/// Rejects uniformity as soon as any sample repeats.
#[derive(Clone, Copy, Debug, Default)]
pub struct CollisionPolicy;

impl SymmetricPolicy for CollisionPolicy {
    fn decide(&self, fingerprint: &FingerprintTensor) -> CertifierDecision {
        if is_trivial_fingerprint(fingerprint) {
            CertifierDecision::Accept
        } else {
            CertifierDecision::Reject
        }
    }
}

/// Reduces one sample sequence to its fingerprint and hands only that to `policy`.
pub fn symmetric_certifier<P: SymmetricPolicy + ?Sized>(
    samples: &[usize],
    space_size: usize,
    policy: &P,
) -> Result<CertifierDecision> {
    let c = fingerprint(&[samples.to_vec()], space_size)?;
    Ok(policy.decide(&c))
}

/// Log-likelihood-ratio test between two fully known distributions with
/// threshold 0; ties go to `Q`.
#[derive(Clone, Debug)]
pub struct LikelihoodRatioTest {
    log_ratio: Vec<f64>,
}

impl LikelihoodRatioTest {
    pub fn new(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::Dimension("hypotheses live on different sample spaces".into()));
        }
        let log_ratio = p
            .probs()
            .iter()
            .zip(q.probs())
            .map(|(&a, &b)| match (a > 0.0, b > 0.0) {
                (true, true) => (a / b).ln(),
                (true, false) => f64::INFINITY,
                (false, true) => f64::NEG_INFINITY,
                (false, false) => f64::NAN,
            })
            .collect();
        Ok(LikelihoodRatioTest { log_ratio })
    }

    pub fn statistic(&self, samples: &[usize]) -> Result<f64> {
        let mut total = 0.0;
        for &s in samples {
            let r = *self.log_ratio.get(s).ok_or(Error::Label {
                label: s,
                size: self.log_ratio.len(),
            })?;
            if r.is_nan() {
                return Err(Error::ImpossibleSample(s));
            }
            total += r;
        }
        Ok(total)
    }

    pub fn decide(&self, samples: &[usize]) -> Result<Hypothesis> {
        let stat = self.statistic(samples)?;
        if stat.is_nan() {
            // Certain evidence for both sides at once cannot occur for valid samples.
            return Err(Error::Internal("contradictory certain evidence".into()));
        }
        Ok(if stat > 0.0 { Hypothesis::P } else { Hypothesis::Q })
    }
}

/// One-shot form of [`LikelihoodRatioTest`].
pub fn likelihood_ratio_test(p: &DiscreteDistribution, q: &DiscreteDistribution, samples: &[usize]) -> Result<Hypothesis> {
    LikelihoodRatioTest::new(p, q)?.decide(samples)
}

/// Measured error rates of the likelihood-ratio test next to the analytic
/// bound on `(1/l)·ln β_{l,α}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HypothesisTestReport {
    pub l: u64,
    pub alpha: f64,
    pub trials: u64,
    /// Frequency of answering `Q` when `P` is true.
    pub type_i: f64,
    /// Frequency of answering `P` when `Q` is true.
    pub type_ii: f64,
    #[serde(with = "crate::harness::extended")]
    pub bound: f64,
    #[serde(with = "crate::harness::extended")]
    pub eta: f64,
}

/// Monte Carlo estimate of both error rates with `trials` independent runs per
/// hypothesis. Trial `t` uses `rng.split(2t)` under `P` and `rng.split(2t+1)`
/// under `Q`.
pub fn evaluate_likelihood_ratio(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    l: u64,
    alpha: f64,
    trials: u64,
    rng: &RngStream,
) -> Result<HypothesisTestReport> {
    let test = LikelihoodRatioTest::new(p, q)?;
    let (sp, sq) = (p.sampler()?, q.sampler()?);
    let errors = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(u64, u64)> {
            let xs = sp.draw_many(l as usize, &mut rng.split(2 * t));
            let ys = sq.draw_many(l as usize, &mut rng.split(2 * t + 1));
            let e1 = u64::from(test.decide(&xs)? == Hypothesis::Q);
            let e2 = u64::from(test.decide(&ys)? == Hypothesis::P);
            Ok((e1, e2))
        })
        .collect::<Result<Vec<_>>>()?;
    let (e1, e2) = errors.iter().fold((0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1));
    Ok(HypothesisTestReport {
        l,
        alpha,
        trials,
        type_i: e1 as f64 / trials as f64,
        type_ii: e2 as f64 / trials as f64,
        bound: discrimination_error_bound(p, q, l, alpha)?,
        eta: discrimination_eta(p, q)?,
    })
}
