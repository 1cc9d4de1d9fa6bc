use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::boson::{probabilities_over, OutcomeSequence, SampleSpace, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::linalg::haar_isometry;
use crate::rng::RngStream;

#[derive(Clone, Debug)]
pub struct FlatnessOptions {
    /// Exceedance threshold; defaults to `e^{−2n}`.
    pub threshold: Option<f64>,
    /// Stop starting new trials once this much wall-clock time has passed.
    pub budget: Option<Duration>,
    pub cap: usize,
}

impl Default for FlatnessOptions {
    fn default() -> Self {
        FlatnessOptions {
            threshold: None,
            budget: None,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FlatnessTrial {
    pub trial: u64,
    /// `max_S Pr_{D_U}[S]` over the enumerated space.
    pub max_prob: f64,
    pub argmax: OutcomeSequence,
    /// `D_U` mass of the enumerated space (1 for the full space).
    pub space_mass: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FlatnessReport {
    pub m: usize,
    pub n: usize,
    pub restricted: bool,
    pub space_size: usize,
    pub trials_requested: u64,
    pub threshold: f64,
    /// `n^{−n/2}`, reported alongside.
    pub alt_threshold: f64,
    pub per_trial: Vec<FlatnessTrial>,
    /// Fraction of completed trials with `max ≥ threshold`.
    pub exceedance_fraction: f64,
    pub alt_exceedance_fraction: f64,
    /// False when the time budget stopped the run early.
    pub complete: bool,
}

impl FlatnessReport {
    pub fn trials(&self) -> usize {
        self.per_trial.len()
    }
}

fn suggest(m: usize, n: usize, restricted: bool, cap: usize) -> String {
    let fits = |m: usize, n: usize| SampleSpace::size_of(m, n, restricted) <= cap as u128;
    let m_fit = (n.max(1)..=m).rev().find(|&mm| fits(mm, n));
    let n_fit = (1..=n).rev().find(|&nn| fits(m, nn));
    format!(
        "|Φ| = {} exceeds the cap {cap}; try m <= {} at n = {n}, or n <= {} at m = {m}",
        SampleSpace::size_of(m, n, restricted),
        m_fit.map_or("-".into(), |v| v.to_string()),
        n_fit.map_or("-".into(), |v| v.to_string()),
    )
}

/// Draws `trials` Haar unitaries and records the largest output probability
/// over `Φ_{m,n}` (or `Φ*_{m,n}` when `restricted`) for each. Probabilities
/// are `D_U` values; restricting the space does not renormalise them. Trial
/// `t` uses `rng.split(t)`; outcomes within a trial are evaluated in parallel.
pub fn empirical_flatness(
    m: usize,
    n: usize,
    trials: u64,
    restricted: bool,
    options: &FlatnessOptions,
    rng: &RngStream,
) -> Result<FlatnessReport> {
    if n == 0 || n > m {
        return Err(Error::Dimension(format!("need 1 <= n <= m, got m={m}, n={n}")));
    }
    let space = match SampleSpace::enumerate_with_cap(m, n, restricted, options.cap) {
        Ok(s) => s,
        Err(Error::TooLarge { .. }) => return Err(Error::Range(suggest(m, n, restricted, options.cap))),
        Err(e) => return Err(e),
    };
    let threshold = options.threshold.unwrap_or((-2.0 * n as f64).exp());
    let alt_threshold = (n as f64).powf(-(n as f64) / 2.0);
    let start = Instant::now();
    let mut per_trial = Vec::new();
    let mut complete = true;
    for t in 0..trials {
        if options.budget.is_some_and(|b| start.elapsed() >= b) {
            complete = false;
            break;
        }
        let cols = haar_isometry(m, n, &mut rng.split(t))?;
        let probs = probabilities_over(&space, &cols)?;
        let (idx, max_prob) = probs
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (i, &p)| if p > b.1 { (i, p) } else { b });
        per_trial.push(FlatnessTrial {
            trial: t,
            max_prob,
            argmax: space.element(idx),
            space_mass: probs.iter().sum(),
        });
    }
    let done = per_trial.len().max(1) as f64;
    let frac = |eps: f64| per_trial.iter().filter(|r| r.max_prob >= eps).count() as f64 / done;
    Ok(FlatnessReport {
        m,
        n,
        restricted,
        space_size: space.len(),
        trials_requested: trials,
        threshold,
        alt_threshold,
        exceedance_fraction: frac(threshold),
        alt_exceedance_fraction: frac(alt_threshold),
        per_trial,
        complete,
    })
}
