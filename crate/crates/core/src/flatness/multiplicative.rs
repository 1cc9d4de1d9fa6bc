use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mean_and_se;
use crate::boson::OutcomeSequence;
use crate::error::{Error, Result};
use crate::linalg::{haar_isometry, permanent, sample_row_repeated_gaussian, ComplexMatrix};
use crate::rng::RngStream;

/// Built-in `[0, 1]`-valued test functions on `n×n` matrices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FSpec {
    /// `f ≡ 1`.
    One,
    /// Indicator of `max |x_jk| ≥ xi`.
    MaxEntryAtLeast { xi: f64 },
    /// Indicator of `|Perm X|² / Π sⱼ! ≥ epsilon`.
    ProbabilityAtLeast { epsilon: f64 },
}

impl FSpec {
    /// Parses `one`, `max-entry:<xi>` or `probability:<eps>`.
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, arg) = text.split_once(':').unwrap_or((text, ""));
        let value = || {
            arg.parse::<f64>()
                .map_err(|_| Error::Parameter(format!("bad threshold in f-spec {text:?}")))
        };
        match kind {
            "one" => Ok(FSpec::One),
            "max-entry" => Ok(FSpec::MaxEntryAtLeast { xi: value()? }),
            "probability" => Ok(FSpec::ProbabilityAtLeast { epsilon: value()? }),
            _ => Err(Error::Parameter(format!("unknown f-spec {text:?}"))),
        }
    }

    fn eval(&self, x: &ComplexMatrix, factorial_product: f64) -> Result<f64> {
        Ok(match *self {
            FSpec::One => 1.0,
            FSpec::MaxEntryAtLeast { xi } => f64::from(u8::from(x.max_abs() >= xi)),
            FSpec::ProbabilityAtLeast { epsilon } => {
                f64::from(u8::from(permanent(x)?.norm_sqr() / factorial_product >= epsilon))
            }
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SideEstimate {
    pub mean: f64,
    pub std_error: f64,
    /// Empirical `E|x_jk|²` over all entries of all draws.
    pub entry_second_moment: f64,
}

/// Both sides of the Haar-to-Gaussian comparison for one outcome `S`.
///
/// The Haar side samples `U_S` for Haar `U`; the Gaussian side samples the
/// row-repeated ensemble with per-component deviation `sigma` (default
/// `1/√m`). With that default the Gaussian entries have `E|x|² = 2/m` while
/// Haar entries have `E|u|² = 1/m`; both values and their ratio are reported
/// rather than reconciled.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MultiplicativeProbeReport {
    pub m: usize,
    pub n: usize,
    pub outcome: OutcomeSequence,
    pub f: FSpec,
    pub sigma: f64,
    pub trials: u64,
    pub haar: SideEstimate,
    pub gaussian: SideEstimate,
    /// `haar.mean / gaussian.mean`.
    pub ratio: f64,
    /// `haar.entry_second_moment / gaussian.entry_second_moment`.
    pub entry_variance_ratio: f64,
}

fn side<F>(trials: u64, fspec: FSpec, factorial_product: f64, draw: F) -> Result<SideEstimate>
where
    F: Fn(u64) -> Result<ComplexMatrix> + Sync,
{
    let rows: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(f64, f64)> {
            let x = draw(t)?;
            let sq = x.entries().iter().map(|z| z.norm_sqr()).sum::<f64>() / x.entries().len() as f64;
            Ok((fspec.eval(&x, factorial_product)?, sq))
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let (mean, std_error) = mean_and_se(&values);
    let entry_second_moment = rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64;
    Ok(SideEstimate {
        mean,
        std_error,
        entry_second_moment,
    })
}

/// Estimates `E_{U~Haar} f(U_S)` and `E_{X~G_S(σ)} f(X)`. Haar trial `t` uses
/// `rng.split(2t)`, Gaussian trial `t` uses `rng.split(2t+1)`.
pub fn multiplicative_bound_probe(
    m: usize,
    s: &OutcomeSequence,
    fspec: FSpec,
    trials: u64,
    sigma: Option<f64>,
    rng: &RngStream,
) -> Result<MultiplicativeProbeReport> {
    let n = s.photons();
    if s.modes() != m || n == 0 || n > m {
        return Err(Error::Dimension(format!("outcome {s} does not fit m = {m}")));
    }
    if trials < 2 {
        return Err(Error::Parameter("need at least two trials".into()));
    }
    let sigma = sigma.unwrap_or(1.0 / (m as f64).sqrt());
    let rows = s.mode_list();
    let fp = s.factorial_product();
    let haar = side(trials, fspec, fp, |t| {
        haar_isometry(m, n, &mut rng.split(2 * t))?.select_rows(&rows)
    })?;
    let gaussian = side(trials, fspec, fp, |t| sample_row_repeated_gaussian(s, sigma, &mut rng.split(2 * t + 1)))?;
    Ok(MultiplicativeProbeReport {
        m,
        n,
        outcome: s.clone(),
        f: fspec,
        sigma,
        trials,
        ratio: haar.mean / gaussian.mean,
        entry_variance_ratio: haar.entry_second_moment / gaussian.entry_second_moment,
        haar,
        gaussian,
    })
}
