use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mean_and_se;
use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::linalg::{permanent, sample_gaussian_matrix};
use crate::rng::RngStream;

/// Largest order for which moments are estimated.
const MAX_ORDER_N: usize = 8;
/// Block count of the median-of-means estimator.
const MOM_BLOCKS: usize = 20;

/// Monte Carlo estimate of `E|Perm(X)|^order` for `X` with `N(0, 1/m)` real and
/// imaginary parts, next to its closed form.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MomentEstimate {
    pub order: u32,
    pub n: usize,
    pub m: usize,
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
    pub target: f64,
    /// Median of `MOM_BLOCKS` block means, with the block-mean spread scaled
    /// by `1.2533/√blocks` as its standard error.
    pub median_of_means: f64,
    pub median_of_means_se: f64,
}

impl MomentEstimate {
    /// `|mean − target|` in standard errors.
    pub fn z_score(&self) -> f64 {
        (self.mean - self.target).abs() / self.std_error
    }

    pub fn median_of_means_z_score(&self) -> f64 {
        (self.median_of_means - self.target).abs() / self.median_of_means_se
    }
}

/// `2ⁿ·n!·m⁻ⁿ` for order 2, `2²ⁿ·(n!)²·(n+1)·m⁻²ⁿ` for order 4.
pub fn permanent_moment_target(n: usize, m: usize, order: u32) -> Result<f64> {
    let (nf, mf, fact) = (n as f64, m as f64, factorial(n as u32));
    match order {
        2 => Ok(2f64.powf(nf) * fact * mf.powf(-nf)),
        4 => Ok(4f64.powf(nf) * fact * fact * (nf + 1.0) * mf.powf(-2.0 * nf)),
        _ => Err(Error::Parameter(format!("moment order must be 2 or 4, got {order}"))),
    }
}

pub fn permanent_moment_mc(n: usize, m: usize, order: u32, trials: u64, rng: &RngStream) -> Result<MomentEstimate> {
    if n == 0 || n > MAX_ORDER_N || m == 0 {
        return Err(Error::Parameter(format!("need 1 <= n <= {MAX_ORDER_N} and m >= 1")));
    }
    if trials < 1000 {
        return Err(Error::Parameter(format!("need at least 1000 trials, got {trials}")));
    }
    let target = permanent_moment_target(n, m, order)?;
    let sigma = 1.0 / (m as f64).sqrt();
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let x = sample_gaussian_matrix(n, sigma, &mut rng.split(t))?;
            Ok(permanent(&x)?.norm_sqr().powi(order as i32 / 2))
        })
        .collect::<Result<_>>()?;
    let (mean, std_error) = mean_and_se(&samples);
    let (median_of_means, median_of_means_se) = median_of_means(&samples);
    Ok(MomentEstimate {
        order,
        n,
        m,
        trials,
        mean,
        std_error,
        target,
        median_of_means,
        median_of_means_se,
    })
}

fn median_of_means(xs: &[f64]) -> (f64, f64) {
    let blocks = MOM_BLOCKS.min(xs.len());
    let size = xs.len() / blocks;
    let mut means: Vec<f64> = xs
        .chunks(size)
        .take(blocks)
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect();
    let (_, se_of_block) = mean_and_se(&means);
    means.sort_by(f64::total_cmp);
    let mid = means.len() / 2;
    let median = if means.len().is_multiple_of(2) {
        0.5 * (means[mid - 1] + means[mid])
    } else {
        means[mid]
    };
    // Asymptotic efficiency of the median relative to the mean is 2/π.
    (median, se_of_block * (std::f64::consts::PI / 2.0).sqrt())
}
