use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::sample_gaussian_matrix;
use crate::rng::RngStream;

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    statrs::function::erf::erfc(x)
}

fn check(n: usize, sigma: f64, xi: f64) -> Result<()> {
    if n == 0 || !(sigma > 0.0) || !(xi > 0.0) {
        return Err(Error::Parameter(format!(
            "need n >= 1, sigma > 0, xi > 0 (got n={n}, sigma={sigma}, xi={xi})"
        )));
    }
    Ok(())
}

/// `1 − (1 − erfc(ξ/(√2·σ)))^{n²}`, the claimed bound on
/// `Pr[max |x_jk| ≥ ξ]` for the `σ`-Gaussian ensemble.
///
/// The per-entry factor `erfc(ξ/(√2σ))` is the two-sided tail of a *real*
/// `N(0, σ²)` variable. For complex entries with independent `N(0, σ²)` parts
/// the modulus tail is `exp(−ξ²/(2σ²))`, which is larger; see
/// [`complex_max_entry_exceedance`].
pub fn gaussian_concentration_bound(n: usize, sigma: f64, xi: f64) -> Result<f64> {
    check(n, sigma, xi)?;
    let tail = erfc(xi / (std::f64::consts::SQRT_2 * sigma));
    Ok(1.0 - (1.0 - tail).powf((n * n) as f64))
}

/// Exact `Pr[max |x_jk| ≥ ξ]` for `n²` independent complex entries with
/// `N(0, σ²)` real and imaginary parts: `1 − (1 − e^{−ξ²/(2σ²)})^{n²}`.
pub fn complex_max_entry_exceedance(n: usize, sigma: f64, xi: f64) -> Result<f64> {
    check(n, sigma, xi)?;
    let tail = (-xi * xi / (2.0 * sigma * sigma)).exp();
    Ok(-((n * n) as f64 * (-tail).ln_1p()).exp_m1())
}

/// Whether the geometric-series step applies: `n²·e^{1−x²} ≤ ½`.
pub fn erfc_chain_applies(n: usize, x: f64) -> bool {
    (n * n) as f64 * (1.0 - x * x).exp() <= 0.5
}

/// `2n²·e^{1−x²}`, an upper bound on `1 − (1 − e^{−x²})^{n²}` (and hence on
/// the erfc form) whenever [`erfc_chain_applies`].
pub fn erfc_chain_bound(n: usize, x: f64) -> f64 {
    2.0 * (n * n) as f64 * (1.0 - x * x).exp()
}

/// `e^{1−n}·n^{n+1/2}`, an upper bound on `n!`.
pub fn stirling_upper(n: u32) -> f64 {
    let n = f64::from(n);
    ((1.0 - n) + (n + 0.5) * n.ln()).exp()
}

/// `(2(c+1)e)ⁿ·n^{(ν−1)n}`, an upper bound on `|Φ_{m,n}|` when `m ≤ c·n^ν`.
pub fn sample_space_size_bound(n: u32, c: f64, nu: f64) -> f64 {
    let nf = f64::from(n);
    (nf * (2.0 * (c + 1.0) * std::f64::consts::E).ln() + (nu - 1.0) * nf * nf.ln()).exp()
}

/// Monte Carlo frequency of `max |x_jk| ≥ ξ`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ExceedanceEstimate {
    pub n: usize,
    pub sigma: f64,
    pub xi: f64,
    pub draws: u64,
    pub frequency: f64,
    pub std_error: f64,
}

/// Draws `draws` matrices from the `σ`-Gaussian ensemble; draw `t` uses
/// `rng.split(t)`.
pub fn max_entry_exceedance_mc(n: usize, sigma: f64, xi: f64, draws: u64, rng: &RngStream) -> Result<ExceedanceEstimate> {
    check(n, sigma, xi)?;
    if draws == 0 {
        return Err(Error::Parameter("need at least one draw".into()));
    }
    let hits: u64 = (0..draws)
        .into_par_iter()
        .map(|t| -> Result<u64> {
            let x = sample_gaussian_matrix(n, sigma, &mut rng.split(t))?;
            Ok(u64::from(x.max_abs() >= xi))
        })
        .sum::<Result<u64>>()?;
    let f = hits as f64 / draws as f64;
    Ok(ExceedanceEstimate {
        n,
        sigma,
        xi,
        draws,
        frequency: f,
        std_error: (f * (1.0 - f) / draws as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::factorial;

    #[test]
    fn bound_vanishes_for_large_threshold() {
        assert!(gaussian_concentration_bound(4, 0.1, 50.0).unwrap() < 1e-300);
        assert!(complex_max_entry_exceedance(4, 0.1, 50.0).unwrap() < 1e-300);
        assert!(gaussian_concentration_bound(0, 0.1, 1.0).is_err());
        assert!(gaussian_concentration_bound(1, 0.0, 1.0).is_err());
    }

    #[test]
    fn monotone_on_grids() {
        for n in 1..=6 {
            let mut prev = 2.0;
            for k in 1..60 {
                let xi = 0.05 * k as f64;
                let b = gaussian_concentration_bound(n, 0.3, xi).unwrap();
                assert!(b <= prev);
                prev = b;
                if n > 1 {
                    assert!(b >= gaussian_concentration_bound(n - 1, 0.3, xi).unwrap());
                }
            }
        }
    }

    #[test]
    fn chain_dominates_both_tails() {
        for n in 1..=6 {
            for k in 0..200 {
                let x = 0.05 * k as f64;
                if !erfc_chain_applies(n, x) {
                    continue;
                }
                let sigma = 1.0;
                let xi = x * std::f64::consts::SQRT_2 * sigma;
                let chain = erfc_chain_bound(n, x);
                assert!(gaussian_concentration_bound(n, sigma, xi).unwrap() <= chain);
                assert!(complex_max_entry_exceedance(n, sigma, xi).unwrap() <= chain);
            }
        }
    }

    #[test]
    fn erfc_below_gaussian_envelope() {
        for k in 0..=1000 {
            let x = 0.01 * k as f64;
            assert!(erfc(x) <= (-x * x).exp() * (1.0 + 1e-14));
        }
    }

    #[test]
    fn complex_tail_matches_mc() {
        let est = max_entry_exceedance_mc(2, 0.5, 0.9, 200_000, &RngStream::new(9, 0)).unwrap();
        let exact = complex_max_entry_exceedance(2, 0.5, 0.9).unwrap();
        assert!((est.frequency - exact).abs() <= 3.0 * est.std_error, "{est:?} vs {exact}");
    }

    #[test]
    fn stirling_and_space_bounds() {
        for n in 1..=20 {
            assert!(factorial(n) <= stirling_upper(n) * (1.0 + 1e-12));
        }
        assert!(sample_space_size_bound(2, 1.0, 2.0) > 0.0);
    }
}
