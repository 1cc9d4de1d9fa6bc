use serde::{Deserialize, Serialize};

use super::concentration::{erfc_chain_applies, erfc_chain_bound};
use crate::boson::SampleSpace;
use crate::combinatorics::{factorial, ln_factorial};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundVariant {
    /// Union bound over `Φ_{m,n}`, crude permanent bound and Gaussian
    /// concentration with the erfc envelope.
    Thm5Chain,
    /// Union bound with Markov's inequality on the fourth permanent moment.
    Thm6Markov,
}

impl std::str::FromStr for BoundVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm5-chain" => Ok(BoundVariant::Thm5Chain),
            "thm6-markov" => Ok(BoundVariant::Thm6Markov),
            _ => Err(Error::Parameter(format!("unknown bound variant {s:?}"))),
        }
    }
}

/// Upper bound on `Pr_U[∃S: Pr_{D_U}[S] ≥ ε]` evaluated at finite `(n, m)`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TheoremBound {
    pub variant: BoundVariant,
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    /// Bound clamped to `[0, 1]`; `1.0` when vacuous.
    pub value: f64,
    /// Unclamped value of the formula; `NaN` when the precondition fails.
    #[serde(with = "crate::harness::extended")]
    pub raw: f64,
    /// True when the precondition fails or the value is not below 1.
    pub vacuous: bool,
    /// The `(1 + O(δ))` Haar-to-Gaussian factor is not included.
    pub excludes_haar_factor: bool,
}

/// Evaluates either bound in double precision, in log space where it matters.
///
/// `Thm5Chain`: with `ξ = (√ε/n!)^{1/n}` and `x² = ξ²·m/2`, returns
/// `|Φ_{m,n}|·2n²·e^{1−x²}` provided `n²e^{1−x²} ≤ ½`.
/// `Thm6Markov`: returns `|Φ_{m,n}|·2^{2n}(n!)²(n+1)·m^{−2n}·ε^{−2}`.
pub fn theorem_bound_evaluator(n: usize, m: usize, epsilon: f64, variant: BoundVariant) -> Result<TheoremBound> {
    if n == 0 || m == 0 {
        return Err(Error::Parameter("need n, m >= 1".into()));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Parameter(format!("epsilon must be positive, got {epsilon}")));
    }
    let (nf, mf) = (n as f64, m as f64);
    let ln_space = (SampleSpace::size_of(m, n, false) as f64).ln();
    let (value, precondition) = match variant {
        BoundVariant::Thm5Chain => {
            let xi = ((0.5 * epsilon.ln() - ln_factorial(n as u32)) / nf).exp();
            let x2 = xi * xi * mf / 2.0;
            let x = x2.sqrt();
            if erfc_chain_applies(n, x) {
                ((ln_space + erfc_chain_bound(n, x).ln()).exp(), true)
            } else {
                (f64::NAN, false)
            }
        }
        BoundVariant::Thm6Markov => {
            let ln = ln_space + 2.0 * nf * 2f64.ln() + 2.0 * factorial(n as u32).ln() + (nf + 1.0).ln()
                - 2.0 * nf * mf.ln()
                - 2.0 * epsilon.ln();
            (ln.exp(), true)
        }
    };
    let raw = value;
    let vacuous = !precondition || !(raw < 1.0);
    Ok(TheoremBound {
        variant,
        n,
        m,
        epsilon,
        value: if vacuous { 1.0 } else { raw },
        raw,
        vacuous,
        excludes_haar_factor: variant == BoundVariant::Thm5Chain,
    })
}
