//! Divergences and discrimination bounds. Entropies use natural logarithms;
//! min-entropy is reported in bits. `+∞` is returned as `f64::INFINITY`.

use std::sync::Arc;

use crate::boson::DiscreteDistribution;
use crate::error::{Error, Result};

/// The same quantities on raw probability slices.
pub mod slices {
    use crate::error::{Error, Result};

    fn same_len(p: &[f64], q: &[f64]) -> Result<()> {
        if p.len() != q.len() {
            return Err(Error::Dimension(format!("{} vs {} probabilities", p.len(), q.len())));
        }
        Ok(())
    }

    fn supported(p: &[f64], q: &[f64]) -> bool {
        p.iter().zip(q).all(|(&a, &b)| a == 0.0 || b > 0.0)
    }

    pub fn renyi_relative_entropy(p: &[f64], q: &[f64], t: f64) -> Result<f64> {
        same_len(p, q)?;
        if !(t >= 0.0) || t == 1.0 || !t.is_finite() {
            return Err(Error::Parameter(format!(
                "Rényi order must be finite, >= 0 and != 1, got {t} (use relative_entropy for t = 1)"
            )));
        }
        if !supported(p, q) {
            return Ok(f64::INFINITY);
        }
        let sum: f64 = p
            .iter()
            .zip(q)
            .filter(|(&a, &b)| a > 0.0 && b > 0.0)
            .map(|(&a, &b)| a.powf(t) * b.powf(1.0 - t))
            .sum();
        Ok(sum.ln() / (t - 1.0))
    }

    pub fn relative_entropy(p: &[f64], q: &[f64]) -> Result<f64> {
        same_len(p, q)?;
        if !supported(p, q) {
            return Ok(f64::INFINITY);
        }
        Ok(p.iter()
            .zip(q)
            .filter(|(&a, _)| a > 0.0)
            .map(|(&a, &b)| a * (a / b).ln())
            .sum::<f64>()
            .max(0.0))
    }

    pub fn one_norm_distance(p: &[f64], q: &[f64]) -> Result<f64> {
        same_len(p, q)?;
        Ok(p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum())
    }
}

fn same_space(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<()> {
    let (a, b) = (p.space(), q.space());
    if Arc::ptr_eq(a, b) || (a.m() == b.m() && a.n() == b.n() && a.restricted() == b.restricted()) {
        Ok(())
    } else {
        Err(Error::Dimension("distributions live on different sample spaces".into()))
    }
}

/// `(ε, H∞)`: largest probability and min-entropy in bits.
pub fn flatness(dist: &DiscreteDistribution) -> (f64, f64) {
    dist.flatness()
}

/// `S_t(P‖Q) = (1/(t−1))·ln Σ P^t Q^{1−t}` over the common support when
/// `supp P ⊆ supp Q`, and `+∞` otherwise.
pub fn renyi_relative_entropy(p: &DiscreteDistribution, q: &DiscreteDistribution, t: f64) -> Result<f64> {
    same_space(p, q)?;
    slices::renyi_relative_entropy(p.probs(), q.probs(), t)
}

/// Kullback–Leibler divergence `Σ P ln(P/Q)`, natural log.
pub fn relative_entropy(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    same_space(p, q)?;
    slices::relative_entropy(p.probs(), q.probs())
}

pub fn one_norm_distance(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    same_space(p, q)?;
    slices::one_norm_distance(p.probs(), q.probs())
}

fn check_l_alpha(l: u64, alpha: f64) -> Result<()> {
    if l == 0 {
        return Err(Error::Parameter("need at least one sample".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

fn prefactor(alpha: f64) -> f64 {
    4.0 * std::f64::consts::SQRT_2 * (1.0 / alpha).ln()
}

/// Upper bound on `(1/l)·ln β_{l,α}`, the best type-II error exponent at
/// type-I error `α`:
/// `−S(P‖Q) + (1/√l)·4√2·ln(1/α)·(S_{3/2}(P‖Q)/2 + ln 3)`.
/// Infinite divergences yield `+∞` (no guarantee).
pub fn discrimination_error_bound(p: &DiscreteDistribution, q: &DiscreteDistribution, l: u64, alpha: f64) -> Result<f64> {
    check_l_alpha(l, alpha)?;
    let s = relative_entropy(p, q)?;
    let s32 = renyi_relative_entropy(p, q, 1.5)?;
    if !s.is_finite() || !s32.is_finite() {
        return Ok(f64::INFINITY);
    }
    Ok(-s + prefactor(alpha) * (s32 / 2.0 + 3f64.ln()) / (l as f64).sqrt())
}

/// `η = 1 + e^{S_{3/2}/2} + e^{−S_{1/2}/2}`.
pub fn discrimination_eta(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    let s32 = renyi_relative_entropy(p, q, 1.5)?;
    let s12 = renyi_relative_entropy(p, q, 0.5)?;
    Ok(1.0 + (s32 / 2.0).exp() + (-s12 / 2.0).exp())
}

/// The sharper form before `η` is bounded:
/// `−S(P‖Q) + (1/√l)·4√2·ln(1/α)·ln η − 2 ln 2 / l`.
pub fn refined_discrimination_error_bound(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    l: u64,
    alpha: f64,
) -> Result<f64> {
    check_l_alpha(l, alpha)?;
    let s = relative_entropy(p, q)?;
    let eta = discrimination_eta(p, q)?;
    if !s.is_finite() || !eta.is_finite() {
        return Ok(f64::INFINITY);
    }
    let l = l as f64;
    Ok(-s + prefactor(alpha) * eta.ln() / l.sqrt() - 2.0 * 2f64.ln() / l)
}

/// Smallest `l` for which [`discrimination_error_bound`] is `≤ 0`, i.e.
/// `⌈(4√2·ln(1/α)·(S_{3/2}/2 + ln 3) / S)²⌉`. `None` when `S = 0` or either
/// divergence is infinite.
pub fn min_samples_negative(p: &DiscreteDistribution, q: &DiscreteDistribution, alpha: f64) -> Result<Option<u64>> {
    check_l_alpha(1, alpha)?;
    let s = relative_entropy(p, q)?;
    let s32 = renyi_relative_entropy(p, q, 1.5)?;
    if !(s > 0.0) || !s.is_finite() || !s32.is_finite() {
        return Ok(None);
    }
    let root = prefactor(alpha) * (s32 / 2.0 + 3f64.ln()) / s;
    let mut l = (root * root).ceil().max(1.0) as u64;
    // Guard against rounding at the crossing point.
    while discrimination_error_bound(p, q, l, alpha)? > 0.0 {
        l += 1;
    }
    while l > 1 && discrimination_error_bound(p, q, l - 1, alpha)? <= 0.0 {
        l -= 1;
    }
    Ok(Some(l))
}
