use crate::error::{Error, Result};

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    Ok(())
}

/// Whether the collision-free lower bound is claimed for `l` draws from
/// `ε`-flat sources: `l ≤ 1 + 1/(2ε)`.
pub fn birthday_bound_valid(l: u64, epsilon: f64) -> bool {
    l >= 1 && epsilon > 0.0 && (l as f64) <= 1.0 + 1.0 / (2.0 * epsilon)
}

/// Lower bound `2^{−l²ε}` on the probability that `l` independent draws from
/// (not necessarily identical) `ε`-flat distributions are all distinct.
pub fn birthday_lower_bound(l: u64, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if !birthday_bound_valid(l, epsilon) {
        return Err(Error::Range(format!(
            "l = {l} is outside 1 <= l <= 1 + 1/(2ε) = {}",
            1.0 + 1.0 / (2.0 * epsilon)
        )));
    }
    let l = l as f64;
    Ok((-l * l * epsilon).exp2())
}

/// Whether `(k, l, ε)` sits where the collision argument for `k` sequences
/// applies, i.e. the `k·l` pooled draws satisfy the birthday validity range.
pub fn triviality_regime_ok(k: u64, l: u64, epsilon: f64) -> bool {
    l == 0 || birthday_bound_valid(k * l, epsilon)
}

/// Upper bound `(k·a)²·√ε` on the probability that the fingerprint of `k`
/// sequences of `l ≤ a·ε^{−1/4}` samples from `ε`-flat sources is nontrivial.
pub fn fingerprint_triviality_bound(k: u64, l: u64, epsilon: f64, a: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if k == 0 || !(a > 0.0) {
        return Err(Error::Parameter("need k >= 1 and a > 0".into()));
    }
    if l as f64 > a * epsilon.powf(-0.25) * (1.0 + 1e-12) {
        return Err(Error::Range(format!(
            "l = {l} exceeds a·ε^(-1/4) = {}",
            a * epsilon.powf(-0.25)
        )));
    }
    if !triviality_regime_ok(k, l, epsilon) {
        return Err(Error::Range(format!(
            "k·l = {} exceeds 1 + 1/(2ε); epsilon is too large for the collision bound",
            k * l
        )));
    }
    let ka = k as f64 * a;
    Ok(ka * ka * epsilon.sqrt())
}

/// [`fingerprint_triviality_bound`] with the tightest admissible constant
/// `a = l·ε^{1/4}`, which reduces to `(k·l)²·ε`.
pub fn fingerprint_triviality_bound_at(k: u64, l: u64, epsilon: f64) -> Result<f64> {
    if l == 0 {
        check_epsilon(epsilon)?;
        return Ok(0.0);
    }
    fingerprint_triviality_bound(k, l, epsilon, l as f64 * epsilon.powf(0.25))
}
