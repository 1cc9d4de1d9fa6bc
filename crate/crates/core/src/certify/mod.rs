//! What a certifier can do with samples: fingerprints and symmetric decision
//! rules, birthday-type collision bounds, divergences between distributions,
//! and finite-sample discrimination with full knowledge of both hypotheses.

mod birthday;
mod decision;
mod divergence;
mod fingerprint;

pub use birthday::{
    birthday_bound_valid, birthday_lower_bound, fingerprint_triviality_bound, fingerprint_triviality_bound_at,
    triviality_regime_ok,
};
pub use decision::{
    evaluate_likelihood_ratio, likelihood_ratio_test, symmetric_certifier, CertifierDecision, CollisionPolicy,
    Hypothesis, HypothesisTestReport, LikelihoodRatioTest, SymmetricPolicy,
};
pub use divergence::{
    discrimination_error_bound, discrimination_eta, flatness, min_samples_negative, one_norm_distance,
    refined_discrimination_error_bound, relative_entropy, renyi_relative_entropy, slices,
};
pub use fingerprint::{fingerprint, is_trivial_fingerprint, FingerprintFile, FingerprintTensor};
