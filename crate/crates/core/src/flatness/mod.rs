//! Gaussian concentration, permanent moments, the Haar-versus-Gaussian
//! probe, empirical flatness of output distributions and closed-form
//! flatness bounds.

mod bounds;
mod concentration;
mod empirical;
mod moments;
mod multiplicative;

pub use bounds::{theorem_bound_evaluator, BoundVariant, TheoremBound};
pub use concentration::{
    complex_max_entry_exceedance, erfc, erfc_chain_bound, erfc_chain_applies, gaussian_concentration_bound,
    max_entry_exceedance_mc, sample_space_size_bound, stirling_upper, ExceedanceEstimate,
};
pub use empirical::{empirical_flatness, FlatnessOptions, FlatnessReport, FlatnessTrial};
pub use moments::{permanent_moment_mc, permanent_moment_target, MomentEstimate};
pub use multiplicative::{multiplicative_bound_probe, FSpec, MultiplicativeProbeReport, SideEstimate};

/// Mean and standard error of the mean.
pub(crate) fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
