//! The Boson-Sampling sample space, exact output distributions and samplers.

mod distribution;
mod outcome;
mod space;

pub use distribution::{
    build_submatrix, collision_free_fraction, draw_indices, draw_samples, full_distribution, outcome_probability,
    postselected_distribution, probabilities_over, uniform_distribution, AliasSampler, DiscreteDistribution,
    DistributionFile, ZERO_MASS_THRESHOLD,
};
pub use outcome::OutcomeSequence;
pub use space::{SampleSpace, DEFAULT_ENUMERATION_CAP};
