//! Reproducible experiment driver behind the `bosonbench` binary.

mod config;
pub mod extended;
mod experiments;
mod record;

pub use config::{parse_table, Experiment, ExperimentConfig, Format, CONFIG_KEYS};
pub use experiments::{indistinguishability_experiment, run, run_in_pool, thread_pool};
pub use record::{write_atomic, ExperimentRecord, VERSION};
