use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("permanent of a {size}x{size} matrix exceeds the {limit}x{limit} size guard")]
    SizeGuard { size: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("sample space of {size} elements exceeds the enumeration cap of {cap}")]
    TooLarge { size: u128, cap: usize },

    #[error("outcome sequence has no photons")]
    EmptySequence,

    #[error("collision-free mass {mass:e} is at or below the post-selection threshold {threshold:e}")]
    ZeroMass { mass: f64, threshold: f64 },

    #[error("sample space is empty")]
    EmptySpace,

    #[error("label {label} outside a sample space of size {size}")]
    Label { label: usize, size: usize },

    #[error("sample {0} has zero probability under both hypotheses")]
    ImpossibleSample(usize),

    #[error("value outside the validity range: {0}")]
    Range(String),

    #[error("invalid gaussian state: {0}")]
    State(String),

    #[error("invalid gaussian channel: {0}")]
    Channel(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("invalid configuration: {message}")]
    Config { message: String, keys: Vec<String> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Short machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::SizeGuard { .. } => "size_guard",
            Error::Parameter(_) => "parameter",
            Error::TooLarge { .. } => "too_large",
            Error::EmptySequence => "empty_sequence",
            Error::ZeroMass { .. } => "zero_mass",
            Error::EmptySpace => "empty_space",
            Error::Label { .. } => "label",
            Error::ImpossibleSample(_) => "impossible_sample",
            Error::Range(_) => "range",
            Error::State(_) => "state",
            Error::Channel(_) => "channel",
            Error::Internal(_) => "internal",
            Error::Config { .. } => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
