pub mod boson;
pub mod certify;
pub mod combinatorics;
pub mod error;
pub mod flatness;
pub mod gaussian;
pub mod harness;
pub mod linalg;
pub mod rng;

pub use error::{Error, Result};
