//! Dense complex matrices, permanents and the random-matrix ensembles used by
//! every other module.

mod ensembles;
mod matrix;
pub(crate) mod permanent;

pub use ensembles::{haar_isometry, haar_unitary, sample_gaussian_matrix, sample_row_repeated_gaussian};
pub use matrix::{ComplexMatrix, MatrixFile, UnitaryMatrix, UNITARITY_TOLERANCE};
pub use permanent::{permanent, permanent_naive, permanent_ryser, NAIVE_LIMIT, RYSER_LIMIT};

pub use num_complex::Complex64;
