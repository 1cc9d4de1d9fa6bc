//! Gaussian states, Gaussian channels and bucket detectors in phase space.
//!
//! Quadratures are stored in block order `(x_1, …, x_m, p_1, …, p_m)`; the
//! vacuum covariance is `½·I`, so the single-mode vacuum Wigner function is
//! `e^{−|r|²}/π`.

mod channel;
mod circuit;
mod detector;
mod state;

pub use channel::{apply_channel, lossy_channel, passive_network_channel, GaussianChannel};
pub use circuit::{ChannelSpec, CircuitFile, InputSpec, PatternCounts};
pub use detector::{bucket_detect, classical_sample, pattern_string, BucketDetector, Pattern};
pub use state::{coherent_state, sample_phase_point, squeezed_state, vacuum_state, GaussianState, PhasePoint};

use nalgebra::{DMatrix, SymmetricEigen};

pub const STATE_TOLERANCE: f64 = 1e-9;
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// The symplectic form `Ω = [[0, I], [−I, 0]]` on `2m` block-ordered quadratures.
pub fn symplectic_form(m: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * m, 2 * m);
    for j in 0..m {
        omega[(j, m + j)] = 1.0;
        omega[(m + j, j)] = -1.0;
    }
    omega
}

/// Smallest eigenvalue of the Hermitian matrix `A + iK` (`A` symmetric, `K`
/// antisymmetric), via the real embedding `[[A, −K], [K, A]]`.
pub(crate) fn min_hermitian_eigenvalue(a: &DMatrix<f64>, k: &DMatrix<f64>) -> f64 {
    let d = a.nrows();
    let mut big = DMatrix::zeros(2 * d, 2 * d);
    big.view_mut((0, 0), (d, d)).copy_from(a);
    big.view_mut((d, d), (d, d)).copy_from(a);
    big.view_mut((d, 0), (d, d)).copy_from(k);
    big.view_mut((0, d), (d, d)).copy_from(&(-k));
    SymmetricEigen::new(big).eigenvalues.min()
}

pub(crate) fn max_asymmetry(a: &DMatrix<f64>) -> f64 {
    (a - a.transpose()).amax()
}

pub(crate) fn rows_to_matrix(rows: &[Vec<f64>], what: &str) -> crate::Result<DMatrix<f64>> {
    let n = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != c) {
        return Err(crate::Error::Dimension(format!("{what}: ragged rows")));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(crate::Error::Parameter(format!("{what}: non-finite entry")));
    }
    Ok(DMatrix::from_fn(n, c, |i, j| rows[i][j]))
}

pub(crate) fn matrix_to_rows(a: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..a.nrows()).map(|i| a.row(i).iter().copied().collect()).collect()
}
