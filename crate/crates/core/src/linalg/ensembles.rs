use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ComplexMatrix, UnitaryMatrix};
use crate::boson::OutcomeSequence;
use crate::error::{Error, Result};
use crate::rng::RngStream;

fn ginibre(rows: usize, cols: usize, rng: &mut RngStream) -> DMatrix<Complex64> {
    // Column-major fill; the scale is irrelevant after orthonormalisation.
    DMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.standard_normal(), rng.standard_normal()))
}

/// QR of a complex Ginibre matrix with each column of `Q` multiplied by the
/// phase of the matching diagonal entry of `R`, which makes the result exactly
/// Haar distributed on the Stiefel manifold.
fn phase_fixed_q(g: DMatrix<Complex64>) -> ComplexMatrix {
    let (rows, cols) = g.shape();
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut out = ComplexMatrix::zeros(rows, cols);
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..rows {
            out[(i, j)] = q[(i, j)] * phase;
        }
    }
    out
}

/// Haar-random `m×m` unitary.
pub fn haar_unitary(m: usize, rng: &mut RngStream) -> Result<UnitaryMatrix> {
    if m == 0 {
        return Err(Error::Dimension("Haar unitary needs m >= 1".into()));
    }
    Ok(UnitaryMatrix::from_unchecked(phase_fixed_q(ginibre(m, m, rng))))
}

/// The leading `n` columns of a Haar-random `m×m` unitary, drawn directly at
/// `O(m·n²)` cost. Column `j` of a phase-fixed QR depends only on the first
/// `j+1` Ginibre columns, so this has exactly the same law as truncating
/// [`haar_unitary`].
pub fn haar_isometry(m: usize, n: usize, rng: &mut RngStream) -> Result<ComplexMatrix> {
    if m == 0 || n == 0 || n > m {
        return Err(Error::Dimension(format!("cannot draw a {m}x{n} Haar isometry")));
    }
    Ok(phase_fixed_q(ginibre(m, n, rng)))
}

/// `n×n` matrix whose entries have independent `N(0, σ²)` real and imaginary parts.
pub fn sample_gaussian_matrix(n: usize, sigma: f64, rng: &mut RngStream) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::Dimension("Gaussian matrix needs n >= 1".into()));
    }
    gaussian_rows(n, n, sigma, rng)
}

fn gaussian_rows(rows: usize, cols: usize, sigma: f64, rng: &mut RngStream) -> Result<ComplexMatrix> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Parameter(format!("sigma must be positive, got {sigma}")));
    }
    let entries = (0..rows * cols)
        .map(|_| Complex64::new(sigma * rng.standard_normal(), sigma * rng.standard_normal()))
        .collect();
    ComplexMatrix::from_vec(rows, cols, entries)
}

/// Draws a `|S̃|×n` Gaussian matrix, `S̃` being `S` with its zeros removed, and
/// returns the `n×n` matrix holding `s̃ⱼ` consecutive copies of row `j`.
pub fn sample_row_repeated_gaussian(
    s: &OutcomeSequence,
    sigma: f64,
    rng: &mut RngStream,
) -> Result<ComplexMatrix> {
    let n = s.photons();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let compressed = s.nonzero();
    let base = gaussian_rows(compressed.len(), n, sigma, rng)?;
    let rows: Vec<usize> = compressed
        .iter()
        .enumerate()
        .flat_map(|(j, &count)| std::iter::repeat_n(j, count as usize))
        .collect();
    base.select_rows(&rows)
}
