use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{matrix_to_rows, max_asymmetry, min_hermitian_eigenvalue, symplectic_form, STATE_TOLERANCE, SYMMETRY_TOLERANCE};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// A point `r ∈ R^{2m}` of phase space, block ordered.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhasePoint(Vec<f64>);

impl PhasePoint {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        if !r.len().is_multiple_of(2) || r.is_empty() {
            return Err(Error::Dimension(format!("phase point needs an even, nonzero length, got {}", r.len())));
        }
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("phase point has a non-finite entry".into()));
        }
        Ok(PhasePoint(r))
    }

    pub fn modes(&self) -> usize {
        self.0.len() / 2
    }

    /// `(x_j, p_j)` for mode `j`.
    pub fn mode(&self, j: usize) -> (f64, f64) {
        (self.0[j], self.0[self.modes() + j])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Validates symmetry and the uncertainty relation `γ + iΩ/2 ≥ 0`.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let d = mean.len();
        if d == 0 || !d.is_multiple_of(2) || cov.shape() != (d, d) {
            return Err(Error::Dimension(format!(
                "mean of length {d} with covariance {}x{}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.iter().chain(cov.iter()).any(|x| !x.is_finite()) {
            return Err(Error::State("non-finite entry".into()));
        }
        let asym = max_asymmetry(&cov);
        if asym > SYMMETRY_TOLERANCE {
            return Err(Error::State(format!("covariance asymmetric by {asym:e}")));
        }
        let state = GaussianState { mean, cov };
        let nu = state.symplectic_eigenvalues();
        if let Some(&low) = nu.first() {
            if low < 0.5 - STATE_TOLERANCE {
                return Err(Error::State(format!("symplectic eigenvalue {low} below 1/2")));
            }
        }
        let uncertainty = min_hermitian_eigenvalue(&state.cov, &(symplectic_form(state.modes()) * 0.5));
        if uncertainty < -STATE_TOLERANCE {
            return Err(Error::State(format!("uncertainty relation violated by {uncertainty:e}")));
        }
        Ok(state)
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Symplectic eigenvalues in ascending order, one per mode. Returns an
    /// empty vector if the covariance is not positive definite.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(self.cov.clone());
        if eig.eigenvalues.min() <= 0.0 {
            return Vec::new();
        }
        let root = &eig.eigenvectors
            * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
            * eig.eigenvectors.transpose();
        // A = γ^{1/2} Ω γ^{1/2} is antisymmetric with spectrum ±iν.
        let a = &root * symplectic_form(self.modes()) * &root;
        let mut nu: Vec<f64> = SymmetricEigen::new(a.transpose() * &a)
            .eigenvalues
            .iter()
            .map(|v| v.max(0.0).sqrt())
            .collect();
        nu.sort_by(f64::total_cmp);
        nu.into_iter().step_by(2).collect()
    }

    /// Wigner function `W(r) = exp(−½(r−μ)ᵀγ⁻¹(r−μ)) / ((2π)^m √det γ)`.
    pub fn wigner(&self, r: &PhasePoint) -> Result<f64> {
        if r.as_slice().len() != self.mean.len() {
            return Err(Error::Dimension("phase point and state differ in modes".into()));
        }
        let chol = Cholesky::new(self.cov.clone()).ok_or_else(|| Error::State("covariance not positive definite".into()))?;
        let diff = DVector::from_column_slice(r.as_slice()) - &self.mean;
        let q = diff.dot(&chol.solve(&diff));
        let det = chol.determinant();
        Ok((-0.5 * q).exp() / ((2.0 * std::f64::consts::PI).powi(self.modes() as i32) * det.sqrt()))
    }

    /// Single-mode marginal `(mean, 2×2 covariance)` of mode `j`.
    pub fn reduced(&self, j: usize) -> ([f64; 2], [[f64; 2]; 2]) {
        let m = self.modes();
        let (x, p) = (j, m + j);
        (
            [self.mean[x], self.mean[p]],
            [[self.cov[(x, x)], self.cov[(x, p)]], [self.cov[(p, x)], self.cov[(p, p)]]],
        )
    }

    pub fn covariance_rows(&self) -> Vec<Vec<f64>> {
        matrix_to_rows(&self.cov)
    }
}

pub fn vacuum_state(m: usize) -> Result<GaussianState> {
    if m == 0 {
        return Err(Error::Parameter("need at least one mode".into()));
    }
    GaussianState::new(DVector::zeros(2 * m), DMatrix::identity(2 * m, 2 * m) * 0.5)
}

/// Product of coherent states with displacement `(r1, r2)` per mode.
pub fn coherent_state(displacements: &[(f64, f64)]) -> Result<GaussianState> {
    let m = displacements.len();
    if m == 0 {
        return Err(Error::Parameter("need at least one mode".into()));
    }
    let mut mean = DVector::zeros(2 * m);
    for (j, &(x, p)) in displacements.iter().enumerate() {
        mean[j] = x;
        mean[m + j] = p;
    }
    GaussianState::new(mean, DMatrix::identity(2 * m, 2 * m) * 0.5)
}

/// Product of squeezed vacua; mode `j` has covariance `diag(e^{2s_j}, e^{−2s_j})/2`.
pub fn squeezed_state(squeezing: &[f64]) -> Result<GaussianState> {
    let m = squeezing.len();
    if m == 0 {
        return Err(Error::Parameter("need at least one mode".into()));
    }
    let mut cov = DMatrix::zeros(2 * m, 2 * m);
    for (j, &s) in squeezing.iter().enumerate() {
        cov[(j, j)] = (2.0 * s).exp() / 2.0;
        cov[(m + j, m + j)] = (-2.0 * s).exp() / 2.0;
    }
    GaussianState::new(DVector::zeros(2 * m), cov)
}

/// Draws a point from the Wigner density of `state`.
pub fn sample_phase_point(state: &GaussianState, rng: &mut RngStream) -> Result<PhasePoint> {
    let chol = Cholesky::new(state.cov.clone()).ok_or_else(|| Error::State("covariance not positive definite".into()))?;
    Ok(draw_with(&chol.l(), &state.mean, rng))
}

pub(crate) fn draw_with(l: &DMatrix<f64>, mean: &DVector<f64>, rng: &mut RngStream) -> PhasePoint {
    let z = DVector::from_fn(mean.len(), |_, _| rng.standard_normal());
    PhasePoint((mean + l * z).as_slice().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn vacuum_wigner_at_origin() {
        for m in 1..4 {
            let v = vacuum_state(m).unwrap();
            let w = v.wigner(&PhasePoint::new(vec![0.0; 2 * m]).unwrap()).unwrap();
            assert!((w - PI.powi(-(m as i32))).abs() < 1e-14);
        }
    }

    #[test]
    fn coherent_wigner_matches_closed_form() {
        let c = coherent_state(&[(1.0, 0.0)]).unwrap();
        let r = PhasePoint::new(vec![0.3, -0.7]).unwrap();
        let expected = (-(0.3f64 - 1.0).powi(2) - 0.49).exp() / PI;
        assert!((c.wigner(&r).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn zero_displacement_is_vacuum() {
        assert_eq!(coherent_state(&[(0.0, 0.0)]).unwrap(), vacuum_state(1).unwrap());
    }

    #[test]
    fn symplectic_eigenvalues() {
        let v = vacuum_state(3).unwrap();
        for nu in v.symplectic_eigenvalues() {
            assert!((nu - 0.5).abs() < 1e-12);
        }
        let s = squeezed_state(&[0.7, -0.2]).unwrap();
        for nu in s.symplectic_eigenvalues() {
            assert!((nu - 0.5).abs() < 1e-12);
        }
        let thermal = GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 1.5).unwrap();
        assert!((thermal.symplectic_eigenvalues()[0] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_unphysical() {
        let too_small = GaussianState::new(DVector::zeros(2), DMatrix::identity(2, 2) * 0.4);
        assert!(matches!(too_small, Err(Error::State(_))));
        let asym = GaussianState::new(DVector::zeros(2), DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]));
        assert!(matches!(asym, Err(Error::State(_))));
        // Classically fine but violates the uncertainty relation.
        let squashed = GaussianState::new(DVector::zeros(2), DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.1]));
        assert!(squashed.is_err());
    }

    #[test]
    fn sampling_moments() {
        let c = coherent_state(&[(1.0, 0.0)]).unwrap();
        let mut rng = RngStream::new(5, 0);
        let draws = 200_000;
        let (mut sx, mut sp, mut sxx) = (0.0, 0.0, 0.0);
        for _ in 0..draws {
            let r = sample_phase_point(&c, &mut rng).unwrap();
            sx += r.as_slice()[0];
            sp += r.as_slice()[1];
            sxx += (r.as_slice()[0] - 1.0).powi(2);
        }
        let nf = draws as f64;
        let se = (0.5 / nf).sqrt();
        assert!((sx / nf - 1.0).abs() < 4.0 * se);
        assert!((sp / nf).abs() < 4.0 * se);
        // Var of the sample variance of N(0, ½) is 2·(½)²/n.
        assert!((sxx / nf - 0.5).abs() < 4.0 * (0.5 / nf).sqrt());
    }

    #[test]
    fn sampling_is_deterministic() {
        let v = vacuum_state(2).unwrap();
        let a = sample_phase_point(&v, &mut RngStream::new(9, 1)).unwrap();
        let b = sample_phase_point(&v, &mut RngStream::new(9, 1)).unwrap();
        assert_eq!(a, b);
    }
}
