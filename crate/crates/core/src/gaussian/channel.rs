use nalgebra::{DMatrix, DVector};

use super::{max_asymmetry, min_hermitian_eigenvalue, symplectic_form, GaussianState, STATE_TOLERANCE, SYMMETRY_TOLERANCE};
use crate::error::{Error, Result};
use crate::linalg::UnitaryMatrix;

/// Affine action `μ ↦ Xμ + d`, `γ ↦ XγXᵀ + Y` on block-ordered quadratures.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianChannel {
    x: DMatrix<f64>,
    y: DMatrix<f64>,
    d: DVector<f64>,
}

impl GaussianChannel {
    /// Checks shapes, symmetry of `Y` and complete positivity
    /// `Y + (i/2)(Ω − XΩXᵀ) ≥ 0`.
    pub fn new(x: DMatrix<f64>, y: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        let n = d.len();
        if n == 0 || !n.is_multiple_of(2) || x.shape() != (n, n) || y.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "channel with X {:?}, Y {:?}, d of length {n}",
                x.shape(),
                y.shape()
            )));
        }
        if x.iter().chain(y.iter()).chain(d.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Channel("non-finite entry".into()));
        }
        if max_asymmetry(&y) > SYMMETRY_TOLERANCE {
            return Err(Error::Channel("Y is not symmetric".into()));
        }
        let channel = GaussianChannel { x, y, d };
        let low = channel.cp_margin();
        if low < -STATE_TOLERANCE {
            return Err(Error::Channel(format!("not completely positive (eigenvalue {low:e})")));
        }
        Ok(channel)
    }

    pub fn identity(m: usize) -> Self {
        GaussianChannel {
            x: DMatrix::identity(2 * m, 2 * m),
            y: DMatrix::zeros(2 * m, 2 * m),
            d: DVector::zeros(2 * m),
        }
    }

    pub fn modes(&self) -> usize {
        self.d.len() / 2
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DMatrix<f64> {
        &self.y
    }

    pub fn d(&self) -> &DVector<f64> {
        &self.d
    }

    /// Smallest eigenvalue of `Y + (i/2)(Ω − XΩXᵀ)`.
    pub fn cp_margin(&self) -> f64 {
        let omega = symplectic_form(self.modes());
        let k = (&omega - &self.x * &omega * self.x.transpose()) * 0.5;
        min_hermitian_eigenvalue(&self.y, &k)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GaussianChannel) -> Result<GaussianChannel> {
        if self.modes() != next.modes() {
            return Err(Error::Dimension("channels act on different mode counts".into()));
        }
        let y = &next.x * &self.y * next.x.transpose() + &next.y;
        GaussianChannel::new(&next.x * &self.x, (&y + y.transpose()) * 0.5, &next.x * &self.d + &next.d)
    }
}

/// The channel `ρ ↦ φ(U)ρφ(U)†` of a passive interferometer:
/// `X = [[Re U, −Im U], [Im U, Re U]]`, `Y = 0`, `d = 0`.
pub fn passive_network_channel(u: &UnitaryMatrix) -> GaussianChannel {
    let m = u.dim();
    let mut x = DMatrix::zeros(2 * m, 2 * m);
    for j in 0..m {
        for k in 0..m {
            let z = u[(j, k)];
            x[(j, k)] = z.re;
            x[(j, m + k)] = -z.im;
            x[(m + j, k)] = z.im;
            x[(m + j, m + k)] = z.re;
        }
    }
    GaussianChannel {
        x,
        y: DMatrix::zeros(2 * m, 2 * m),
        d: DVector::zeros(2 * m),
    }
}

/// Uniform loss with transmissivity `eta` on every mode.
pub fn lossy_channel(eta: f64, m: usize) -> Result<GaussianChannel> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Parameter(format!("transmissivity must lie in [0, 1], got {eta}")));
    }
    if m == 0 {
        return Err(Error::Parameter("need at least one mode".into()));
    }
    Ok(GaussianChannel {
        x: DMatrix::identity(2 * m, 2 * m) * eta.sqrt(),
        y: DMatrix::identity(2 * m, 2 * m) * ((1.0 - eta) / 2.0),
        d: DVector::zeros(2 * m),
    })
}

pub fn apply_channel(state: &GaussianState, channel: &GaussianChannel) -> Result<GaussianState> {
    if state.modes() != channel.modes() {
        return Err(Error::Dimension(format!(
            "state on {} modes, channel on {}",
            state.modes(),
            channel.modes()
        )));
    }
    let mean = &channel.x * state.mean() + &channel.d;
    let cov = &channel.x * state.covariance() * channel.x.transpose() + &channel.y;
    // Symmetrise away rounding so validation tests physics, not arithmetic.
    let cov = (&cov + cov.transpose()) * 0.5;
    GaussianState::new(mean, cov).map_err(|e| Error::Internal(format!("channel produced an invalid state: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{coherent_state, vacuum_state};
    use crate::linalg::haar_unitary;
    use crate::rng::RngStream;

    #[test]
    fn passive_is_symplectic_orthogonal() {
        let mut rng = RngStream::new(3, 0);
        for m in 1..6 {
            let u = haar_unitary(m, &mut rng).unwrap();
            let ch = passive_network_channel(&u);
            let omega = symplectic_form(m);
            assert!((ch.x() * &omega * ch.x().transpose() - &omega).amax() < 1e-10);
            assert!((ch.x().transpose() * ch.x() - DMatrix::identity(2 * m, 2 * m)).amax() < 1e-10);
            assert!(ch.cp_margin() > -1e-9);
        }
        assert_eq!(passive_network_channel(&UnitaryMatrix::identity(3)), GaussianChannel::identity(3));
    }

    #[test]
    fn beamsplitter_on_coherent_amplitudes() {
        let ch = passive_network_channel(&UnitaryMatrix::beamsplitter());
        let out = apply_channel(&coherent_state(&[(1.0, 0.0), (1.0, 0.0)]).unwrap(), &ch).unwrap();
        let expected = [2f64.sqrt(), 0.0, 0.0, 0.0];
        for (a, b) in out.mean().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((out.covariance() - DMatrix::identity(4, 4) * 0.5).amax() < 1e-14);
    }

    #[test]
    fn loss_limits() {
        let c = coherent_state(&[(1.0, 0.0)]).unwrap();
        let same = apply_channel(&c, &lossy_channel(1.0, 1).unwrap()).unwrap();
        assert_eq!(same, c);
        let gone = apply_channel(&c, &lossy_channel(0.0, 1).unwrap()).unwrap();
        assert!((gone.mean().amax()) < 1e-15);
        assert!((gone.covariance() - vacuum_state(1).unwrap().covariance()).amax() < 1e-15);
        let half = apply_channel(&c, &lossy_channel(0.5, 1).unwrap()).unwrap();
        assert!((half.mean()[0] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(lossy_channel(1.5, 1).is_err());
    }

    #[test]
    fn composition() {
        let mut rng = RngStream::new(4, 0);
        let u = haar_unitary(2, &mut rng).unwrap();
        let t1 = lossy_channel(0.7, 2).unwrap();
        let t2 = passive_network_channel(&u);
        let s = coherent_state(&[(0.4, -1.0), (2.0, 0.3)]).unwrap();
        let stepwise = apply_channel(&apply_channel(&s, &t1).unwrap(), &t2).unwrap();
        let joint = apply_channel(&s, &t1.then(&t2).unwrap()).unwrap();
        assert!((stepwise.mean() - joint.mean()).amax() < 1e-13);
        assert!((stepwise.covariance() - joint.covariance()).amax() < 1e-13);
    }

    #[test]
    fn amplification_without_noise_is_not_cp() {
        let x = DMatrix::identity(2, 2) * 2.0;
        let err = GaussianChannel::new(x, DMatrix::zeros(2, 2), DVector::zeros(2)).unwrap_err();
        assert!(matches!(err, Error::Channel(_)));
    }
}
