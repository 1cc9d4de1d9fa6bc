use std::sync::Arc;

use num_complex::Complex64;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{OutcomeSequence, SampleSpace};
use crate::combinatorics::factorial;
use crate::error::{Error, Result};
use crate::linalg::{permanent, ComplexMatrix, UnitaryMatrix, RYSER_LIMIT};
use crate::rng::RngStream;

/// Collision-free mass at or below which post-selection refuses to renormalise.
pub const ZERO_MASS_THRESHOLD: f64 = 1e-12;
const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Probability vector aligned with an enumerated [`SampleSpace`].
#[derive(Clone, Debug)]
pub struct DiscreteDistribution {
    space: Arc<SampleSpace>,
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(space: Arc<SampleSpace>, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != space.len() {
            return Err(Error::Dimension(format!(
                "{} probabilities for a space of {} elements",
                probs.len(),
                space.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(Error::Parameter(format!("invalid probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Internal(format!("probabilities sum to {total}, not 1")));
        }
        Ok(DiscreteDistribution { space, probs })
    }

    /// Normalises non-negative weights.
    pub fn from_weights(space: Arc<SampleSpace>, mut weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Parameter("weights have no mass".into()));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Self::new(space, weights)
    }

    pub fn point_mass(space: Arc<SampleSpace>, index: usize) -> Result<Self> {
        if index >= space.len() {
            return Err(Error::Label { label: index, size: space.len() });
        }
        let mut probs = vec![0.0; space.len()];
        probs[index] = 1.0;
        Self::new(space, probs)
    }

    pub fn space(&self) -> &Arc<SampleSpace> {
        &self.space
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn prob(&self, s: &OutcomeSequence) -> Option<f64> {
        self.space.index_of(s).map(|i| self.probs[i])
    }

    /// Index and value of the largest probability (first on ties).
    pub fn argmax(&self) -> (usize, f64) {
        self.probs
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 { (i, p) } else { best })
    }

    /// `ε = max p` and the min-entropy `−log₂ ε` in bits.
    pub fn flatness(&self) -> (f64, f64) {
        let eps = self.argmax().1;
        (eps, -eps.log2())
    }

    /// Builds an alias table for repeated sampling.
    pub fn sampler(&self) -> Result<AliasSampler> {
        let table = WeightedAliasIndex::new(self.probs.clone())
            .map_err(|e| Error::Parameter(format!("cannot build alias table: {e}")))?;
        Ok(AliasSampler { table })
    }

    pub fn to_file(&self) -> DistributionFile {
        DistributionFile {
            m: self.space.m(),
            n: self.space.n(),
            restricted: self.space.restricted(),
            probs: self.probs.clone(),
        }
    }

    /// `index,occupation,probability` rows; occupations space-separated.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,occupation,probability\n");
        for (i, p) in self.probs.iter().enumerate() {
            let occ: Vec<String> = self.space.element(i).occupations().iter().map(u32::to_string).collect();
            out.push_str(&format!("{i},{},{p:e}\n", occ.join(" ")));
        }
        out
    }
}

/// Distribution export: `{"m":, "n":, "restricted":, "probs": [...]}` aligned
/// with the enumeration order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DistributionFile {
    pub m: usize,
    pub n: usize,
    pub restricted: bool,
    pub probs: Vec<f64>,
}

impl DistributionFile {
    pub fn into_distribution(self) -> Result<DiscreteDistribution> {
        let space = SampleSpace::enumerate(self.m, self.n, self.restricted)?;
        DiscreteDistribution::new(Arc::new(space), self.probs)
    }
}

/// O(1)-per-draw sampler over space indices.
#[derive(Clone, Debug)]
pub struct AliasSampler {
    table: WeightedAliasIndex<f64>,
}

impl AliasSampler {
    pub fn draw(&self, rng: &mut RngStream) -> usize {
        self.table.sample(rng)
    }

    pub fn draw_many(&self, l: usize, rng: &mut RngStream) -> Vec<usize> {
        (0..l).map(|_| self.draw(rng)).collect()
    }
}

/// `l` i.i.d. draws, as space indices.
pub fn draw_indices(dist: &DiscreteDistribution, l: usize, rng: &mut RngStream) -> Result<Vec<usize>> {
    Ok(dist.sampler()?.draw_many(l, rng))
}

/// `l` i.i.d. draws from `dist`.
pub fn draw_samples(dist: &DiscreteDistribution, l: usize, rng: &mut RngStream) -> Result<Vec<OutcomeSequence>> {
    Ok(draw_indices(dist, l, rng)?
        .into_iter()
        .map(|i| dist.space().element(i))
        .collect())
}

pub fn uniform_distribution(space: Arc<SampleSpace>) -> Result<DiscreteDistribution> {
    if space.is_empty() {
        return Err(Error::EmptySpace);
    }
    let p = 1.0 / space.len() as f64;
    let probs = vec![p; space.len()];
    DiscreteDistribution::new(space, probs)
}

fn check_pair(u: &UnitaryMatrix, n: usize) -> Result<()> {
    if n == 0 || n > u.dim() {
        return Err(Error::Dimension(format!("need 1 <= n <= m, got n={n}, m={}", u.dim())));
    }
    Ok(())
}

/// `U_S`: the first `n` columns of `U` with row `j` repeated `sⱼ` times, rows
/// in increasing `j`.
pub fn build_submatrix(u: &UnitaryMatrix, s: &OutcomeSequence) -> Result<ComplexMatrix> {
    if s.modes() != u.dim() {
        return Err(Error::Dimension(format!(
            "sequence has {} modes, unitary is {}x{}",
            s.modes(),
            u.dim(),
            u.dim()
        )));
    }
    let n = s.photons();
    check_pair(u, n)?;
    u.leading_columns(n)?.select_rows(&s.mode_list())
}

/// `Pr[S] = |Perm(U_S)|² / Π sⱼ!`.
pub fn outcome_probability(u: &UnitaryMatrix, s: &OutcomeSequence) -> Result<f64> {
    let sub = build_submatrix(u, s)?;
    if sub.rows() > RYSER_LIMIT {
        return Err(Error::SizeGuard { size: sub.rows(), limit: RYSER_LIMIT });
    }
    Ok(permanent(&sub)?.norm_sqr() / s.factorial_product())
}

fn factorial_product_of_sorted(modes: &[u16]) -> f64 {
    let mut prod = 1.0;
    let mut run = 1u32;
    for w in modes.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            prod *= factorial(run);
            run = 1;
        }
    }
    prod * factorial(run)
}

/// Unnormalised output probabilities of every element of `space`, computed
/// from the `m×n` matrix of the leading unitary columns. Evaluated in
/// parallel; the result order follows the enumeration.
pub fn probabilities_over(space: &SampleSpace, columns: &ComplexMatrix) -> Result<Vec<f64>> {
    let (m, n) = (space.m(), space.n());
    if columns.rows() != m || columns.cols() != n {
        return Err(Error::Dimension(format!(
            "need {m}x{n} columns, got {}x{}",
            columns.rows(),
            columns.cols()
        )));
    }
    if n > RYSER_LIMIT {
        return Err(Error::SizeGuard { size: n, limit: RYSER_LIMIT });
    }
    let zero = Complex64::new(0.0, 0.0);
    Ok((0..space.len())
        .into_par_iter()
        .map_init(
            || vec![zero; n * n],
            |buf, i| {
                let modes = space.modes_of(i);
                for (r, &mode) in modes.iter().enumerate() {
                    buf[r * n..(r + 1) * n].copy_from_slice(columns.row(usize::from(mode)));
                }
                let perm = match n {
                    1 => buf[0],
                    2 => buf[0] * buf[3] + buf[1] * buf[2],
                    _ => crate::linalg::permanent::ryser(buf, n),
                };
                perm.norm_sqr() / factorial_product_of_sorted(modes)
            },
        )
        .collect())
}

/// `D_U` over the whole of `Φ_{m,n}`.
pub fn full_distribution(u: &UnitaryMatrix, n: usize) -> Result<DiscreteDistribution> {
    full_distribution_with_cap(u, n, super::DEFAULT_ENUMERATION_CAP)
}

pub fn full_distribution_with_cap(u: &UnitaryMatrix, n: usize, cap: usize) -> Result<DiscreteDistribution> {
    check_pair(u, n)?;
    let space = Arc::new(SampleSpace::enumerate_with_cap(u.dim(), n, false, cap)?);
    let probs = probabilities_over(&space, &u.leading_columns(n)?)?;
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::Internal(format!(
            "output probabilities sum to {total}; the unitary or the permanent is wrong"
        )));
    }
    DiscreteDistribution::new(space, probs)
}

fn collision_free_masses(u: &UnitaryMatrix, n: usize) -> Result<(Arc<SampleSpace>, Vec<f64>)> {
    check_pair(u, n)?;
    let space = Arc::new(SampleSpace::enumerate(u.dim(), n, true)?);
    let probs = probabilities_over(&space, &u.leading_columns(n)?)?;
    Ok((space, probs))
}

/// `D*_U`: `D_U` restricted to `Φ*_{m,n}` and renormalised.
pub fn postselected_distribution(u: &UnitaryMatrix, n: usize) -> Result<DiscreteDistribution> {
    let (space, probs) = collision_free_masses(u, n)?;
    let mass: f64 = probs.iter().sum();
    if mass <= ZERO_MASS_THRESHOLD {
        return Err(Error::ZeroMass { mass, threshold: ZERO_MASS_THRESHOLD });
    }
    DiscreteDistribution::from_weights(space, probs)
}

/// Total `D_U` mass on collision-free outcomes.
pub fn collision_free_fraction(u: &UnitaryMatrix, n: usize) -> Result<f64> {
    let (_, probs) = collision_free_masses(u, n)?;
    Ok(probs.iter().sum::<f64>().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_unitary, permanent_naive};

    fn hom() -> UnitaryMatrix {
        UnitaryMatrix::beamsplitter()
    }

    fn seq(v: &[u32]) -> OutcomeSequence {
        OutcomeSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn submatrix_examples() {
        let u = hom();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sub = build_submatrix(&u, &seq(&[2, 0])).unwrap();
        for z in sub.entries() {
            assert!((z.re - h).abs() < 1e-15 && z.im == 0.0);
        }
        let mut rng = RngStream::new(1, 0);
        let u = haar_unitary(5, &mut rng).unwrap();
        let s = OutcomeSequence::first_n(5, 3).unwrap();
        let sub = build_submatrix(&u, &s).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(sub[(i, j)], u[(i, j)]);
            }
        }
        assert_eq!(build_submatrix(&u, &seq(&[0, 2, 0, 1, 1])).unwrap().rows(), 4);
        assert!(build_submatrix(&u, &seq(&[1, 1])).is_err());
    }

    #[test]
    fn hong_ou_mandel() {
        let u = hom();
        assert!(outcome_probability(&u, &seq(&[1, 1])).unwrap() < 1e-30);
        assert!((outcome_probability(&u, &seq(&[2, 0])).unwrap() - 0.5).abs() < 1e-15);
        assert!((outcome_probability(&u, &seq(&[0, 2])).unwrap() - 0.5).abs() < 1e-15);
        // Oracle: naive permanent by hand route.
        let sub = build_submatrix(&u, &seq(&[2, 0])).unwrap();
        assert!((permanent_naive(&sub).unwrap().norm_sqr() / 2.0 - 0.5).abs() < 1e-15);

        let d = full_distribution(&u, 2).unwrap();
        // Enumeration order: (2,0), (1,1), (0,2).
        assert_eq!(d.space().element(1).occupations(), &[1, 1]);
        assert!(d.probs()[1] < 1e-30);
        assert!((d.probs()[0] - 0.5).abs() < 1e-15 && (d.probs()[2] - 0.5).abs() < 1e-15);
        assert!(matches!(postselected_distribution(&u, 2), Err(Error::ZeroMass { .. })));
        assert!(collision_free_fraction(&u, 2).unwrap() < 1e-30);
    }

    #[test]
    fn single_photon_is_first_column() {
        let mut rng = RngStream::new(2, 0);
        let u = haar_unitary(6, &mut rng).unwrap();
        let d = full_distribution(&u, 1).unwrap();
        for j in 0..6 {
            let mut occ = vec![0; 6];
            occ[j] = 1;
            let p = d.prob(&seq(&occ)).unwrap();
            assert!((p - u[(j, 0)].norm_sqr()).abs() < 1e-15);
        }
        let post = postselected_distribution(&u, 1).unwrap();
        for (a, b) in post.probs().iter().zip(d.probs()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((collision_free_fraction(&u, 1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_gives_point_mass() {
        let d = full_distribution(&UnitaryMatrix::identity(3), 1).unwrap();
        assert_eq!(d.probs(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn normalisation_and_flatness() {
        let mut rng = RngStream::new(3, 0);
        let u = haar_unitary(6, &mut rng).unwrap();
        let d = full_distribution(&u, 2).unwrap();
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let u = haar_unitary(20, &mut rng).unwrap();
        let p = postselected_distribution(&u, 3).unwrap();
        assert!((p.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(p.flatness().0 <= 1.0);
    }

    #[test]
    fn postselected_is_proportional_to_squared_permanent() {
        let mut rng = RngStream::new(4, 0);
        let u = haar_unitary(5, &mut rng).unwrap();
        let p = postselected_distribution(&u, 2).unwrap();
        let raw: Vec<f64> = p
            .space()
            .iter()
            .map(|s| permanent_naive(&build_submatrix(&u, &s).unwrap()).unwrap().norm_sqr())
            .collect();
        let total: f64 = raw.iter().sum();
        for (a, b) in p.probs().iter().zip(&raw) {
            assert!((a - b / total).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform() {
        let space = Arc::new(SampleSpace::enumerate(4, 2, true).unwrap());
        let d = uniform_distribution(space).unwrap();
        assert_eq!(d.len(), 6);
        assert!(d.probs().iter().all(|&p| (p - 1.0 / 6.0).abs() < 1e-15));
        let (eps, h) = d.flatness();
        assert!((eps - 1.0 / 6.0).abs() < 1e-15);
        assert!((h - 6f64.log2()).abs() < 1e-12);
        let empty = Arc::new(SampleSpace::enumerate(2, 3, true).unwrap());
        assert!(matches!(uniform_distribution(empty), Err(Error::EmptySpace)));
    }

    #[test]
    fn sampling_is_reproducible() {
        let space = Arc::new(SampleSpace::enumerate(3, 2, false).unwrap());
        let point = DiscreteDistribution::point_mass(space.clone(), 4).unwrap();
        let xs = draw_samples(&point, 50, &mut RngStream::new(5, 0)).unwrap();
        assert!(xs.iter().all(|s| *s == space.element(4)));
        let d = uniform_distribution(space).unwrap();
        let a = draw_samples(&d, 100, &mut RngStream::new(5, 1)).unwrap();
        let b = draw_samples(&d, 100, &mut RngStream::new(5, 1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hom_frequencies() {
        let d = full_distribution(&hom(), 2).unwrap();
        let l = 1_000_000;
        let xs = draw_indices(&d, l, &mut RngStream::new(6, 0)).unwrap();
        let mut counts = [0usize; 3];
        xs.iter().for_each(|&i| counts[i] += 1);
        assert_eq!(counts[1], 0);
        let se = (0.25 / l as f64).sqrt();
        assert!((counts[0] as f64 / l as f64 - 0.5).abs() <= 3.0 * se);
    }

    #[test]
    fn export_formats() {
        let d = full_distribution(&hom(), 2).unwrap();
        let file = d.to_file();
        assert_eq!((file.m, file.n, file.restricted), (2, 2, false));
        let json = serde_json::to_string(&file).unwrap();
        let back: DistributionFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.clone().into_distribution().unwrap().probs(), d.probs());
        let csv = d.to_csv();
        assert!(csv.starts_with("index,occupation,probability\n0,2 0,"));
    }
}
