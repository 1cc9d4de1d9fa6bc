use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use bosonbench::gaussian::{
    apply_channel, bucket_detect, classical_sample, coherent_state, lossy_channel, passive_network_channel,
    sample_phase_point, squeezed_state, vacuum_state, BucketDetector, CircuitFile, GaussianChannel, GaussianState,
    PatternCounts, PhasePoint,
};
use bosonbench::linalg::{haar_unitary, UnitaryMatrix};
use bosonbench::rng::RngStream;

/// ∫_{|r|<R} of a 2-D Gaussian density by composite Simpson in polar coordinates.
fn disk_mass(mean: [f64; 2], cov: [[f64; 2]; 2], radius: f64) -> f64 {
    let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
    let inv = [[cov[1][1] / det, -cov[0][1] / det], [-cov[1][0] / det, cov[0][0] / det]];
    let density = |x: f64, y: f64| {
        let (dx, dy) = (x - mean[0], y - mean[1]);
        let q = dx * (inv[0][0] * dx + inv[0][1] * dy) + dy * (inv[1][0] * dx + inv[1][1] * dy);
        (-0.5 * q).exp() / (2.0 * PI * det.sqrt())
    };
    let (nr, nt) = (400, 400);
    let (hr, ht) = (radius / nr as f64, 2.0 * PI / nt as f64);
    let w = |i: usize, n: usize| if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
    let mut total = 0.0;
    for i in 0..=nr {
        let r = i as f64 * hr;
        let mut ring = 0.0;
        for j in 0..=nt {
            let t = j as f64 * ht;
            ring += w(j, nt) * density(r * t.cos(), r * t.sin());
        }
        total += w(i, nr) * r * ring * ht / 3.0;
    }
    total * hr / 3.0
}

fn click_rate(patterns: &[Vec<u8>], mode: usize) -> f64 {
    patterns.iter().filter(|p| p[mode] == 1).count() as f64 / patterns.len() as f64
}

#[test]
fn quadrature_oracle_reproduces_closed_forms() {
    let r = 1.6;
    let vac = disk_mass([0.0, 0.0], [[0.5, 0.0], [0.0, 0.5]], r);
    assert!((1.0 - vac - (-r * r).exp()).abs() < 1e-9);
}

#[test]
fn beamsplitter_output_matches_disk_integral() {
    let det = BucketDetector::new(1.6).unwrap();
    let input = coherent_state(&[(1.0, 0.0), (0.0, 0.0)]).unwrap();
    let network = passive_network_channel(&UnitaryMatrix::beamsplitter());
    let l = 400_000;
    let pats = classical_sample(&input, &network, &det, l, &RngStream::new(31, 0)).unwrap();
    let amp = 0.5f64.sqrt();
    let expected = 1.0 - disk_mass([amp, 0.0], [[0.5, 0.0], [0.0, 0.5]], 1.6);
    let se = (expected * (1.0 - expected) / l as f64).sqrt();
    for mode in 0..2 {
        let rate = click_rate(&pats, mode);
        assert!((rate - expected).abs() <= 3.0 * se, "mode {mode}: {rate} vs {expected}");
    }
}

#[test]
fn no_click_probability_matches_quadrature_on_a_grid() {
    let det = BucketDetector::new(1.3).unwrap();
    let l = 200_000;
    let mut k = 0;
    for (a, b) in [(0.0, 0.0), (0.7, -0.4), (1.5, 1.0)] {
        for s in [0.0, 0.4] {
            // Squeeze, then displace.
            let sq = squeezed_state(&[s]).unwrap();
            let shift = GaussianChannel::new(DMatrix::identity(2, 2), DMatrix::zeros(2, 2), DVector::from_vec(vec![a, b])).unwrap();
            let pats = classical_sample(&sq, &shift, &det, l, &RngStream::new(32, k)).unwrap();
            k += 1;
            let cov = [[(2.0 * s).exp() / 2.0, 0.0], [0.0, (-2.0 * s).exp() / 2.0]];
            let p0 = disk_mass([a, b], cov, 1.3);
            let freq = 1.0 - click_rate(&pats, 0);
            let se = (p0 * (1.0 - p0) / l as f64).sqrt();
            assert!((freq - p0).abs() <= 3.0 * se, "mean ({a},{b}) s={s}: {freq} vs {p0}");
        }
    }
}

#[test]
fn product_inputs_factorize() {
    let det = BucketDetector::new(1.0).unwrap();
    let input = coherent_state(&[(1.0, 0.0), (0.0, 0.8)]).unwrap();
    let l = 200_000;
    let pats = classical_sample(&input, &GaussianChannel::identity(2), &det, l, &RngStream::new(33, 0)).unwrap();
    let counts = PatternCounts::from_patterns(2, &pats);
    let (p1, p2) = (counts.click_rates[0], counts.click_rates[1]);
    for (key, expected) in [("11", p1 * p2), ("10", p1 * (1.0 - p2)), ("01", (1.0 - p1) * p2), ("00", (1.0 - p1) * (1.0 - p2))] {
        let f = counts.counts[key] as f64 / l as f64;
        assert!((f - expected).abs() <= 4.0 * (expected * (1.0 - expected) / l as f64).sqrt(), "{key}");
    }
}

#[test]
fn full_loss_gives_vacuum_statistics() {
    let det = BucketDetector::new(1.6).unwrap();
    let input = coherent_state(&[(2.0, 0.0), (0.0, -1.0), (1.0, 1.0)]).unwrap();
    let l = 300_000;
    let pats = classical_sample(&input, &lossy_channel(0.0, 3).unwrap(), &det, l, &RngStream::new(34, 0)).unwrap();
    let p = det.dark_count_rate();
    let se = (p * (1.0 - p) / l as f64).sqrt();
    for mode in 0..3 {
        assert!((click_rate(&pats, mode) - p).abs() <= 3.0 * se);
    }
}

#[test]
fn vacuum_dark_counts_are_iid_across_modes() {
    let det = BucketDetector::new(1.6).unwrap();
    let l = 1_000_000;
    let pats = classical_sample(&vacuum_state(3).unwrap(), &GaussianChannel::identity(3), &det, l, &RngStream::new(35, 0)).unwrap();
    let p = 0.0773;
    let se = (p * (1.0 - p) / l as f64).sqrt();
    for mode in 0..3 {
        assert!((click_rate(&pats, mode) - det.dark_count_rate()).abs() <= 3.0 * se);
        assert!((click_rate(&pats, mode) - p).abs() <= 3.0 * se + 1e-4);
    }
}

#[test]
fn vacuum_component_variance() {
    let v = vacuum_state(1).unwrap();
    let mut rng = RngStream::new(36, 0);
    let n = 1_000_000;
    let mut sum_sq = 0.0;
    for _ in 0..n {
        sum_sq += sample_phase_point(&v, &mut rng).unwrap().as_slice()[0].powi(2);
    }
    let var = sum_sq / n as f64;
    // Var of x² for x ~ N(0, ½) is 2·(½)².
    assert!((var - 0.5).abs() <= 3.0 * (0.5 / n as f64).sqrt());
}

#[test]
fn passive_networks_preserve_energy_and_uncertainty() {
    let mut rng = RngStream::new(37, 0);
    let input = coherent_state(&[(1.0, 0.5), (-0.3, 0.0), (0.0, 2.0), (0.2, 0.2)]).unwrap();
    for _ in 0..20 {
        let u = haar_unitary(4, &mut rng).unwrap();
        let out = apply_channel(&input, &passive_network_channel(&u)).unwrap();
        assert!((out.mean().norm_squared() - input.mean().norm_squared()).abs() < 1e-12);
        assert!((out.covariance() - DMatrix::identity(8, 8) * 0.5).amax() < 1e-12);
        let lossy = apply_channel(&out, &lossy_channel(0.3, 4).unwrap()).unwrap();
        assert!(lossy.symplectic_eigenvalues().iter().all(|&nu| nu >= 0.5 - 1e-9));
    }
}

#[test]
fn click_and_no_click_are_complementary() {
    let det = BucketDetector::new(1.2).unwrap();
    let mut rng = RngStream::new(38, 0);
    let s = GaussianState::new(DVector::from_vec(vec![0.3, -0.2, 0.1, 0.9]), DMatrix::identity(4, 4)).unwrap();
    for _ in 0..1000 {
        let r = sample_phase_point(&s, &mut rng).unwrap();
        let bits = bucket_detect(&r, &det);
        for (j, b) in bits.iter().enumerate() {
            let (x, p) = r.mode(j);
            assert_eq!(*b == 0, x.hypot(p) < 1.2);
        }
    }
    assert_eq!(bucket_detect(&PhasePoint::new(vec![0.0, 0.0]).unwrap(), &det), vec![0]);
}

#[test]
fn circuit_file_drives_the_sampler() {
    let text = r#"{"m": 1, "input": {"coherent": [[1, 0]]}, "channel": {"loss": 1.0}, "detector": {"R": 1.6}}"#;
    let (input, network, det) = CircuitFile::from_json(text).unwrap().build().unwrap();
    let l = 500_000;
    let pats = classical_sample(&input, &network, &det, l, &RngStream::new(39, 0)).unwrap();
    let rate = click_rate(&pats, 0);
    let expected = 1.0 - disk_mass([1.0, 0.0], [[0.5, 0.0], [0.0, 0.5]], 1.6);
    assert!((rate - expected).abs() <= 3.0 * (expected * (1.0 - expected) / l as f64).sqrt());
    assert!((expected - 0.2896).abs() < 5e-4);
}
