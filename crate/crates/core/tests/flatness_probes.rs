use bosonbench::boson::OutcomeSequence;
use bosonbench::flatness::{
    complex_max_entry_exceedance, empirical_flatness, gaussian_concentration_bound, max_entry_exceedance_mc,
    multiplicative_bound_probe, permanent_moment_mc, theorem_bound_evaluator, BoundVariant, FSpec, FlatnessOptions,
};
use bosonbench::rng::RngStream;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// Reference values from a 50-digit evaluation of the same formulas.
#[test]
fn bound_evaluator_matches_high_precision_reference() {
    let eps = (-6.0f64).exp();
    let chain = theorem_bound_evaluator(3, 243, eps, BoundVariant::Thm5Chain).unwrap();
    assert!(rel(chain.raw, 814_402.042_860_871_4) <= 1e-6, "{}", chain.raw);
    assert!(chain.vacuous && chain.value == 1.0);
    let markov = theorem_bound_evaluator(3, 243, eps, BoundVariant::Thm6Markov).unwrap();
    assert!(rel(markov.raw, 17.638_008_243_594_19) <= 1e-6, "{}", markov.raw);
    assert!(markov.vacuous);

    let cases = [
        (2, 1000, -4.0, 2.202_656_989_637_288e-8, 0.286_458_138_722_762),
        (4, 4000, -8.0, 9.401_160_176_556_838e-10, 1.067_933_495_558_723e-3),
        (3, 5000, -6.0, 3.219_455_634_222_768e-33, 2.001_130_995_477_364e-3),
    ];
    for (n, m, ln_eps, c, k) in cases {
        let e = f64::exp(ln_eps);
        let a = theorem_bound_evaluator(n, m, e, BoundVariant::Thm5Chain).unwrap();
        let b = theorem_bound_evaluator(n, m, e, BoundVariant::Thm6Markov).unwrap();
        assert!(rel(a.value, c) <= 1e-6 && !a.vacuous, "chain n={n} m={m}: {}", a.value);
        assert!(rel(b.value, k) <= 1e-6 && !b.vacuous, "markov n={n} m={m}: {}", b.value);
        assert!(a.excludes_haar_factor && !b.excludes_haar_factor);
    }
}

#[test]
fn max_entry_exceedance_follows_the_complex_gaussian_tail() {
    // Each complex entry has |x|² ~ σ²·χ²₂, so the exceedance is
    // 1 − (1 − e^{−ξ²/2σ²})^{n²}. The erfc form is the tail of a single real
    // component and sits below it.
    let (n, sigma, xi) = (4, 1.0 / 50f64.sqrt(), 0.5);
    let est = max_entry_exceedance_mc(n, sigma, xi, 100_000, &RngStream::new(21, 0)).unwrap();
    let exact = complex_max_entry_exceedance(n, sigma, xi).unwrap();
    let se = (exact * (1.0 - exact) / 1e5).sqrt();
    assert!((est.frequency - exact).abs() <= 4.0 * se, "{} vs {exact}", est.frequency);
    let erfc_form = gaussian_concentration_bound(n, sigma, xi).unwrap();
    assert!(erfc_form < exact);
}

#[test]
fn moment_examples() {
    let e = permanent_moment_mc(3, 20, 2, 100_000, &RngStream::new(22, 0)).unwrap();
    assert!((e.target - 0.006).abs() < 1e-15);
    assert!(e.z_score().abs() <= 3.0, "z = {}", e.z_score());
    let one = permanent_moment_mc(1, 20, 4, 10_000, &RngStream::new(22, 1)).unwrap();
    assert!((one.target - 8.0 / 400.0).abs() < 1e-15);
    assert!(one.std_error > 0.0);
}

#[test]
fn multiplicative_probe_examples() {
    let rng = RngStream::new(23, 0);
    let s = OutcomeSequence::first_n(100, 2).unwrap();
    let one = multiplicative_bound_probe(100, &s, FSpec::One, 1000, None, &rng).unwrap();
    assert_eq!((one.haar.mean, one.gaussian.mean), (1.0, 1.0));
    // Haar entries carry half the variance of the default Gaussian model.
    assert!((one.haar.entry_second_moment * 100.0 - 1.0).abs() < 0.05);
    assert!((one.gaussian.entry_second_moment * 100.0 - 2.0).abs() < 0.1);
    assert!((one.entry_variance_ratio - 0.5).abs() < 0.05);

    let m = 200;
    let s = OutcomeSequence::first_n(m, 2).unwrap();
    let xi = 3.0 / (m as f64).sqrt();
    let r = multiplicative_bound_probe(m, &s, FSpec::MaxEntryAtLeast { xi }, 100_000, None, &rng).unwrap();
    assert!(r.haar.mean <= 1.5 * r.gaussian.mean, "{} vs {}", r.haar.mean, r.gaussian.mean);
    assert!(FSpec::parse("median").is_err());
}

#[test]
fn flatness_report_fields() {
    let r = empirical_flatness(10, 1, 50, false, &FlatnessOptions::default(), &RngStream::new(24, 0)).unwrap();
    assert_eq!(r.trials(), 50);
    assert!((0.0..=1.0).contains(&r.exceedance_fraction));
    for t in &r.per_trial {
        assert!(t.max_prob > 0.0 && t.max_prob <= 1.0);
        // The largest of ten Dirichlet weights is at least the mean.
        assert!(t.max_prob >= 0.1 - 1e-12);
    }
    let mean_max = r.per_trial.iter().map(|t| t.max_prob).sum::<f64>() / 50.0;
    assert!(mean_max > 0.15 && mean_max < 0.5, "{mean_max}");
}
