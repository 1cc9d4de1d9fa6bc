use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::json;

use super::config::{Experiment, ExperimentConfig};
use super::extended::to_value as ext;
use super::record::ExperimentRecord;
use crate::boson::{
    full_distribution, postselected_distribution, uniform_distribution, DiscreteDistribution, SampleSpace,
    DEFAULT_ENUMERATION_CAP,
};
use crate::certify::{
    birthday_bound_valid, birthday_lower_bound, evaluate_likelihood_ratio, fingerprint,
    fingerprint_triviality_bound_at, is_trivial_fingerprint, min_samples_negative, one_norm_distance,
    refined_discrimination_error_bound, relative_entropy, renyi_relative_entropy, symmetric_certifier,
    discrimination_error_bound, CertifierDecision, CollisionPolicy, Hypothesis, LikelihoodRatioTest,
};
use crate::error::{Error, Result};
use crate::flatness::{
    complex_max_entry_exceedance, empirical_flatness, gaussian_concentration_bound, max_entry_exceedance_mc,
    permanent_moment_mc, theorem_bound_evaluator, BoundVariant, FlatnessOptions,
};
use crate::gaussian::{
    classical_sample, coherent_state, lossy_channel, passive_network_channel, BucketDetector, CircuitFile,
    GaussianChannel, PatternCounts,
};
use crate::linalg::{haar_unitary, ComplexMatrix, UnitaryMatrix};
use crate::rng::RngStream;

/// Trials per parallel chunk; the time budget is checked between chunks.
const CHUNK: u64 = 256;

struct Ctx {
    start: Instant,
    deadline: Option<Duration>,
    base: RngStream,
}

impl Ctx {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| self.start.elapsed() >= d)
    }

    /// Runs `f(t)` for `t < trials` in parallel chunks, stopping early once the
    /// budget is spent. Returns the completed prefix and whether it is whole.
    fn trials<T: Send>(&self, trials: u64, f: impl Fn(u64) -> Result<T> + Sync) -> Result<(Vec<T>, bool)> {
        let mut out = Vec::with_capacity(trials as usize);
        let mut next = 0;
        while next < trials {
            if self.expired() {
                return Ok((out, false));
            }
            let end = (next + CHUNK).min(trials);
            let chunk = (next..end).into_par_iter().map(&f).collect::<Result<Vec<T>>>()?;
            out.extend(chunk);
            next = end;
        }
        Ok((out, true))
    }
}

/// Builds the rayon pool, honouring `BOSONBENCH_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("BOSONBENCH_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Parameter(format!("BOSONBENCH_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(Error::Parameter("BOSONBENCH_THREADS must be positive".into()));
        }
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Error::Internal(e.to_string()))
}

/// [`run`] inside the harness thread pool.
pub fn run_in_pool(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    thread_pool()?.install(|| run(config))
}

/// Runs the configured experiment and returns its record. Writing the record
/// is left to the caller.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    config.validate()?;
    let ctx = Ctx {
        start: Instant::now(),
        deadline: config.budget_seconds.map(Duration::from_secs_f64),
        base: RngStream::new(config.seed, 0),
    };
    let mut config = config.clone();
    let mut rec = match config.experiment {
        Experiment::Hom => hom(&mut config)?,
        Experiment::Distribution => distribution(&mut config, &ctx)?,
        Experiment::Flatness => flatness(&mut config, &ctx)?,
        Experiment::Moments => moments(&mut config, &ctx)?,
        Experiment::Fingerprint => fingerprint_experiment(&mut config, &ctx)?,
        Experiment::Birthday => birthday(&mut config, &ctx)?,
        Experiment::Discriminate => discriminate(&mut config, &ctx)?,
        Experiment::Indistinguishability => indistinguishability(&mut config, &ctx)?,
        Experiment::GaussianSim => gaussian_sim(&mut config, &ctx)?,
        Experiment::Bounds => bounds(&mut config, &ctx)?,
    };
    rec.wall_clock_seconds = ctx.start.elapsed().as_secs_f64();
    Ok(rec)
}

/// The desk-scale indistinguishability probe: collision certifier versus
/// likelihood-ratio test on post-selected Boson-Sampling samples and uniform
/// samples over the collision-free space.
pub fn indistinguishability_experiment(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let mut config = config.clone();
    config.experiment = Experiment::Indistinguishability;
    run(&config)
}

fn resolve<T: Copy>(slot: &mut Option<T>, default: T) -> T {
    *slot.get_or_insert(default)
}

fn bernoulli_se(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials.max(1) as f64).sqrt()
}

fn load_or_draw_unitary(config: &ExperimentConfig, m: usize, ctx: &Ctx) -> Result<UnitaryMatrix> {
    match &config.unitary {
        Some(path) => {
            let u = UnitaryMatrix::new(ComplexMatrix::from_json(&std::fs::read_to_string(path)?)?)?;
            if u.dim() != m {
                return Err(Error::Dimension(format!("unitary file is {0}x{0}, modes = {m}", u.dim())));
            }
            Ok(u)
        }
        None => haar_unitary(m, &mut ctx.base.split(0)),
    }
}

fn source_distribution(u: &UnitaryMatrix, n: usize, restricted: bool, cap: usize) -> Result<DiscreteDistribution> {
    let size = SampleSpace::size_of(u.dim(), n, restricted);
    if size > cap as u128 {
        return Err(Error::TooLarge { size, cap });
    }
    if restricted {
        postselected_distribution(u, n)
    } else {
        full_distribution(u, n)
    }
}

fn hom(config: &mut ExperimentConfig) -> Result<ExperimentRecord> {
    config.modes = Some(2);
    config.photons = Some(2);
    let dist = full_distribution(&UnitaryMatrix::beamsplitter(), 2)?;
    let mut rec = ExperimentRecord::new(config.clone());
    let mut probs = serde_json::Map::new();
    for (i, s) in dist.space().iter().enumerate() {
        probs.insert(s.to_string(), json!(dist.probs()[i]));
        rec.push_trial(json!({"index": i, "occupation": s, "probability": dist.probs()[i]}))?;
    }
    rec.set("probabilities", probs)?;
    Ok(rec)
}

fn distribution(config: &mut ExperimentConfig, ctx: &Ctx) -> Result<ExperimentRecord> {
    let m = resolve(&mut config.modes, 5);
    let n = resolve(&mut config.photons, 2);
    let restricted = resolve(&mut config.restricted, false);
    let cap = resolve(&mut config.cap, DEFAULT_ENUMERATION_CAP);
    let u = load_or_draw_unitary(config, m, ctx)?;
    let dist = source_distribution(&u, n, restricted, cap)?;
    let mut rec = ExperimentRecord::new(config.clone());
    for (i, s) in dist.space().iter().enumerate() {
        rec.push_trial(json!({"index": i, "occupation": s, "probability": dist.probs()[i]}))?;
    }
    let (eps, h) = dist.flatness();
    let (arg, _) = dist.argmax();
    rec.set("space_size", dist.len())?;
    rec.set("max_probability", eps)?;
    rec.set("argmax", dist.space().element(arg))?;
    rec.set("min_entropy_bits", h)?;
    rec.set("total_mass", dist.probs().iter().sum::<f64>())?;
    if !restricted && n <= m {
        rec.set("collision_free_mass", crate::boson::collision_free_fraction(&u, n)?)?;
    }
    rec.set("unitary", u.matrix().to_file())?;
    Ok(rec)
}

fn flatness(config: &mut ExperimentConfig, ctx: &Ctx) -> Result<ExperimentRecord> {
    let m = resolve(&mut config.modes, 8);
    let n = resolve(&mut config.photons, 3);
    let trials = resolve(&mut config.trials, 20);
    let restricted = resolve(&mut config.restricted, false);
    let cap = resolve(&mut config.cap, DEFAULT_ENUMERATION_CAP);
    let options = FlatnessOptions {
        threshold: config.threshold,
        budget: ctx.deadline,
        cap,
    };
    let report = empirical_flatness(m, n, trials, restricted, &options, &ctx.base.split(0))?;
    let mut rec = ExperimentRecord::new(config.clone());
    for t in &report.per_trial {
        rec.push_trial(t)?;
    }
    rec.complete = report.complete;
    rec.set("space_size", report.space_size)?;
    rec.set("trials_completed", report.trials())?;
    rec.set("threshold", report.threshold)?;
    rec.set("exceedance_fraction", report.exceedance_fraction)?;
    rec.set("alt_threshold", report.alt_threshold)?;
    rec.set("alt_exceedance_fraction", report.alt_exceedance_fraction)?;
    let maxes: Vec<f64> = report.per_trial.iter().map(|t| t.max_prob).collect();
    rec.set("largest_max_probability", maxes.iter().copied().fold(0.0, f64::max))?;
    rec.set("mean_probability", 1.0 / report.space_size as f64)?;
    for (key, v) in [("thm5-chain", BoundVariant::Thm5Chain), ("thm6-markov", BoundVariant::Thm6Markov)] {
        rec.bound(key, theorem_bound_evaluator(n, m, report.threshold, v)?)?;
    }
    Ok(rec)
}

fn moments(config: &mut ExperimentConfig, ctx: &Ctx) -> Result<ExperimentRecord> {
    let m = resolve(&mut config.modes, 20);
    let n = resolve(&mut config.photons, 3);
    let trials = resolve(&mut config.trials, 100_000);
    if n > 8 {
        return Err(Error::Config {
            message: "moments supports photons <= 8".into(),
            keys: vec!["photons".into()],
        });
    }
    let mut rec = ExperimentRecord::new(config.clone());
    for (i, order) in [2u32, 4].into_iter().enumerate() {
        let est = permanent_moment_mc(n, m, order, trials, &ctx.base.split(i as u64))?;
        let mut v = serde_json::to_value(&est)?;
        v["z_score"] = ext(est.z_score());
        v["median_of_means_z_score"] = ext(est.median_of_means_z_score());
        rec.push_trial(v)?;
    }
    Ok(rec)
}

fn fingerprint_experiment(config: &mut ExperimentConfig, ctx: &Ctx) -> Result<ExperimentRecord> {
    let m = resolve(&mut config.modes, 8);
    let n = resolve(&mut config.photons, 2);
    let l = resolve(&mut config.samples, 10);
    let trials = resolve(&mut config.trials, 1000);
    let restricted = resolve(&mut config.restricted, true);
    let cap = resolve(&mut config.cap, DEFAULT_ENUMERATION_CAP);
    let u = load_or_draw_unitary(config, m, ctx)?;
    let dist = source_distribution(&u, n, restricted, cap)?;
    let sampler = dist.sampler()?;
    let size = dist.len();
    let k = 2u64;
    let stream = ctx.base.split(1);
    let (lines, complete) = ctx.trials(trials, |t| {
        let mut rng = stream.split(t);
        let seqs: Vec<Vec<usize>> = (0..k).map(|_| sampler.draw_many(l as usize, &mut rng)).collect();
        let c = fingerprint(&seqs, size)?;
        Ok(json!({"trial": t, "trivial": is_trivial_fingerprint(&c), "nonzeros": c.to_file().nonzeros}))
    })?;
    let nontrivial = lines.iter().filter(|v| v["trivial"] == json!(false)).count();
    let done = lines.len();
    let mut rec = ExperimentRecord::new(config.clone());
    rec.complete = complete;
    rec.trials = lines;
    let eps = dist.flatness().0;
    let freq = nontrivial as f64 / done.max(1) as f64;
    rec.set("sequences", k)?;
    rec.set("space_size", size)?;
    rec.set("flatness", eps)?;
    rec.set("nontrivial_frequency", freq)?;
    rec.set("nontrivial_se", bernoulli_se(freq, done))?;
    rec.bound("nontrivial_fingerprint", fingerprint_triviality_bound_at(k, l, eps).ok())?;
    Ok(rec)
}

fn birthday(config: &mut ExperimentConfig, ctx: &Ctx) -> Result<ExperimentRecord> {
    let size = resolve(&mut config.space_size, 10_000);
    let l = resolve(&mut config.samples, 20);
    let trials = resolve(&mut config.trials, 100_000);
    let eps = 1.0 / size as f64;
    let stream = ctx.base.split(0);
    let (lines, complete) = ctx.trials(trials, |t| {
        let mut rng = stream.split(t);
        let mut seen = std::collections::HashSet::with_capacity(l as usize);
        let distinct = (0..l).all(|_| seen.insert(rng.below(size as usize)));
        Ok(json!({"trial": t, "all_distinct": distinct}))
    })?;
    let hits = lines.iter().filter(|v| v["all_distinct"] == json!(true)).count();
    let freq = hits as f64 / lines.len().max(1) as f64;
    let se = bernoulli_se(freq, lines.len());
    let mut rec = ExperimentRecord::new(config.clone());
    rec.complete = complete;
    rec.trials = lines;
    rec.set("epsilon", eps)?;
    rec.set("all_distinct_frequency", freq)?;
    rec.set("std_error", se)?;
    rec.set("bound_valid", birthday_bound_valid(l, eps))?;
    let bound = birthday_lower_bound(l, eps).ok();
    rec.bound("all_distinct_lower", bound)?;
    if let Some(b) = bound {
        rec.set("bound_holds", freq >= b - 3.0 * se)?;
    }
    Ok(rec)
}

fn divergence_summary(rec: &mut ExperimentRecord, p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<()> {
    rec.set("relative_entropy", ext(relative_entropy(p, q)?))?;
    rec.set("renyi_3_2", ext(renyi_relative_entropy(p, q, 1.5)?))?;
    rec.set("renyi_2", ext(renyi_relative_entropy(p, q, 2.0)?))?;
    rec.set("one_norm", one_norm_distance(p, q)?)?;
    Ok(())
}

fn discriminate(config: &mut ExperimentConfig, ctx: &Ctx) -> Result<ExperimentRecord> {
    let m = resolve(&mut config.modes, 8);
    let n = resolve(&mut config.photons, 2);
    let l = resolve(&mut config.samples, 20);
    let trials = resolve(&mut config.trials, 1000);
    let alpha = resolve(&mut config.alpha, 1.0 / 3.0);
    let restricted = resolve(&mut config.restricted, true);
    let cap = resolve(&mut config.cap, DEFAULT_ENUMERATION_CAP);
    let u = load_or_draw_unitary(config, m, ctx)?;
    let p = source_distribution(&u, n, restricted, cap)?;
    let q = uniform_distribution(p.space().clone())?;
    let test = LikelihoodRatioTest::new(&p, &q)?;
    let (sp, sq) = (p.sampler()?, q.sampler()?);
    let stream = ctx.base.split(1);
    let (lines, complete) = ctx.trials(trials, |t| {
        let xs = sp.draw_many(l as usize, &mut stream.split(2 * t));
        let ys = sq.draw_many(l as usize, &mut stream.split(2 * t + 1));
        Ok(json!({
            "trial": t,
            "decision_under_p": test.decide(&xs)?,
            "decision_under_q": test.decide(&ys)?,
            "statistic_under_p": ext(test.statistic(&xs)?),
            "statistic_under_q": ext(test.statistic(&ys)?),
        }))
    })?;
    let done = lines.len();
    let type_i = lines.iter().filter(|v| v["decision_under_p"] == json!(Hypothesis::Q)).count() as f64 / done.max(1) as f64;
    let type_ii = lines.iter().filter(|v| v["decision_under_q"] == json!(Hypothesis::P)).count() as f64 / done.max(1) as f64;
    let mut rec = ExperimentRecord::new(config.clone());
    rec.complete = complete;
    rec.trials = lines;
    rec.set("type_i", type_i)?;
    rec.set("type_ii", type_ii)?;
    rec.set("type_i_se", bernoulli_se(type_i, done))?;
    rec.set("type_ii_se", bernoulli_se(type_ii, done))?;
    divergence_summary(&mut rec, &p, &q)?;
    rec.bound("log_beta_over_l", ext(discrimination_error_bound(&p, &q, l, alpha)?))?;
    rec.bound("log_beta_over_l_refined", ext(refined_discrimination_error_bound(&p, &q, l, alpha)?))?;
    rec.bound("min_samples_negative", min_samples_negative(&p, &q, alpha)?)?;
    Ok(rec)
}

const LR_SEARCH_LIMIT: u64 = 500;

fn indistinguishability(config: &mut ExperimentConfig, ctx: &Ctx) -> Result<ExperimentRecord> {
    let m = resolve(&mut config.modes, 32);
    let n = resolve(&mut config.photons, 4);
    let l = resolve(&mut config.samples, 15);
    let trials = resolve(&mut config.trials, 1000);
    let alpha = resolve(&mut config.alpha, 1.0 / 3.0);
    let cap = resolve(&mut config.cap, DEFAULT_ENUMERATION_CAP);
    config.restricted = Some(true);
    let u = load_or_draw_unitary(config, m, ctx)?;
    let d = source_distribution(&u, n, true, cap)?;
    let uni = uniform_distribution(d.space().clone())?;
    let size = d.len();
    let test = LikelihoodRatioTest::new(&d, &uni)?;
    let (sd, su) = (d.sampler()?, uni.sampler()?);
    let stream = ctx.base.split(1);
    let (lines, complete) = ctx.trials(trials, |t| {
        let xs = sd.draw_many(l as usize, &mut stream.split(2 * t));
        let ys = su.draw_many(l as usize, &mut stream.split(2 * t + 1));
        Ok(json!({
            "trial": t,
            "symmetric_on_boson": symmetric_certifier(&xs, size, &CollisionPolicy)?,
            "symmetric_on_uniform": symmetric_certifier(&ys, size, &CollisionPolicy)?,
            "lr_on_boson": test.decide(&xs)?,
            "lr_on_uniform": test.decide(&ys)?,
        }))
    })?;
    let done = lines.len().max(1) as f64;
    let freq = |key: &str, v: serde_json::Value| lines.iter().filter(|x| x[key] == v).count() as f64 / done;
    let accept = json!(CertifierDecision::Accept);
    let acc_d = freq("symmetric_on_boson", accept.clone());
    let acc_u = freq("symmetric_on_uniform", accept);
    let lr_type_i = freq("lr_on_boson", json!(Hypothesis::Q));
    let lr_type_ii = freq("lr_on_uniform", json!(Hypothesis::P));
    let gap = (acc_d - acc_u).abs();
    let gap_se = (acc_d * (1.0 - acc_d) / done + acc_u * (1.0 - acc_u) / done).sqrt();

    let eps_d = d.flatness().0;
    let eps_u = 1.0 / size as f64;
    let lemma_bound = match (fingerprint_triviality_bound_at(1, l, eps_d), fingerprint_triviality_bound_at(1, l, eps_u)) {
        (Ok(a), Ok(b)) => Some(a + b),
        _ => None,
    };

    // Grow l until the likelihood-ratio test keeps both error rates at or
    // below alpha, also trying the analytic sample count when it is in range.
    let l_neg = min_samples_negative(&d, &uni, alpha)?;
    let mut candidates = vec![l];
    let mut next = l;
    while next < LR_SEARCH_LIMIT {
        next = (next * 2).min(LR_SEARCH_LIMIT);
        candidates.push(next);
    }
    if let Some(v) = l_neg.filter(|&v| v <= LR_SEARCH_LIMIT) {
        candidates.push(v);
        candidates.sort_unstable();
        candidates.dedup();
    }
    let search_stream = ctx.base.split(2);
    let mut search = Vec::new();
    let mut l_found = None;
    for &cand in &candidates {
        if ctx.expired() {
            break;
        }
        let report = evaluate_likelihood_ratio(&d, &uni, cand, alpha, trials, &search_stream.split(cand))?;
        let ok = report.type_i <= alpha && report.type_ii <= alpha;
        search.push(report);
        if ok {
            l_found = Some(cand);
            break;
        }
    }

    let mut rec = ExperimentRecord::new(config.clone());
    rec.complete = complete && (l_found.is_some() || search.len() == candidates.len());
    rec.trials = lines;
    rec.set("space_size", size)?;
    rec.set("flatness", eps_d)?;
    rec.set("symmetric_accept_boson", acc_d)?;
    rec.set("symmetric_accept_uniform", acc_u)?;
    rec.set("symmetric_gap", gap)?;
    rec.set("symmetric_gap_se", gap_se)?;
    rec.set("lr_type_i", lr_type_i)?;
    rec.set("lr_type_ii", lr_type_ii)?;
    rec.set("lr_search", &search)?;
    rec.set("lr_samples_found", l_found)?;
    divergence_summary(&mut rec, &d, &uni)?;
    rec.bound("symmetric_gap", lemma_bound)?;
    rec.bound("min_samples_negative", l_neg)?;
    if let Some(b) = lemma_bound {
        rec.set("symmetric_gap_within_bound", gap <= b + 3.0 * gap_se)?;
    }
    Ok(rec)
}

fn gaussian_sim(config: &mut ExperimentConfig, ctx: &Ctx) -> Result<ExperimentRecord> {
    let l = resolve(&mut config.samples, 100_000);
    let (input, network, detector) = match &config.circuit {
        Some(path) => {
            let circuit = CircuitFile::from_json(&std::fs::read_to_string(path)?)?;
            config.modes = Some(circuit.m);
            circuit.build()?
        }
        None => {
            // One coherent |1>_c in mode 1, vacuum elsewhere, Haar network,
            // optional uniform loss in front.
            let m = resolve(&mut config.modes, 4);
            let radius = resolve(&mut config.radius, 1.6);
            let mut amps = vec![(0.0, 0.0); m];
            amps[0] = (1.0, 0.0);
            let input = coherent_state(&amps)?;
            let u = load_or_draw_unitary(config, m, ctx)?;
            let mut network = passive_network_channel(&u);
            if let Some(eta) = config.eta {
                network = lossy_channel(eta, m)?.then(&network)?;
            }
            (input, network, BucketDetector::new(radius)?)
        }
    };
    let m = input.modes();
    let patterns = classical_sample(&input, &network, &detector, l as usize, &ctx.base.split(1))?;
    let counts = PatternCounts::from_patterns(m, &patterns);
    let mut rec = ExperimentRecord::new(config.clone());
    rec.trials = patterns
        .iter()
        .enumerate()
        .map(|(i, p)| json!({"sample": i, "pattern": crate::gaussian::pattern_string(p)}))
        .collect();
    rec.set("radius", detector.radius())?;
    rec.set("dark_count_rate", detector.dark_count_rate())?;
    rec.set("click_rates", &counts.click_rates)?;
    rec.set("counts", &counts.counts)?;
    rec.set("output_mean", network_output_mean(&input, &network)?)?;
    Ok(rec)
}

fn network_output_mean(input: &crate::gaussian::GaussianState, network: &GaussianChannel) -> Result<Vec<f64>> {
    Ok(crate::gaussian::apply_channel(input, network)?.mean().as_slice().to_vec())
}

fn bounds(config: &mut ExperimentConfig, ctx: &Ctx) -> Result<ExperimentRecord> {
    let n = resolve(&mut config.photons, 3);
    let m = resolve(&mut config.modes, 243);
    let eps = resolve(&mut config.epsilon, (-2.0 * n as f64).exp());
    let mut rec = ExperimentRecord::new(config.clone());
    for v in [BoundVariant::Thm5Chain, BoundVariant::Thm6Markov] {
        rec.push_trial(theorem_bound_evaluator(n, m, eps, v)?)?;
    }
    if let Some(xi) = config.xi {
        let sigma = config.sigma.unwrap_or(1.0 / (m as f64).sqrt());
        let trials = config.trials.unwrap_or(100_000);
        let est = max_entry_exceedance_mc(n, sigma, xi, trials, &ctx.base.split(0))?;
        rec.set("max_entry_exceedance", &est)?;
        rec.bound("concentration", gaussian_concentration_bound(n, sigma, xi)?)?;
        rec.bound("complex_exact", complex_max_entry_exceedance(n, sigma, xi)?)?;
    }
    rec.set("space_size", SampleSpace::size_of(m, n, false).to_string())?;
    Ok(rec)
}
