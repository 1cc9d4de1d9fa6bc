//! Largest output probability of Haar-random interferometers and the two
//! analytic bounds on exceeding a threshold.
//!
//! cargo run --release --example flatness -- 32 4 10

use bosonbench::flatness::{empirical_flatness, theorem_bound_evaluator, BoundVariant, FlatnessOptions};
use bosonbench::rng::RngStream;

fn main() -> bosonbench::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let m = args.first().copied().unwrap_or(32) as usize;
    let n = args.get(1).copied().unwrap_or(4) as usize;
    let trials = args.get(2).copied().unwrap_or(10);

    let report = empirical_flatness(m, n, trials, true, &FlatnessOptions::default(), &RngStream::new(5, 0))?;
    println!("|Phi*| = {}, threshold e^-2n = {:.3e}", report.space_size, report.threshold);
    for t in &report.per_trial {
        println!("trial {:>2}: max {:.3e} at {}", t.trial, t.max_prob, t.argmax);
    }
    println!("exceedance fraction {:.2}", report.exceedance_fraction);
    for v in [BoundVariant::Thm5Chain, BoundVariant::Thm6Markov] {
        let b = theorem_bound_evaluator(n, m, report.threshold, v)?;
        println!("{v:?}: value {:.3e}, raw {:.3e}, vacuous {}", b.value, b.raw, b.vacuous);
    }
    Ok(())
}
