//! How often l draws from a flat source are all distinct, next to the
//! 2^{-l^2 eps} lower bound.

use std::collections::HashSet;

use bosonbench::certify::{birthday_bound_valid, birthday_lower_bound};
use bosonbench::rng::RngStream;

fn main() -> bosonbench::Result<()> {
    let size = 10_000usize;
    let eps = 1.0 / size as f64;
    let trials = 100_000u64;
    let rng = RngStream::new(3, 0);
    for l in [5u64, 20, 50, 100] {
        let hits = (0..trials)
            .filter(|&t| {
                let mut r = rng.split(t);
                let mut seen = HashSet::new();
                (0..l).all(|_| seen.insert(r.below(size)))
            })
            .count();
        let bound = birthday_lower_bound(l, eps)?;
        println!(
            "l={l:>3}: all distinct {:.4}, bound {bound:.4} (valid: {})",
            hits as f64 / trials as f64,
            birthday_bound_valid(l, eps)
        );
    }
    Ok(())
}
