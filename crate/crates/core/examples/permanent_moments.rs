//! Second and fourth moments of Gaussian permanents against their closed forms.

use bosonbench::flatness::permanent_moment_mc;
use bosonbench::rng::RngStream;

fn main() -> bosonbench::Result<()> {
    let m = 20;
    for n in 1..=4 {
        for order in [2, 4] {
            let e = permanent_moment_mc(n, m, order, 100_000, &RngStream::new(n as u64, u64::from(order)))?;
            println!(
                "n={n} order={order}: mean {:.4e} +- {:.1e}, median-of-means {:.4e}, target {:.4e}, z {:+.2}",
                e.mean,
                e.std_error,
                e.median_of_means,
                e.target,
                e.z_score()
            );
        }
    }
    Ok(())
}
