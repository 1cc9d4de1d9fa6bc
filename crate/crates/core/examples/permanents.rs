//! Ryser's formula against direct expansion, and its cost as n grows.

use std::time::Instant;

use bosonbench::linalg::{permanent_naive, permanent_ryser, sample_gaussian_matrix};
use bosonbench::rng::RngStream;

fn main() -> bosonbench::Result<()> {
    let mut rng = RngStream::new(7, 0);
    for n in [4, 6, 8] {
        let a = sample_gaussian_matrix(n, 1.0, &mut rng)?;
        let (r, d) = (permanent_ryser(&a)?, permanent_naive(&a)?);
        println!("n={n}: ryser {r:.6}, naive {d:.6}, |diff| {:.1e}", (r - d).norm());
    }
    for n in [12, 16, 20, 22] {
        let a = sample_gaussian_matrix(n, 1.0, &mut rng)?;
        let start = Instant::now();
        let p = permanent_ryser(&a)?;
        println!("n={n}: |Perm| = {:.4e} in {:.3}s", p.norm(), start.elapsed().as_secs_f64());
    }
    Ok(())
}
