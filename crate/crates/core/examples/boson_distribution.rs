//! Exact output distribution of a Haar-random interferometer, its
//! collision-free post-selection, and samples drawn from it.
//!
//! cargo run --release --example boson_distribution -- 8 3

use bosonbench::boson::{collision_free_fraction, draw_samples, full_distribution, postselected_distribution};
use bosonbench::linalg::haar_unitary;
use bosonbench::rng::RngStream;

fn main() -> bosonbench::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (m, n) = (args.first().copied().unwrap_or(8), args.get(1).copied().unwrap_or(3));
    let mut rng = RngStream::new(2024, 0);
    let u = haar_unitary(m, &mut rng)?;

    let full = full_distribution(&u, n)?;
    let (eps, bits) = full.flatness();
    let (arg, _) = full.argmax();
    println!("|Phi_{{{m},{n}}}| = {}", full.len());
    println!("largest probability {eps:.3e} at {} (min-entropy {bits:.2} bits)", full.space().element(arg));
    println!("collision-free mass {:.4}", collision_free_fraction(&u, n)?);

    let post = postselected_distribution(&u, n)?;
    println!("|Phi*_{{{m},{n}}}| = {}, largest post-selected probability {:.3e}", post.len(), post.flatness().0);
    for s in draw_samples(&post, 5, &mut rng)? {
        println!("sample {s}");
    }
    Ok(())
}
