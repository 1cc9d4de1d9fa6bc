//! Two photons on a balanced beamsplitter never leave through different ports.

use bosonbench::boson::full_distribution;
use bosonbench::linalg::UnitaryMatrix;

fn main() -> bosonbench::Result<()> {
    let dist = full_distribution(&UnitaryMatrix::beamsplitter(), 2)?;
    for (s, p) in dist.space().iter().zip(dist.probs()) {
        println!("Pr[{s}] = {p:.6}");
    }
    Ok(())
}
