//! Submatrices of Haar unitaries next to the Gaussian model, including the
//! entry-variance convention and the max-entry concentration event.

use bosonbench::boson::OutcomeSequence;
use bosonbench::flatness::{
    complex_max_entry_exceedance, gaussian_concentration_bound, max_entry_exceedance_mc, multiplicative_bound_probe,
    FSpec,
};
use bosonbench::rng::RngStream;

fn main() -> bosonbench::Result<()> {
    let m = 200;
    let rng = RngStream::new(13, 0);
    for s in [OutcomeSequence::first_n(m, 2)?, OutcomeSequence::in_space([vec![2], vec![0; m - 1]].concat(), m, 2)?] {
        let xi = 3.0 / (m as f64).sqrt();
        let r = multiplicative_bound_probe(m, &s, FSpec::MaxEntryAtLeast { xi }, 50_000, None, &rng)?;
        println!(
            "S={}: Haar {:.4} +- {:.4}, Gaussian {:.4} +- {:.4}, entry variance ratio {:.3}",
            if s.is_collision_free() { "collision-free" } else { "(2,0,...)" },
            r.haar.mean,
            r.haar.std_error,
            r.gaussian.mean,
            r.gaussian.std_error,
            r.entry_variance_ratio
        );
    }

    let (n, sigma) = (4, 1.0 / 50f64.sqrt());
    for xi in [0.3, 0.4, 0.5] {
        let est = max_entry_exceedance_mc(n, sigma, xi, 100_000, &rng.split(xi.to_bits()))?;
        println!(
            "xi={xi}: MC {:.5}, exact complex tail {:.5}, erfc form {:.5}",
            est.frequency,
            complex_max_entry_exceedance(n, sigma, xi)?,
            gaussian_concentration_bound(n, sigma, xi)?
        );
    }
    Ok(())
}
