//! Phase-space sampling of coherent light through a linear network with
//! bucket detectors.

use bosonbench::gaussian::{
    apply_channel, classical_sample, coherent_state, lossy_channel, passive_network_channel, vacuum_state,
    BucketDetector, GaussianChannel, PatternCounts,
};
use bosonbench::linalg::haar_unitary;
use bosonbench::rng::RngStream;

fn main() -> bosonbench::Result<()> {
    let det = BucketDetector::new(1.6)?;
    let rng = RngStream::new(17, 0);
    let l = 1_000_000;

    let dark = classical_sample(&vacuum_state(1)?, &GaussianChannel::identity(1), &det, l, &rng.split(0))?;
    let one = classical_sample(&coherent_state(&[(1.0, 0.0)])?, &GaussianChannel::identity(1), &det, l, &rng.split(1))?;
    let rate = |p: &[Vec<u8>]| PatternCounts::from_patterns(1, p).click_rates[0];
    println!("dark count rate {:.4} (e^-R^2 = {:.4})", rate(&dark), det.dark_count_rate());
    println!("coherent click rate {:.4}", rate(&one));

    let m = 4;
    let u = haar_unitary(m, &mut rng.split(2))?;
    let network = lossy_channel(0.8, m)?.then(&passive_network_channel(&u))?;
    let input = coherent_state(&[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)])?;
    println!("output mean {:.3?}", apply_channel(&input, &network)?.mean().as_slice());
    let patterns = classical_sample(&input, &network, &det, 100_000, &rng.split(3))?;
    let counts = PatternCounts::from_patterns(m, &patterns);
    println!("click rates {:.4?}", counts.click_rates);
    for (pattern, c) in counts.counts.iter().take(6) {
        println!("{pattern}: {c}");
    }
    Ok(())
}
