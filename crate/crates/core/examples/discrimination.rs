//! Telling Boson-Sampling output from uniform noise with full knowledge of
//! both distributions: divergences, the analytic sample count and the
//! measured error rates of the likelihood-ratio test.

use bosonbench::boson::{postselected_distribution, uniform_distribution};
use bosonbench::certify::{
    discrimination_error_bound, evaluate_likelihood_ratio, min_samples_negative, one_norm_distance, relative_entropy,
    renyi_relative_entropy,
};
use bosonbench::linalg::haar_unitary;
use bosonbench::rng::RngStream;

fn main() -> bosonbench::Result<()> {
    let (m, n, alpha) = (16, 3, 1.0 / 3.0);
    let rng = RngStream::new(11, 0);
    let u = haar_unitary(m, &mut rng.split(0))?;
    let p = postselected_distribution(&u, n)?;
    let q = uniform_distribution(p.space().clone())?;

    println!("S(P||Q)     = {:.4}", relative_entropy(&p, &q)?);
    println!("S_3/2(P||Q) = {:.4}", renyi_relative_entropy(&p, &q, 1.5)?);
    println!("S_2(P||Q)   = {:.4}", renyi_relative_entropy(&p, &q, 2.0)?);
    println!("||P-Q||_1   = {:.4}", one_norm_distance(&p, &q)?);
    let l_star = min_samples_negative(&p, &q, alpha)?;
    println!("analytic bound turns negative at l = {l_star:?}");

    for l in [1, 5, 10, 20, 40] {
        let r = evaluate_likelihood_ratio(&p, &q, l, alpha, 2000, &rng.split(l))?;
        println!(
            "l={l:>3}: type I {:.3}, type II {:.3}, bound on ln(beta)/l {:.3}",
            r.type_i,
            r.type_ii,
            discrimination_error_bound(&p, &q, l, alpha)?
        );
    }
    Ok(())
}
