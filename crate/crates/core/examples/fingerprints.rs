//! Fingerprints summarise samples up to reordering and relabeling; a
//! collision-based certifier only ever looks at the fingerprint.

use bosonbench::certify::{fingerprint, is_trivial_fingerprint, symmetric_certifier, CollisionPolicy};

fn main() -> bosonbench::Result<()> {
    // Two sequences over a six-element space, labels 0..5.
    let s1 = vec![0, 4, 0, 0, 1];
    let s2 = vec![1, 5, 0, 3, 5];
    let c = fingerprint(&[s1.clone(), s2], 6)?;
    for row in c.as_matrix().unwrap_or_default() {
        println!("{row:?}");
    }
    println!("trivial: {}", is_trivial_fingerprint(&c));
    println!("collision certifier on the first sequence: {:?}", symmetric_certifier(&s1, 6, &CollisionPolicy)?);
    println!("collision certifier on [2, 0, 5]: {:?}", symmetric_certifier(&[2, 0, 5], 6, &CollisionPolicy)?);
    Ok(())
}
