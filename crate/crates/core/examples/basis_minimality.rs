//! Space norms and the distance from e_n to the span of the remaining basis vectors.

use hklab::diffseq::CoeffVec;
use hklab::hkspace::{block_vector, minimality_distance, space_norm, SpaceConfig};

fn main() -> hklab::Result<()> {
    let ones = CoeffVec::from_real(&[1.0; 8])?;
    for (k, p) in [(1, 2.0), (2, 2.0), (1, 3.0), (2, 1.0)] {
        let s = SpaceConfig::banach(k, p)?;
        println!(
            "k = {k}, p = {p}: ‖(1,...,1)‖ = {:.6}  ‖e_1‖ = {:.6}  ‖1_[3,6]‖ = {:.6}",
            space_norm(&s, &ones)?,
            space_norm(&s, &CoeffVec::basis(1, 8)?)?,
            space_norm(&s, &block_vector(3, 6, 8)?)?
        );
    }
    for k in 1..=3 {
        let s = SpaceConfig::hilbert(k)?;
        print!("k = {k} distances:");
        for n in [1, 4, 16, 64, 256] {
            print!("  n={n}: {:.5}", minimality_distance(&s, n, 1024)?);
        }
        println!();
    }
    Ok(())
}
