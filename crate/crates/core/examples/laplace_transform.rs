//! The resolvent recovered from the group by a truncated Laplace integral.

use hklab::diffseq::CoeffVec;
use hklab::generator::GeneratorConfig;
use hklab::lab::laplace_check;
use num_complex::Complex64;

fn main() -> hklab::Result<()> {
    let g = GeneratorConfig::log(1, 16)?;
    let c = CoeffVec::from_real(&[1.0, -0.5, 0.25, 0.0, 2.0])?;
    for (lambda, horizon, steps) in [
        (Complex64::new(1.0, 0.0), 40.0, 4000),
        (Complex64::new(1.0, 0.0), 40.0, 200_000),
        (Complex64::new(0.5, 1.2), 80.0, 100_000),
    ] {
        let r = laplace_check(&g, lambda, &c, horizon, steps)?;
        println!(
            "λ = {lambda}, T = {horizon}, steps = {steps}: residual = {:.3e}  tail bound = {:.3e}",
            r.residual, r.tail_bound
        );
    }
    Ok(())
}
