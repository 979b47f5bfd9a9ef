//! Discrete Hardy ratios for a few test sequences against the sharp constant.

use hklab::diffseq::{hardy_constant, hardy_ratio};
use hklab::lab::HardySequence;

fn main() -> hklab::Result<()> {
    let sequences = [
        ("single spike", HardySequence::SingleSpike),
        ("n^-0.51", HardySequence::Power(-0.51)),
        ("n^-0.7", HardySequence::Power(-0.7)),
        ("random", HardySequence::Random(7)),
    ];
    for p in [1.5, 2.0, 3.0] {
        println!("p = {p}, constant = {:.6}", hardy_constant(p));
        for (name, seq) in &sequences {
            for n in [1_000, 100_000] {
                let r = hardy_ratio(p, &seq.generate(n))?;
                println!("  {name:>12}  N = {n:>6}  ratio = {r:.6}");
            }
        }
    }
    Ok(())
}
