//! Block indicators and partial-sum projections: uniformly bounded blocks, unbounded sums.

use hklab::generator::{NormMethod, PowerOptions};
use hklab::hkspace::SpaceConfig;
use hklab::lab::{block_norms, partial_sum_projection_norms, Grouping};

fn main() -> hklab::Result<()> {
    let space = SpaceConfig::hilbert(1)?;
    let grouping = Grouping::uniform(1, 128)?;
    let report = partial_sum_projection_norms(
        &space,
        &grouping,
        &[1, 4, 16, 64],
        NormMethod::DenseSvd,
        &PowerOptions::default(),
    )?;
    for (m, v) in report.prefix.grid.iter().zip(&report.prefix.values) {
        println!("M = {m:>3}  ‖S_M‖ = {v:.6}  sqrt(M+1) = {:.6}", (m + 1.0).sqrt());
    }

    let blocks = Grouping::new(vec![vec![1, 2, 3], vec![4], vec![5, 6], vec![7, 8, 9, 10]], 10)?;
    let norms = block_norms(&SpaceConfig::hilbert(2)?, &blocks)?;
    println!("k = 2 block indicator norms: {norms:.4?}");
    Ok(())
}
