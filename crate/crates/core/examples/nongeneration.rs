//! For f(n) = sqrt(n) the group norm grows with the truncation, unlike f(n) = log(n).

use hklab::generator::{GeneratorConfig, OperatorKind, PowerOptions};
use hklab::lab::{nongeneration_witness, truncation_scan};

fn main() -> hklab::Result<()> {
    let n_grid = [256, 1024, 4096, 16384];
    let opts = PowerOptions::default();
    let sqrt = nongeneration_witness(&n_grid, 1.0, &opts)?;
    let log = truncation_scan(&GeneratorConfig::log(1, 16384)?, OperatorKind::Group(1.0), &n_grid, &opts)?;
    for i in 0..n_grid.len() {
        println!("N = {:>5}  sqrt: {:>10.4}  log: {:.4}", n_grid[i], sqrt.values[i], log.values[i]);
    }
    println!("fitted exponent for sqrt: {:.3}", sqrt.fitted_slope.unwrap_or(f64::NAN));
    Ok(())
}
