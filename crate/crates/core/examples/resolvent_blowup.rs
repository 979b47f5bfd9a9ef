//! Resolvent norm along the horizontal line through i f(n) as the real part shrinks.

use hklab::generator::{GeneratorConfig, PowerOptions};
use hklab::lab::resolvent_blowup_scan;
use hklab::numeric::logspace;

fn main() -> hklab::Result<()> {
    let n = 4096;
    let a_grid = logspace(1e-3, 1.0, 10);
    for k in [1, 2] {
        let g = GeneratorConfig::log(k, n)?;
        let scan = resolvent_blowup_scan(&g, 10, &a_grid, n, &PowerOptions::default())?;
        println!("k = {k}");
        for (a, v) in scan.grid.iter().zip(&scan.values) {
            println!("  a = {a:.3e}  ‖R‖ = {v:.6e}");
        }
        println!("  slope of log ‖R‖ against log(1/a): {:.4}", scan.fitted_slope.unwrap_or(f64::NAN));
    }
    Ok(())
}
