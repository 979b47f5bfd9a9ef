//! Growth of ‖e^{A_k t}‖ on a fixed truncation.

use hklab::generator::{GeneratorConfig, PowerOptions};
use hklab::lab::group_growth_scan;

fn main() -> hklab::Result<()> {
    let t_grid = [0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
    for k in [1, 2] {
        let g = GeneratorConfig::log(k, 1024)?;
        let scan = group_growth_scan(&g, &t_grid, 1024, &PowerOptions::default())?;
        println!("k = {k}");
        for (t, v) in scan.grid.iter().zip(&scan.values) {
            println!("  t = {t:>5}  ‖e^(At)‖ = {v:.6}");
        }
        if let Some(s) = scan.fitted_slope {
            println!("  log-log slope: {s:.4}");
        }
    }
    Ok(())
}
