//! Square-integrability of the resolvent along vertical lines Re λ = a.

use hklab::diffseq::CoeffVec;
use hklab::generator::GeneratorConfig;
use hklab::lab::{running_max_spread, vertical_integral_scan, IntegralOptions};
use hklab::numeric::logspace;

fn main() -> hklab::Result<()> {
    let g = GeneratorConfig::log(1, 512)?;
    let x = CoeffVec::from_real(&[1.0, 1.0, 0.5])?;
    let y = CoeffVec::basis(2, 3)?;
    let scan = vertical_integral_scan(&g, &logspace(0.05, 2.0, 6), &x, &y, 512, &IntegralOptions::default())?;
    let i2 = scan.column("i2").unwrap_or_default();
    let adj = scan.column("i1_adjoint").unwrap_or_default();
    for (i, a) in scan.grid.iter().enumerate() {
        println!(
            "a = {a:.4}  ∫‖R x‖² = {:.6}  ∫|⟨R² x, y⟩| = {:.6}  ∫‖R* y‖² = {:.6}",
            scan.values[i], i2[i], adj[i]
        );
    }
    if let Some(scaled) = scan.column("scaled_i1") {
        println!("running-max spread of the scaled integral: {:.4}", running_max_spread(scaled));
    }
    Ok(())
}
