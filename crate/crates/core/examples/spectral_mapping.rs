//! Eigenvalues of truncated group matrices sit at e^{i t f(n)}.

use hklab::generator::GeneratorConfig;
use hklab::lab::spectral_mapping_check;

fn main() -> hklab::Result<()> {
    for k in [1, 2] {
        let g = GeneratorConfig::log(k, 128)?;
        for t in [0.5, 3.0, 10.0] {
            let m = spectral_mapping_check(&g, t, 128)?;
            println!("k = {k}, t = {t}: max deviation {:.3e} over {} eigenvalues", m.max_deviation, m.computed.len());
        }
    }
    Ok(())
}
