//! Finite-window difference diagnostics for the built-in symbols.

use hklab::diffseq::{sk_diagnostics, Symbol};

fn main() -> hklab::Result<()> {
    let window = 1_000_000;
    let symbols = [
        ("log", Symbol::log(window)?),
        ("iterated-log", Symbol::iterated_log(window)?),
        ("sqrt", Symbol::sqrt_witness(window)?),
    ];
    for (name, f) in &symbols {
        for k in 1..=3 {
            let r = sk_diagnostics(f, k, window)?;
            if k == 1 {
                println!("{name}: C = sup n|Δf(n)| = {:.6}", r.c_constant());
            }
            let sups: Vec<String> = r.per_j_sup.iter().map(|s| format!("{s:.4}")).collect();
            println!(
                "  k = {k}: sup_j = [{}] unbounded = {} to_infinity = {}",
                sups.join(", "),
                r.unbounded_flag,
                r.tends_to_infinity_flag
            );
        }
    }
    Ok(())
}
