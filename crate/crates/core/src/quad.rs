//! One-dimensional quadrature.

use crate::error::{out_of_range, LabError, Result};
use crate::numeric::CompensatedSum;

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson with absolute tolerance `tol` per panel.
///
/// A panel is accepted when the two-half estimate differs from the whole-panel
/// estimate by at most `15 tol`; the Richardson correction is then added.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(out_of_range("integration limits must be finite"));
    }
    if !(tol > 0.0) {
        return Err(out_of_range("tolerance must be positive"));
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut acc = CompensatedSum::default();
    let mut stack = vec![(a, b, fa, fm, fb, whole, 0u32)];
    while let Some((a, b, fa, fm, fb, whole, depth)) = stack.pop() {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if !delta.is_finite() {
            return Err(LabError::Unsupported(format!("non-finite integrand near {m}")));
        }
        if delta.abs() <= 15.0 * tol || depth >= MAX_DEPTH {
            acc.add(left + right + delta / 15.0);
        } else {
            stack.push((m, b, fm, frm, fb, right, depth + 1));
            stack.push((a, m, fa, flm, fm, left, depth + 1));
        }
    }
    Ok(acc.value())
}

/// Composite Simpson weights `h/3 (1, 4, 2, ..., 4, 1)` on `steps` subintervals of `[0, T]`.
/// `steps` must be even.
pub fn simpson_weight(i: usize, steps: usize, h: f64) -> f64 {
    let w = if i == 0 || i == steps {
        1.0
    } else if i % 2 == 1 {
        4.0
    } else {
        2.0
    };
    w * h / 3.0
}
