//! Largest singular value by power iteration on `B^H B`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::conjugated::LinearOperator;
use crate::error::{LabError, Result};
use crate::numeric::norm2;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Stop once the Rayleigh quotient changes by at most `tol` relative.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tol: 1e-10,
            max_iter: 10_000,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    MatrixFree,
    DenseSvd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    pub method: NormMethod,
    /// Set when the value is only a lower bound from random probing (`p != 2`).
    pub lower_bound_only: bool,
}

pub(crate) fn random_unit_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let s = norm2(&v);
    for z in &mut v {
        *z /= s;
    }
    v
}

/// Power iteration for `σ_max(B)`.
///
/// Each step forms `w = B v`, `u = B^H w` and renormalises. The Rayleigh
/// quotient `‖w‖^2` drives the stopping rule. The returned value is
/// `sqrt(‖u‖)`: for unit `v`, `‖B^H B v‖` lies between the Rayleigh quotient
/// and `σ_max^2`, so it is still a lower bound and a slightly sharper one.
pub fn power_norm<Op: LinearOperator + ?Sized>(op: &Op, opts: &PowerOptions) -> Result<NormEstimate> {
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut v = random_unit_vector(n, &mut rng);
    let mut w = vec![Complex64::new(0.0, 0.0); n];
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    let mut prev = f64::NAN;
    let mut change = f64::INFINITY;
    for iter in 1..=opts.max_iter {
        op.apply(&v, &mut w);
        let rq = norm2(&w).powi(2);
        op.apply_adjoint(&w, &mut u);
        let nu = norm2(&u);
        if nu == 0.0 {
            return Ok(NormEstimate {
                value: 0.0,
                iterations: iter,
                method: NormMethod::MatrixFree,
                lower_bound_only: false,
            });
        }
        for (vi, ui) in v.iter_mut().zip(&u) {
            *vi = ui / nu;
        }
        if iter > 1 {
            change = (rq - prev).abs() / rq;
            if change <= opts.tol {
                return Ok(NormEstimate {
                    value: nu.max(rq).sqrt(),
                    iterations: iter,
                    method: NormMethod::MatrixFree,
                    lower_bound_only: false,
                });
            }
        }
        prev = rq;
    }
    Err(LabError::NoConvergence {
        iterations: opts.max_iter,
        change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::conjugated::ConjugatedDiagonal;

    #[test]
    fn diagonal_in_difference_coordinates() {
        // Symbol (1, 0): B = [[1, 0], [-1, 0]] has norm sqrt(2).
        let op = ConjugatedDiagonal::new(
            1,
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        let est = power_norm(&op, &PowerOptions::default()).unwrap();
        assert!((est.value - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zero_operator() {
        let op = ConjugatedDiagonal::new(2, vec![Complex64::new(0.0, 0.0); 5]).unwrap();
        assert_eq!(power_norm(&op, &PowerOptions::default()).unwrap().value, 0.0);
    }

    #[test]
    fn iteration_cap_surfaces() {
        let diag: Vec<Complex64> = (1..=64)
            .map(|n| Complex64::from_polar(1.0, (n as f64).ln()))
            .collect();
        let op = ConjugatedDiagonal::new(1, diag).unwrap();
        let opts = PowerOptions {
            max_iter: 2,
            ..Default::default()
        };
        assert!(matches!(power_norm(&op, &opts), Err(LabError::NoConvergence { .. })));
    }
}
