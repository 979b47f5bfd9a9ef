//! In-place kernels for the lower-triangular difference matrix and its inverse.
//!
//! `Δ` has ones on the diagonal and minus ones on the first subdiagonal, so
//! `Δ^k` is banded with bandwidth `k` and `Δ^{-k}` is `k` repeated prefix sums.
//! The adjoint `Δ^H` is upper bidiagonal; its inverse is a suffix sum. Each
//! kernel costs `O(k N)`.

use std::ops::{AddAssign, SubAssign};

/// `v <- Δ^k v` with the convention `v_0 = v_{-1} = ... = 0`.
pub fn difference_in_place<T: Copy + SubAssign>(k: usize, v: &mut [T]) {
    for _ in 0..k {
        for n in (1..v.len()).rev() {
            let prev = v[n - 1];
            v[n] -= prev;
        }
    }
}

/// `v <- Δ^{-k} v`.
pub fn prefix_sum_in_place<T: Copy + AddAssign>(k: usize, v: &mut [T]) {
    for _ in 0..k {
        for n in 1..v.len() {
            let prev = v[n - 1];
            v[n] += prev;
        }
    }
}

/// `v <- (Δ^H)^k v`, i.e. `v_m - v_{m+1}` applied `k` times with `v_{N+1} = 0`.
pub fn adjoint_difference_in_place<T: Copy + SubAssign>(k: usize, v: &mut [T]) {
    for _ in 0..k {
        for m in 0..v.len().saturating_sub(1) {
            let next = v[m + 1];
            v[m] -= next;
        }
    }
}

/// `v <- (Δ^H)^{-k} v`.
pub fn suffix_sum_in_place<T: Copy + AddAssign>(k: usize, v: &mut [T]) {
    for _ in 0..k {
        for m in (0..v.len().saturating_sub(1)).rev() {
            let next = v[m + 1];
            v[m] += next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_difference_of_progression() {
        let mut v = [1.0, 2.0, 3.0, 4.0];
        difference_in_place(2, &mut v);
        assert_eq!(v, [1.0, 0.0, 0.0, 0.0]);
        prefix_sum_in_place(2, &mut v);
        assert_eq!(v, [1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn adjoint_pairs_with_forward() {
        // <Δ^k x, y> == <x, (Δ^H)^k y> on integer data, exactly.
        let x = [3.0, -1.0, 4.0, 1.0, -5.0, 9.0];
        let y = [2.0, 7.0, -1.0, 8.0, 2.0, -8.0];
        for k in 1..4 {
            let mut dx = x;
            difference_in_place(k, &mut dx);
            let mut dy = y;
            adjoint_difference_in_place(k, &mut dy);
            let lhs: f64 = dx.iter().zip(&y).map(|(a, b)| a * b).sum();
            let rhs: f64 = x.iter().zip(&dy).map(|(a, b)| a * b).sum();
            assert_eq!(lhs, rhs);

            suffix_sum_in_place(k, &mut dy);
            assert_eq!(dy, y);
        }
    }
}
