//! Diagonal operators seen in isometric difference coordinates.
//!
//! An operator that is diagonal in the coefficients, `c_n -> σ_n c_n`, acts on
//! `d = Δ^k c` as `B = Δ^k diag(σ) Δ^{-k}`. Splitting off the diagonal,
//!
//! ```text
//! B d = σ ∘ d + E Δ^{-k} d,   (E c)_n = Σ_{i=1..k} (-1)^i C(k,i) (σ_{n-i} - σ_n) c_{n-i},
//! ```
//!
//! so a matvec is `k` prefix sums plus a band of width `k`. The commutator
//! form keeps `B = I` exact when the symbol is constant, which the naive
//! difference-of-prefix-sums form does not.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::banded;
use crate::error::{LabError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A linear map with an adjoint, acting on `C^N`.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Complex64], out: &mut [Complex64]);
    fn apply_adjoint(&self, x: &[Complex64], out: &mut [Complex64]);
}

/// `T Δ^k diag(σ) Δ^{-k} T^{-1}` on the truncation `span{e_1..e_N}`.
#[derive(Debug, Clone)]
pub struct ConjugatedDiagonal {
    k: usize,
    diag: Vec<Complex64>,
    /// Signed binomials `(-1)^i C(k, i)`, `i = 0..=k`.
    weights: Vec<f64>,
    /// `(T, T^{-1})`.
    transform: Option<(DMatrix<Complex64>, DMatrix<Complex64>)>,
}

impl ConjugatedDiagonal {
    pub fn new(k: usize, diag: Vec<Complex64>) -> Result<Self> {
        if k < 1 {
            return Err(LabError::OutOfRange("order k must be >= 1".into()));
        }
        if diag.is_empty() {
            return Err(LabError::OutOfRange("truncation N must be >= 1".into()));
        }
        let mut weights = Vec::with_capacity(k + 1);
        let mut c = 1.0;
        for i in 0..=k {
            weights.push(if i % 2 == 0 { c } else { -c });
            c = c * (k - i) as f64 / (i + 1) as f64;
        }
        Ok(ConjugatedDiagonal {
            k,
            diag,
            weights,
            transform: None,
        })
    }

    /// Conjugates further by a basis transform `T` (the Riesz-basis model).
    pub fn with_transform(mut self, t: DMatrix<Complex64>) -> Result<Self> {
        if t.nrows() != self.diag.len() || t.ncols() != self.diag.len() {
            return Err(LabError::DimensionMismatch {
                expected: self.diag.len(),
                found: t.nrows(),
            });
        }
        let tinv = t
            .clone()
            .try_inverse()
            .ok_or_else(|| LabError::OutOfRange("basis transform is singular".into()))?;
        self.transform = Some((t, tinv));
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn diagonal(&self) -> &[Complex64] {
        &self.diag
    }

    /// `Some(σ)` when every diagonal entry equals `σ`; then the operator is `σ I`.
    pub fn constant_symbol(&self) -> Option<Complex64> {
        let first = self.diag[0];
        self.diag.iter().all(|&z| z == first).then_some(first)
    }

    fn apply_core(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = self.diag.len();
        let mut c = x.to_vec();
        banded::prefix_sum_in_place(self.k, &mut c);
        for m in 0..n {
            let sm = self.diag[m];
            let mut acc = sm * x[m];
            for i in 1..=self.k.min(m) {
                acc += self.weights[i] * (self.diag[m - i] - sm) * c[m - i];
            }
            out[m] = acc;
        }
    }

    fn apply_adjoint_core(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = self.diag.len();
        let mut e = vec![ZERO; n];
        for m in 0..n {
            let sm = self.diag[m];
            let mut acc = ZERO;
            for i in 1..=self.k {
                if m + i >= n {
                    break;
                }
                acc += self.weights[i] * (sm - self.diag[m + i]).conj() * x[m + i];
            }
            e[m] = acc;
        }
        banded::suffix_sum_in_place(self.k, &mut e);
        for m in 0..n {
            out[m] = self.diag[m].conj() * x[m] + e[m];
        }
    }

    /// Dense `N x N` matrix, assembled column by column from the matvec.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.diag.len();
        let mut m = DMatrix::from_element(n, n, ZERO);
        let mut e = vec![ZERO; n];
        let mut col = vec![ZERO; n];
        for j in 0..n {
            e[j] = Complex64::new(1.0, 0.0);
            self.apply_core(&e, &mut col);
            e[j] = ZERO;
            m.column_mut(j).copy_from_slice(&col);
        }
        match &self.transform {
            None => m,
            Some((t, tinv)) => t * m * tinv,
        }
    }
}

impl LinearOperator for ConjugatedDiagonal {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        match &self.transform {
            None => self.apply_core(x, out),
            Some((t, tinv)) => {
                let y = tinv * DVector::from_column_slice(x);
                let mut z = vec![ZERO; x.len()];
                self.apply_core(y.as_slice(), &mut z);
                let r = t * DVector::from_vec(z);
                out.copy_from_slice(r.as_slice());
            }
        }
    }

    fn apply_adjoint(&self, x: &[Complex64], out: &mut [Complex64]) {
        match &self.transform {
            None => self.apply_adjoint_core(x, out),
            Some((t, tinv)) => {
                // (T B T^{-1})^H = T^{-H} B^H T^H
                let y = t.adjoint() * DVector::from_column_slice(x);
                let mut z = vec![ZERO; x.len()];
                self.apply_adjoint_core(y.as_slice(), &mut z);
                let r = tinv.adjoint() * DVector::from_vec(z);
                out.copy_from_slice(r.as_slice());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dense(k: usize, diag: &[Complex64]) -> DMatrix<Complex64> {
        let n = diag.len();
        let d1 = DMatrix::from_fn(n, n, |i, j| {
            let v = if i == j {
                1.0
            } else if i == j + 1 {
                -1.0
            } else {
                0.0
            };
            Complex64::new(v, 0.0)
        });
        let mut dk = DMatrix::identity(n, n);
        for _ in 0..k {
            dk = &d1 * dk;
        }
        let inv = dk.clone().try_inverse().unwrap();
        dk * DMatrix::from_diagonal(&DVector::from_column_slice(diag)) * inv
    }

    fn sample_diag(n: usize) -> Vec<Complex64> {
        (1..=n)
            .map(|i| Complex64::new((i as f64).ln().cos(), (1.7 * i as f64).sin()))
            .collect()
    }

    #[test]
    fn matches_naive_product() {
        for k in 1..=3 {
            let diag = sample_diag(9);
            let op = ConjugatedDiagonal::new(k, diag.clone()).unwrap();
            let a = op.to_dense();
            let b = naive_dense(k, &diag);
            assert!((a - b).norm() < 1e-11, "k = {k}");
        }
    }

    #[test]
    fn adjoint_is_conjugate_transpose() {
        let diag = sample_diag(7);
        let op = ConjugatedDiagonal::new(2, diag).unwrap();
        let a = op.to_dense().adjoint();
        let mut e = vec![ZERO; 7];
        let mut col = vec![ZERO; 7];
        for j in 0..7 {
            e[j] = Complex64::new(1.0, 0.0);
            op.apply_adjoint(&e, &mut col);
            e[j] = ZERO;
            for i in 0..7 {
                assert!((col[i] - a[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn transform_conjugation() {
        let diag = sample_diag(4);
        let t = DMatrix::from_fn(4, 4, |i, j| {
            Complex64::new(if i == j { 2.0 } else { 0.1 * (i + 2 * j) as f64 }, 0.0)
        });
        let op = ConjugatedDiagonal::new(1, diag.clone())
            .unwrap()
            .with_transform(t.clone())
            .unwrap();
        let expected = &t * naive_dense(1, &diag) * t.clone().try_inverse().unwrap();
        assert!((op.to_dense() - &expected).norm() < 1e-12);
        let x: Vec<Complex64> = (0..4).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let mut y = vec![ZERO; 4];
        op.apply_adjoint(&x, &mut y);
        let y2 = expected.adjoint() * DVector::from_vec(x);
        for i in 0..4 {
            assert!((y[i] - y2[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_symbol_is_exact_identity() {
        let op = ConjugatedDiagonal::new(3, vec![Complex64::new(1.0, 0.0); 50]).unwrap();
        let x: Vec<Complex64> = (0..50).map(|i| Complex64::new(i as f64 * 0.37, -1.0)).collect();
        let mut y = vec![ZERO; 50];
        op.apply(&x, &mut y);
        assert_eq!(x, y);
        assert_eq!(op.constant_symbol(), Some(Complex64::new(1.0, 0.0)));
    }
}
