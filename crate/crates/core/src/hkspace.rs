//! Norms on truncations of `H_k({e_n})` and `ℓ_{p,k}({e_n})`, basis models, and
//! distances that witness minimality without uniform minimality.
//!
//! A truncation of length `N` is the span of `e_1..e_N`. Because `Δ^k` is lower
//! triangular, this span is mapped isometrically onto the first `N`
//! coordinates of the difference coordinates `d = Δ^k c`. Distances computed
//! inside the truncation are upper bounds on the true distances.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::banded;
use crate::diffseq::{diff_apply, CoeffVec};
use crate::error::{out_of_range, LabError, Result};
use crate::numeric::norm2;

/// Riesz constants `(m, M)` of the initial basis and the map from its
/// coefficients to an orthonormal frame.
///
/// With a transform `T`, an element with coefficients `α` has norm `‖T α‖`, so
/// `m = 1 / σ_max(T)^2` and `M = 1 / σ_min(T)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisModel {
    m: f64,
    big_m: f64,
    transform: Option<DMatrix<Complex64>>,
}

impl Default for BasisModel {
    fn default() -> Self {
        Self::orthonormal()
    }
}

impl BasisModel {
    /// `m = M = 1`.
    pub fn orthonormal() -> Self {
        BasisModel {
            m: 1.0,
            big_m: 1.0,
            transform: None,
        }
    }

    pub fn from_transform(t: DMatrix<Complex64>) -> Result<Self> {
        if !t.is_square() {
            return Err(LabError::DimensionMismatch {
                expected: t.nrows(),
                found: t.ncols(),
            });
        }
        let sv = t.clone().singular_values();
        let smax = sv.max();
        let smin = sv.min();
        if !(smin > 0.0) || smin <= smax * 1e-14 {
            return Err(out_of_range("basis transform is singular"));
        }
        Ok(BasisModel {
            m: 1.0 / (smax * smax),
            big_m: 1.0 / (smin * smin),
            transform: Some(t),
        })
    }

    /// Dense real matrix, row-major, whitespace-separated, one row per line.
    pub fn parse_transform(text: &str, path: &Path) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| LabError::Parse {
                        path: path.to_path_buf(),
                        line: i + 1,
                        msg: format!("expected a real number, found {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let n = rows.len();
        if n == 0 {
            return Err(LabError::Parse {
                path: path.to_path_buf(),
                line: 1,
                msg: "empty matrix".into(),
            });
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(LabError::Parse {
                path: path.to_path_buf(),
                line: bad + 1,
                msg: format!("matrix is not square: {n} rows, row has {} entries", rows[bad].len()),
            });
        }
        let t = DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0));
        Self::from_transform(t)
    }

    pub fn load_transform(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse_transform(&fs::read_to_string(path)?, path)
    }

    pub fn lower(&self) -> f64 {
        self.m
    }

    pub fn upper(&self) -> f64 {
        self.big_m
    }

    pub fn transform(&self) -> Option<&DMatrix<Complex64>> {
        self.transform.as_ref()
    }

    pub fn is_orthonormal(&self) -> bool {
        self.transform.is_none()
    }
}

/// Which space the truncations live in: `p = 2` is `H_k`, otherwise `ℓ_{p,k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceConfig {
    pub k: usize,
    pub p: f64,
    pub basis: BasisModel,
}

impl SpaceConfig {
    pub fn new(k: usize, p: f64, basis: BasisModel) -> Result<Self> {
        if k < 1 {
            return Err(out_of_range("order k must be >= 1"));
        }
        if !(p >= 1.0) || !p.is_finite() {
            return Err(out_of_range(format!("exponent p = {p} must be finite and >= 1")));
        }
        Ok(SpaceConfig { k, p, basis })
    }

    /// `H_k` with an orthonormal initial basis.
    pub fn hilbert(k: usize) -> Result<Self> {
        Self::new(k, 2.0, BasisModel::orthonormal())
    }

    /// `ℓ_{p,k}` with the canonical basis of `ℓ_p`.
    pub fn banach(k: usize, p: f64) -> Result<Self> {
        Self::new(k, p, BasisModel::orthonormal())
    }

    pub fn is_hilbert(&self) -> bool {
        self.p == 2.0
    }

    pub(crate) fn require_hilbert(&self, what: &str) -> Result<()> {
        if self.is_hilbert() {
            Ok(())
        } else {
            Err(LabError::Unsupported(format!("{what} requires p = 2 (got p = {})", self.p)))
        }
    }

    /// Difference coordinates `T Δ^k c`, in which the space norm is the plain `p`-norm.
    pub fn isometric_coords(&self, c: &CoeffVec) -> Result<Vec<Complex64>> {
        let d = diff_apply(self.k, c)?.into_inner();
        match self.basis.transform() {
            None => Ok(d),
            Some(t) => {
                if t.nrows() != d.len() {
                    return Err(LabError::DimensionMismatch {
                        expected: t.nrows(),
                        found: d.len(),
                    });
                }
                Ok((t * nalgebra::DVector::from_vec(d)).data.into())
            }
        }
    }
}

pub(crate) fn p_norm(v: &[Complex64], p: f64) -> f64 {
    if p == 2.0 {
        return norm2(v);
    }
    let scale = v.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let s: f64 = v.iter().map(|z| (z.norm() / scale).powf(p)).sum();
    scale * s.powf(1.0 / p)
}

/// `‖c‖ = ‖T Δ^k c‖_p`.
pub fn space_norm(cfg: &SpaceConfig, c: &CoeffVec) -> Result<f64> {
    Ok(p_norm(&cfg.isometric_coords(c)?, cfg.p))
}

/// Indicator of `a..=b` (1-based) inside a truncation of length `len`.
pub fn block_vector(a: usize, b: usize, len: usize) -> Result<CoeffVec> {
    if a < 1 || a > b || b > len {
        return Err(out_of_range(format!("block [{a}, {b}] not inside 1..={len}")));
    }
    let mut c = CoeffVec::zeros(len)?;
    for z in &mut c.entries_mut()[a - 1..b] {
        *z = Complex64::new(1.0, 0.0);
    }
    Ok(c)
}

/// Distance from `e_n` to `span{e_j : j != n, j <= N}` in `H_k`.
///
/// This is the least-squares residual, evaluated through the biorthogonal
/// functional: with `B = T Δ^k` the columns `B e_j` are the basis vectors in
/// isometric coordinates, and the residual equals `1 / ‖B^{-H} e_n‖`. For the
/// orthonormal model `B^{-H} e_n` is `k` suffix sums of `e_n`, so the result
/// does not depend on `N` once `N >= n`.
pub fn minimality_distance(cfg: &SpaceConfig, n: usize, len: usize) -> Result<f64> {
    cfg.require_hilbert("minimality distance")?;
    if n < 1 || n > len {
        return Err(out_of_range(format!("index {n} not in 1..={len}")));
    }
    let mut w = vec![Complex64::new(0.0, 0.0); len];
    w[n - 1] = Complex64::new(1.0, 0.0);
    if let Some(t) = cfg.basis.transform() {
        if t.nrows() != len {
            return Err(LabError::DimensionMismatch {
                expected: t.nrows(),
                found: len,
            });
        }
        // B^H w = e_n  with  B^H = (Δ^k)^H T^H:  solve T^H u = (Δ^H)^{-k} e_n.
        banded::suffix_sum_in_place(cfg.k, &mut w);
        let lu = t.adjoint().lu();
        let u = lu
            .solve(&nalgebra::DVector::from_vec(w))
            .ok_or_else(|| out_of_range("basis transform is singular"))?;
        return Ok(1.0 / u.norm());
    }
    banded::suffix_sum_in_place(cfg.k, &mut w);
    Ok(1.0 / norm2(&w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(k: usize) -> SpaceConfig {
        SpaceConfig::hilbert(k).unwrap()
    }

    #[test]
    fn norms_of_simple_vectors() {
        let ones = CoeffVec::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(space_norm(&h(1), &ones).unwrap(), 1.0);
        let e2 = CoeffVec::basis(2, 5).unwrap();
        assert!((space_norm(&h(1), &e2).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        // ‖e_n‖_k = sqrt(C(2k, k)) for interior n
        let e3 = CoeffVec::basis(3, 10).unwrap();
        assert!((space_norm(&h(3), &e3).unwrap() - 20f64.sqrt()).abs() < 1e-14);
        let cfg = SpaceConfig::banach(1, 3.0).unwrap();
        let ones4 = CoeffVec::from_real(&[1.0; 4]).unwrap();
        assert!((space_norm(&cfg, &ones4).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn blocks() {
        let b = block_vector(2, 4, 6).unwrap();
        let re: Vec<f64> = b.iter().map(|z| z.re).collect();
        assert_eq!(re, [0.0, 1.0, 1.0, 1.0, 0.0, 0.0]);
        assert!(block_vector(1, 5, 5).unwrap().iter().all(|z| z.re == 1.0));
        assert!((space_norm(&h(1), &b).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(block_vector(3, 2, 6).is_err());
        assert!(block_vector(0, 2, 6).is_err());
        assert!(block_vector(2, 7, 6).is_err());
    }

    #[test]
    fn minimality_first_vector() {
        assert!((minimality_distance(&h(1), 1, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!((minimality_distance(&h(1), 4, 4096).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(
            minimality_distance(&SpaceConfig::banach(1, 3.0).unwrap(), 1, 4),
            Err(LabError::Unsupported(_))
        ));
        assert!(minimality_distance(&h(1), 5, 4).is_err());
    }

    #[test]
    fn transform_constants_and_errors() {
        let t = DMatrix::from_fn(2, 2, |i, j| Complex64::new(if i == j { 2.0 } else { 0.0 }, 0.0));
        let b = BasisModel::from_transform(t).unwrap();
        assert!((b.lower() - 0.25).abs() < 1e-15 && (b.upper() - 0.25).abs() < 1e-15);
        let p = Path::new("t.txt");
        assert!(BasisModel::parse_transform("1 0\n0 1\n", p).is_ok());
        assert!(matches!(
            BasisModel::parse_transform("1 0 0\n0 1 0\n", p),
            Err(LabError::Parse { .. })
        ));
        assert!(BasisModel::parse_transform("1 1\n1 1\n", p).is_err());

        let cfg = SpaceConfig::new(1, 2.0, b).unwrap();
        let c = CoeffVec::basis(1, 3).unwrap();
        assert!(matches!(space_norm(&cfg, &c), Err(LabError::DimensionMismatch { .. })));
    }
}
