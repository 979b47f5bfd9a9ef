//! The generator `A_k x = Σ i f(n) c_n e_n`, its group `e^{A_k t}` and its
//! resolvent, all diagonal in the coefficients `c_n`.
//!
//! Norm computations work on the truncation `span{e_1..e_N}`. That span is
//! invariant under every operator here, and because `Δ^k` is lower
//! triangular it is also the first `N` difference coordinates. The truncated
//! norm is therefore the exact norm of a restriction, and it is nondecreasing
//! in `N` with the full operator norm as its limit.

pub mod conjugated;
pub mod power;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diffseq::{sk_diagnostics, CoeffVec, Symbol};
use crate::error::{out_of_range, LabError, Result};
use crate::hkspace::{p_norm, space_norm, SpaceConfig};
use crate::numeric::CompensatedComplexSum;
use crate::quad::simpson_weight;

pub use conjugated::{ConjugatedDiagonal, LinearOperator};
pub use power::{power_norm, NormEstimate, NormMethod, PowerOptions, DEFAULT_SEED};

/// Distance below which `λ` counts as an eigenvalue `i f(n)`.
pub const SPECTRUM_TOL: f64 = 1e-14;

/// Largest truncation accepted by the dense SVD path.
pub const DENSE_MAX_N: usize = 2048;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub space: SpaceConfig,
    pub symbol: Symbol,
}

impl GeneratorConfig {
    pub fn new(space: SpaceConfig, symbol: Symbol) -> Self {
        GeneratorConfig { space, symbol }
    }

    /// `H_k` with `f(n) = ln n` on `1..=n_max`.
    pub fn log(k: usize, n_max: usize) -> Result<Self> {
        Ok(Self::new(SpaceConfig::hilbert(k)?, Symbol::log(n_max)?))
    }

    pub fn k(&self) -> usize {
        self.space.k
    }

    /// A warning when the symbol fails the finite-window `S_k` check on `1..=window`.
    ///
    /// The norm bounds for the group and resolvent assume `f ∈ S_k`; the
    /// computations still run without it.
    pub fn sk_warning(&self, window: usize) -> Option<String> {
        match sk_diagnostics(&self.symbol, self.k(), window) {
            Ok(r) if r.unbounded_flag => Some(format!(
                "symbol {} looks unbounded in the S_{} sense on n <= {window} (sup n^j|Δ^j f| = {:?})",
                self.symbol.kind(),
                self.k(),
                r.per_j_sup
            )),
            Ok(_) => None,
            Err(e) => Some(format!("S_k diagnostics unavailable: {e}")),
        }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(out_of_range("truncation N must be >= 1"));
        }
        if n > self.symbol.n_max() {
            return Err(out_of_range(format!(
                "truncation {n} exceeds symbol window {}",
                self.symbol.n_max()
            )));
        }
        Ok(())
    }
}

/// Which diagonal operator to realise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    /// `A_k`, entries `i f(n)`.
    Generator,
    /// `e^{A_k t}`, entries `e^{i t f(n)}`.
    Group(f64),
    /// `(A_k - λ)^{-1}`, entries `1 / (i f(n) - λ)`.
    Resolvent(Complex64),
}

/// Eigenvalues `i f(n)`, `n <= N`, of the truncated generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumView {
    pub eigenvalues: Vec<Complex64>,
}

impl SpectrumView {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

pub fn spectrum(g: &GeneratorConfig, n: usize) -> Result<SpectrumView> {
    g.check_len(n)?;
    Ok(SpectrumView {
        eigenvalues: g.symbol.values()[..n].iter().map(|&f| I * f).collect(),
    })
}

fn check_vec(g: &GeneratorConfig, c: &CoeffVec) -> Result<()> {
    if c.len() > g.symbol.n_max() {
        return Err(LabError::DimensionMismatch {
            expected: g.symbol.n_max(),
            found: c.len(),
        });
    }
    Ok(())
}

fn map_diag(g: &GeneratorConfig, c: &CoeffVec, sym: impl Fn(f64) -> Complex64) -> Result<CoeffVec> {
    check_vec(g, c)?;
    let f = g.symbol.values();
    CoeffVec::new(c.iter().zip(f).map(|(z, &fn_)| sym(fn_) * z).collect())
}

/// `(i f(n) c_n)_n`.
pub fn apply_generator(g: &GeneratorConfig, c: &CoeffVec) -> Result<CoeffVec> {
    map_diag(g, c, |f| I * f)
}

/// `(e^{i t f(n)} c_n)_n`.
pub fn group_apply(g: &GeneratorConfig, t: f64, c: &CoeffVec) -> Result<CoeffVec> {
    map_diag(g, c, |f| Complex64::from_polar(1.0, t * f))
}

/// Index (1-based) and distance of the eigenvalue `i f(n)`, `n <= N`, closest to `λ`.
pub fn nearest_eigenvalue(g: &GeneratorConfig, lambda: Complex64, n: usize) -> Result<(usize, f64)> {
    g.check_len(n)?;
    let mut best = (1, f64::INFINITY);
    for (i, &f) in g.symbol.values()[..n].iter().enumerate() {
        let d = (I * f - lambda).norm();
        if d < best.1 {
            best = (i + 1, d);
        }
    }
    Ok(best)
}

/// `min_{n <= N} |i f(n) - λ|`.
pub fn spectrum_distance(g: &GeneratorConfig, lambda: Complex64, n: usize) -> Result<f64> {
    nearest_eigenvalue(g, lambda, n).map(|(_, d)| d)
}

fn check_resolvent_point(g: &GeneratorConfig, lambda: Complex64, n: usize) -> Result<()> {
    let (idx, d) = nearest_eigenvalue(g, lambda, n)?;
    if d <= SPECTRUM_TOL {
        return Err(LabError::SpectrumPoint {
            re: lambda.re,
            im: lambda.im,
            index: idx,
        });
    }
    Ok(())
}

/// `(c_n / (i f(n) - λ))_n`.
pub fn resolvent_apply(g: &GeneratorConfig, lambda: Complex64, c: &CoeffVec) -> Result<CoeffVec> {
    check_vec(g, c)?;
    check_resolvent_point(g, lambda, c.len())?;
    map_diag(g, c, |f| 1.0 / (I * f - lambda))
}

/// Diagonal entries `σ(f(n))`, `n <= N`, for the chosen operator.
pub fn symbol_diagonal(g: &GeneratorConfig, kind: OperatorKind, n: usize) -> Result<Vec<Complex64>> {
    g.check_len(n)?;
    if let OperatorKind::Resolvent(lambda) = kind {
        check_resolvent_point(g, lambda, n)?;
    }
    let f = &g.symbol.values()[..n];
    Ok(match kind {
        OperatorKind::Generator => f.iter().map(|&x| I * x).collect(),
        OperatorKind::Group(t) => f.iter().map(|&x| Complex64::from_polar(1.0, t * x)).collect(),
        OperatorKind::Resolvent(lambda) => f.iter().map(|&x| 1.0 / (I * x - lambda)).collect(),
    })
}

/// The truncated operator in isometric coordinates, as a matrix-free map.
pub fn truncated_operator(g: &GeneratorConfig, kind: OperatorKind, n: usize) -> Result<ConjugatedDiagonal> {
    let op = ConjugatedDiagonal::new(g.k(), symbol_diagonal(g, kind, n)?)?;
    match g.space.basis.transform() {
        None => Ok(op),
        Some(t) => op.with_transform(t.clone()),
    }
}

/// `Δ^k_N diag(σ(f(n))) (Δ^k_N)^{-1}` as a dense matrix (conjugated by the
/// basis transform when one is configured).
pub fn truncated_matrix(g: &GeneratorConfig, kind: OperatorKind, n: usize) -> Result<DMatrix<Complex64>> {
    g.space.require_hilbert("truncated matrix")?;
    Ok(truncated_operator(g, kind, n)?.to_dense())
}

/// Largest singular value of a dense matrix.
pub fn dense_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Eigenvalues of a dense complex matrix via its Schur form.
pub fn dense_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let schur = Schur::try_new(m.clone(), 1e-15, 10_000)
        .ok_or_else(|| LabError::Unsupported("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Largest distance between two equal-size multisets of points, pairing each
/// computed point greedily with the nearest unused expected point.
pub fn eigenvalue_deviation(computed: &[Complex64], expected: &[Complex64]) -> f64 {
    if computed.len() != expected.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; expected.len()];
    let mut worst = 0.0_f64;
    for z in computed {
        let mut best = (usize::MAX, f64::INFINITY);
        for (j, w) in expected.iter().enumerate() {
            if !used[j] {
                let d = (z - w).norm();
                if d < best.1 {
                    best = (j, d);
                }
            }
        }
        used[best.0] = true;
        worst = worst.max(best.1);
    }
    worst
}

/// `‖operator‖` on the truncation `span{e_1..e_N}` of `H_k`.
pub fn operator_norm(g: &GeneratorConfig, kind: OperatorKind, n: usize, method: NormMethod) -> Result<NormEstimate> {
    operator_norm_with(g, kind, n, method, &PowerOptions::default())
}

pub fn operator_norm_with(
    g: &GeneratorConfig,
    kind: OperatorKind,
    n: usize,
    method: NormMethod,
    opts: &PowerOptions,
) -> Result<NormEstimate> {
    g.space.require_hilbert("operator norm")?;
    let op = truncated_operator(g, kind, n)?;
    match method {
        NormMethod::MatrixFree => {
            if g.space.basis.is_orthonormal() {
                if let Some(s) = op.constant_symbol() {
                    return Ok(NormEstimate {
                        value: s.norm(),
                        iterations: 0,
                        method,
                        lower_bound_only: false,
                    });
                }
            }
            power_norm(&op, opts)
        }
        NormMethod::DenseSvd => {
            if n > DENSE_MAX_N {
                return Err(out_of_range(format!(
                    "dense SVD limited to N <= {DENSE_MAX_N}, got {n}"
                )));
            }
            Ok(NormEstimate {
                value: dense_norm(&op.to_dense()),
                iterations: 0,
                method,
                lower_bound_only: false,
            })
        }
    }
}

/// Lower bound on the truncated operator norm in any `ℓ_{p,k}` from random probing:
/// the largest ratio `‖B x‖_p / ‖x‖_p` over `samples` seeded random vectors and
/// the basis vectors `e_1..e_N` in difference coordinates.
pub fn probe_norm_lower_bound(
    g: &GeneratorConfig,
    kind: OperatorKind,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<NormEstimate> {
    let op = truncated_operator(g, kind, n)?;
    let p = g.space.p;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let mut best = 0.0_f64;
    let mut probe = |x: &[Complex64], out: &mut [Complex64]| {
        op.apply(x, out);
        let den = p_norm(x, p);
        if den > 0.0 {
            best = best.max(p_norm(out, p) / den);
        }
    };
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        e[j] = Complex64::new(1.0, 0.0);
        probe(&e, &mut out);
        e[j] = Complex64::new(0.0, 0.0);
    }
    for _ in 0..samples {
        let x = power::random_unit_vector(n, &mut rng);
        probe(&x, &mut out);
    }
    Ok(NormEstimate {
        value: best,
        iterations: samples + n,
        method: NormMethod::MatrixFree,
        lower_bound_only: true,
    })
}

/// Composite Simpson approximation of `∫_0^T e^{-λt} e^{A_k t} c dt`.
///
/// `steps` is the number of subintervals, rounded up to the next even number.
/// As `T -> ∞` the result tends to `(c_n / (λ - i f(n)))_n`, the negative of
/// [`resolvent_apply`].
pub fn laplace_resolvent(
    g: &GeneratorConfig,
    lambda: Complex64,
    c: &CoeffVec,
    horizon: f64,
    steps: usize,
) -> Result<CoeffVec> {
    if !(lambda.re > 0.0) {
        return Err(out_of_range(format!(
            "Laplace representation needs Re λ > 0, got {}",
            lambda.re
        )));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(out_of_range(format!("horizon T = {horizon} must be positive")));
    }
    if steps < 2 {
        return Err(out_of_range("Simpson rule needs at least 2 subintervals"));
    }
    check_vec(g, c)?;
    let steps = steps + steps % 2;
    let h = horizon / steps as f64;
    let mut acc = vec![CompensatedComplexSum::default(); c.len()];
    for i in 0..=steps {
        let t = i as f64 * h;
        let damp = (-lambda * t).exp() * simpson_weight(i, steps, h);
        let gc = group_apply(g, t, c)?;
        for (a, z) in acc.iter_mut().zip(gc.iter()) {
            a.add(damp * z);
        }
    }
    CoeffVec::new(acc.iter().map(|a| a.value()).collect())
}

/// Truncation scale `e^{-Re λ T} (1 + T)^k ‖e^{A_k T}‖_N` for the Laplace tail.
pub fn laplace_tail_bound(g: &GeneratorConfig, lambda: Complex64, horizon: f64, n: usize) -> Result<f64> {
    let gt = operator_norm(g, OperatorKind::Group(horizon), n, NormMethod::MatrixFree)?.value;
    Ok((-lambda.re * horizon).exp() * (1.0 + horizon).powi(g.k() as i32) * gt)
}

/// `‖x‖` in the configured space; re-exported here for operator-level code.
pub fn norm(g: &GeneratorConfig, c: &CoeffVec) -> Result<f64> {
    space_norm(&g.space, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1(n: usize) -> GeneratorConfig {
        GeneratorConfig::log(1, n).unwrap()
    }

    #[test]
    fn generator_on_basis_vectors() {
        let g = g1(5);
        let r = apply_generator(&g, &CoeffVec::basis(2, 5).unwrap()).unwrap();
        assert!((r[1] - I * 2f64.ln()).norm() < 1e-16);
        assert!(r.iter().enumerate().all(|(i, z)| i == 1 || *z == Complex64::new(0.0, 0.0)));
        let r = apply_generator(&g, &CoeffVec::basis(1, 5).unwrap()).unwrap();
        assert!(r.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn group_basics() {
        let g = g1(5);
        let c = CoeffVec::new((0..5).map(|i| Complex64::new(i as f64, 1.0)).collect()).unwrap();
        assert_eq!(group_apply(&g, 0.0, &c).unwrap(), c);
        let e2 = CoeffVec::basis(2, 5).unwrap();
        let r = group_apply(&g, std::f64::consts::PI, &e2).unwrap();
        let expected = Complex64::from_polar(1.0, std::f64::consts::PI * 2f64.ln());
        assert!((r[1] - expected).norm() < 1e-15);
    }

    #[test]
    fn resolvent_by_substitution() {
        let g = g1(2);
        let c = CoeffVec::from_real(&[1.0, 1.0]).unwrap();
        let r = resolvent_apply(&g, Complex64::new(1.0, 0.0), &c).unwrap();
        assert!((r[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-16);
        let expected = 1.0 / (I * 2f64.ln() - 1.0);
        assert!((r[1] - expected).norm() < 1e-16);
    }

    #[test]
    fn resolvent_rejects_eigenvalues() {
        let g = g1(5);
        let c = CoeffVec::basis(1, 5).unwrap();
        match resolvent_apply(&g, I * 3f64.ln(), &c) {
            Err(LabError::SpectrumPoint { index, .. }) => assert_eq!(index, 3),
            other => panic!("expected SpectrumPoint, got {other:?}"),
        }
        assert!(operator_norm(&g, OperatorKind::Resolvent(I * 5f64.ln()), 5, NormMethod::MatrixFree).is_err());
    }

    #[test]
    fn spectrum_distances() {
        let g = g1(10_000);
        let d = spectrum_distance(&g, Complex64::new(0.0, 2.0), 10_000).unwrap();
        assert!((d - (2.0 - 7f64.ln()).abs()).abs() < 1e-14);
        assert_eq!(spectrum_distance(&g, I * 5f64.ln(), 10).unwrap(), 0.0);
        assert_eq!(spectrum_distance(&g, Complex64::new(3.0, 0.0), 10).unwrap(), 3.0);
        let s = spectrum(&g, 10).unwrap();
        assert_eq!(s.len(), 10);
        assert!(s.eigenvalues.iter().all(|z| z.re == 0.0));
    }

    #[test]
    fn identity_group_has_unit_norm() {
        let g = GeneratorConfig::log(3, 300).unwrap();
        for n in [1, 7, 300] {
            let est = operator_norm(&g, OperatorKind::Group(0.0), n, NormMethod::MatrixFree).unwrap();
            assert_eq!(est.value, 1.0);
        }
        let m = truncated_matrix(&g, OperatorKind::Group(0.0), 12).unwrap();
        assert_eq!(m, DMatrix::identity(12, 12));
    }

    #[test]
    fn dense_path_limits_and_space() {
        let g = GeneratorConfig::log(1, 3000).unwrap();
        assert!(operator_norm(&g, OperatorKind::Group(1.0), 2049, NormMethod::DenseSvd).is_err());
        let gp = GeneratorConfig::new(SpaceConfig::banach(1, 3.0).unwrap(), Symbol::log(10).unwrap());
        assert!(matches!(
            operator_norm(&gp, OperatorKind::Group(1.0), 10, NormMethod::MatrixFree),
            Err(LabError::Unsupported(_))
        ));
        assert!(matches!(
            truncated_matrix(&gp, OperatorKind::Generator, 10),
            Err(LabError::Unsupported(_))
        ));
        let lb = probe_norm_lower_bound(&gp, OperatorKind::Group(1.0), 10, 20, 1).unwrap();
        assert!(lb.lower_bound_only && lb.value >= 1.0);
    }

    #[test]
    fn laplace_errors() {
        let g = g1(4);
        let c = CoeffVec::basis(1, 4).unwrap();
        assert!(laplace_resolvent(&g, Complex64::new(0.0, 1.0), &c, 10.0, 100).is_err());
        assert!(laplace_resolvent(&g, Complex64::new(1.0, 0.0), &c, 0.0, 100).is_err());
        assert!(laplace_resolvent(&g, Complex64::new(1.0, 0.0), &c, 1.0, 1).is_err());
    }

    #[test]
    fn deviation_matching() {
        let a = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let b = [Complex64::new(1.0, 1e-9), Complex64::new(0.0, 0.0)];
        assert!(eigenvalue_deviation(&a, &b) <= 1e-9);
        assert_eq!(eigenvalue_deviation(&a, &b[..1]), f64::INFINITY);
    }
}
