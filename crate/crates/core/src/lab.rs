//! Named experiments on finite truncations: projection norms, resolvent
//! blow-up, group growth, vertical-line integrals and the non-generation witness.
//!
//! Every scan evaluates its grid points in parallel and assembles the results
//! in grid order, so output does not depend on scheduling.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diffseq::{sk_diagnostics, CoeffVec, Symbol};
use crate::error::{at_point, out_of_range, LabError, Result};
use crate::generator::{
    dense_eigenvalues, laplace_resolvent, laplace_tail_bound, operator_norm_with, resolvent_apply,
    spectrum_distance, symbol_diagonal, truncated_matrix, ConjugatedDiagonal, GeneratorConfig,
    LinearOperator, NormEstimate, NormMethod, OperatorKind, PowerOptions,
};
use crate::hkspace::{minimality_distance, space_norm, SpaceConfig};
use crate::numeric::{least_squares_line, norm2};
use crate::quad::adaptive_simpson;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A partition of `{1..N}` into disjoint blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grouping {
    blocks: Vec<Vec<usize>>,
    len: usize,
}

impl Grouping {
    pub fn new(blocks: Vec<Vec<usize>>, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(LabError::InvalidPartition("empty index set".into()));
        }
        let mut seen = vec![false; len];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(LabError::InvalidPartition(format!("block {} is empty", b + 1)));
            }
            for &j in block {
                if j < 1 || j > len {
                    return Err(LabError::InvalidPartition(format!(
                        "index {j} in block {} outside 1..={len}",
                        b + 1
                    )));
                }
                if seen[j - 1] {
                    return Err(LabError::InvalidPartition(format!("index {j} appears twice")));
                }
                seen[j - 1] = true;
            }
        }
        if let Some(miss) = seen.iter().position(|s| !s) {
            return Err(LabError::InvalidPartition(format!("index {} not covered", miss + 1)));
        }
        Ok(Grouping { blocks, len })
    }

    /// Consecutive blocks of `size` indices; the last block may be shorter.
    pub fn uniform(size: usize, len: usize) -> Result<Self> {
        if size == 0 {
            return Err(LabError::InvalidPartition("block size must be >= 1".into()));
        }
        let blocks = (1..=len)
            .step_by(size)
            .map(|a| (a..=(a + size - 1).min(len)).collect())
            .collect();
        Self::new(blocks, len)
    }

    /// One comma-separated block of 1-based indices per line; blank lines ignored.
    pub fn parse(text: &str, len: usize, path: &Path) -> Result<Self> {
        let mut blocks = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let block = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<usize>().map_err(|_| LabError::Parse {
                        path: path.to_path_buf(),
                        line: i + 1,
                        msg: format!("expected a positive index, found {:?}", tok.trim()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
        }
        Self::new(blocks, len)
    }

    pub fn load(path: impl AsRef<Path>, len: usize) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&fs::read_to_string(path)?, len, path)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `K = max |A_n|`.
    pub fn max_block(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Measured values over a grid, with a log-log fit where the experiment defines one.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub fitted_slope: Option<f64>,
    /// RMS residual of the fit.
    pub residual: Option<f64>,
    /// Whether the values move monotonically in the direction the experiment expects.
    pub monotone_flag: bool,
    /// Further per-point columns, in output order.
    pub columns: Vec<(String, Vec<f64>)>,
}

impl ScanResult {
    fn new(grid: Vec<f64>, values: Vec<f64>) -> Self {
        ScanResult {
            grid,
            values,
            fitted_slope: None,
            residual: None,
            monotone_flag: false,
            columns: Vec::new(),
        }
    }

    fn fit(&mut self, x: &[f64], y: &[f64]) {
        if let Some((s, _, r)) = least_squares_line(x, y) {
            self.fitted_slope = Some(s);
            self.residual = Some(r);
        }
    }

    fn push_column(&mut self, name: &str, v: Vec<f64>) {
        self.columns.push((name.to_string(), v));
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, v)| v.as_slice())
    }
}

pub fn is_nondecreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] >= w[0])
}

pub fn is_strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

fn ascending_grid(grid: &[f64], what: &str) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(out_of_range(format!("{what} grid is empty")));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(out_of_range(format!("{what} grid has non-finite entries")));
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    if !is_strictly_increasing(&g) {
        return Err(out_of_range(format!("{what} grid has repeated points")));
    }
    Ok(g)
}

fn indicator_operator(space: &SpaceConfig, len: usize, members: &[usize]) -> Result<ConjugatedDiagonal> {
    let mut diag = vec![Complex64::new(0.0, 0.0); len];
    for &j in members {
        diag[j - 1] = Complex64::new(1.0, 0.0);
    }
    let op = ConjugatedDiagonal::new(space.k, diag)?;
    match space.basis.transform() {
        None => Ok(op),
        Some(t) => op.with_transform(t.clone()),
    }
}

fn estimate(space: &SpaceConfig, op: &ConjugatedDiagonal, method: NormMethod, opts: &PowerOptions) -> Result<f64> {
    match method {
        NormMethod::MatrixFree => {
            if let (Some(s), true) = (op.constant_symbol(), space.basis.is_orthonormal()) {
                return Ok(s.norm());
            }
            Ok(crate::generator::power_norm(op, opts)?.value)
        }
        NormMethod::DenseSvd => Ok(crate::generator::dense_norm(&op.to_dense())),
    }
}

/// `‖Σ_{j ∈ A_n} e_j‖` for every block, inside the truncation `1..=N`.
pub fn block_norms(space: &SpaceConfig, grouping: &Grouping) -> Result<Vec<f64>> {
    grouping
        .blocks()
        .par_iter()
        .map(|b| {
            let mut c = CoeffVec::zeros(grouping.len())?;
            for &j in b {
                c.entries_mut()[j - 1] = Complex64::new(1.0, 0.0);
            }
            space_norm(space, &c)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialSumReport {
    /// Norm of each block indicator.
    pub block_norms: Vec<f64>,
    /// `1 / sqrt(M)` from the basis model.
    pub block_lower_bound: f64,
    /// Grid: number of leading blocks `M`; values: `‖S_M‖`.
    pub prefix: ScanResult,
}

/// Norms of block indicators and of the partial-sum projections
/// `S_M = Σ_{n <= M} P_n` onto the first `M` blocks.
pub fn partial_sum_projection_norms(
    space: &SpaceConfig,
    grouping: &Grouping,
    prefixes: &[usize],
    method: NormMethod,
    opts: &PowerOptions,
) -> Result<PartialSumReport> {
    space.require_hilbert("partial-sum norms")?;
    let nb = grouping.blocks().len();
    if let Some(&bad) = prefixes.iter().find(|&&m| m < 1 || m > nb) {
        return Err(out_of_range(format!("prefix {bad} not in 1..={nb}")));
    }
    let grid = ascending_grid(&prefixes.iter().map(|&m| m as f64).collect::<Vec<_>>(), "prefix")?;
    let values = grid
        .par_iter()
        .map(|&m| {
            let members: Vec<usize> = grouping.blocks()[..m as usize].concat();
            let op = indicator_operator(space, grouping.len(), &members)?;
            estimate(space, &op, method, opts).map_err(at_point("M", m))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut prefix = ScanResult::new(grid.clone(), values);
    let lx: Vec<f64> = grid.iter().map(|m| m.ln()).collect();
    let ly: Vec<f64> = prefix.values.iter().map(|v| v.ln()).collect();
    prefix.fit(&lx, &ly);
    prefix.monotone_flag = is_nondecreasing(&prefix.values);
    Ok(PartialSumReport {
        block_norms: block_norms(space, grouping)?,
        block_lower_bound: 1.0 / space.basis.upper().sqrt(),
        prefix,
    })
}

fn norm_of(g: &GeneratorConfig, kind: OperatorKind, n: usize, opts: &PowerOptions) -> Result<NormEstimate> {
    operator_norm_with(g, kind, n, NormMethod::MatrixFree, opts)
}

/// Closed-form resolvent bound for `k = 1` with an orthonormal initial basis:
/// `sqrt(2) sqrt(a^2 + 4 C^2) / a^2`, `a = dist(λ, σ)`, `C = sup n |Δ f(n)|`.
pub fn first_order_resolvent_bound(dist: f64, c: f64) -> f64 {
    2f64.sqrt() * (dist * dist + 4.0 * c * c).sqrt() / (dist * dist)
}

/// `‖R(a + i f(anchor_n))‖` over a grid of `a > 0`.
///
/// Columns: `lower_bound = 1 / dist(λ, σ_N)`, `remark_bound` (the closed-form
/// first-order bound, NaN unless `k = 1` with an orthonormal basis) and
/// `violated` (1 when a bound fails). The slope is fitted to
/// `log ‖R‖` against `log(1/a)`; the monotone flag records that the norm grows
/// as `a` decreases.
pub fn resolvent_blowup_scan(
    g: &GeneratorConfig,
    anchor_n: usize,
    a_grid: &[f64],
    n: usize,
    opts: &PowerOptions,
) -> Result<ScanResult> {
    if anchor_n < 1 || anchor_n > n {
        return Err(out_of_range(format!("anchor {anchor_n} not in 1..={n}")));
    }
    let grid = ascending_grid(a_grid, "a")?;
    if grid[0] <= 0.0 {
        return Err(out_of_range("a grid must be positive"));
    }
    let remark = g.k() == 1 && g.space.basis.is_orthonormal() && n >= 2;
    let c = if remark {
        sk_diagnostics(&g.symbol, 1, n)?.c_constant()
    } else {
        f64::NAN
    };
    let im = g.symbol.value(anchor_n);
    let rows = grid
        .par_iter()
        .map(|&a| {
            let lambda = Complex64::new(a, im);
            let dist = spectrum_distance(g, lambda, n)?;
            let norm = norm_of(g, OperatorKind::Resolvent(lambda), n, opts)
                .map_err(at_point("a", a))?
                .value;
            Ok((norm, 1.0 / dist, if remark { first_order_resolvent_bound(dist, c) } else { f64::NAN }))
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let lower: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let upper: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let violated = rows
        .iter()
        .map(|&(v, lo, up)| if v < lo - 1e-8 || v > up { 1.0 } else { 0.0 })
        .collect();
    let mut scan = ScanResult::new(grid.clone(), values);
    let lx: Vec<f64> = grid.iter().map(|a| -a.ln()).collect();
    let ly: Vec<f64> = scan.values.iter().map(|v| v.ln()).collect();
    scan.fit(&lx, &ly);
    scan.monotone_flag = scan.values.windows(2).all(|w| w[1] <= w[0]);
    scan.push_column("lower_bound", lower);
    scan.push_column("remark_bound", upper);
    scan.push_column("violated", violated);
    Ok(scan)
}

/// `g(t) = ‖e^{A_k t}‖` on the truncation, over a grid of `t`.
///
/// Column `log_g_over_t` is `log g(t) / t` (NaN at `t = 0`). The slope is
/// fitted to `log g` against `log |t|` over the nonzero grid points.
pub fn group_growth_scan(g: &GeneratorConfig, t_grid: &[f64], n: usize, opts: &PowerOptions) -> Result<ScanResult> {
    let grid = ascending_grid(t_grid, "t")?;
    let values = grid
        .par_iter()
        .map(|&t| Ok(norm_of(g, OperatorKind::Group(t), n, opts).map_err(at_point("t", t))?.value))
        .collect::<Result<Vec<_>>>()?;
    let mut scan = ScanResult::new(grid.clone(), values);
    let (lx, ly): (Vec<f64>, Vec<f64>) = grid
        .iter()
        .zip(&scan.values)
        .filter(|(t, _)| **t != 0.0)
        .map(|(t, v)| (t.abs().ln(), v.ln()))
        .unzip();
    scan.fit(&lx, &ly);
    scan.monotone_flag = is_nondecreasing(&scan.values);
    let rate = grid
        .iter()
        .zip(&scan.values)
        .map(|(&t, &v)| if t == 0.0 { f64::NAN } else { v.ln() / t })
        .collect();
    scan.push_column("log_g_over_t", rate);
    Ok(scan)
}

/// `‖e^{A_k t}‖` (or any other operator) on `span{e_1..e_N}` for each `N` in a grid.
///
/// The slope is fitted to `log value` against `log N`.
pub fn truncation_scan(
    g: &GeneratorConfig,
    kind: OperatorKind,
    n_grid: &[usize],
    opts: &PowerOptions,
) -> Result<ScanResult> {
    let grid = ascending_grid(&n_grid.iter().map(|&n| n as f64).collect::<Vec<_>>(), "N")?;
    let values = grid
        .par_iter()
        .map(|&n| Ok(norm_of(g, kind, n as usize, opts).map_err(at_point("N", n))?.value))
        .collect::<Result<Vec<_>>>()?;
    let mut scan = ScanResult::new(grid.clone(), values);
    let lx: Vec<f64> = grid.iter().map(|n| n.ln()).collect();
    let ly: Vec<f64> = scan.values.iter().map(|v| v.ln()).collect();
    scan.fit(&lx, &ly);
    scan.monotone_flag = is_nondecreasing(&scan.values);
    Ok(scan)
}

/// `g_N(t)` for `f(n) = sqrt(n)`, `k = 1`, over a grid of truncations.
pub fn nongeneration_witness(n_grid: &[usize], t: f64, opts: &PowerOptions) -> Result<ScanResult> {
    let n_max = n_grid.iter().copied().max().ok_or_else(|| out_of_range("N grid is empty"))?;
    let g = GeneratorConfig::new(SpaceConfig::hilbert(1)?, Symbol::sqrt_witness(n_max)?);
    truncation_scan(&g, OperatorKind::Group(t), n_grid, opts)
}

/// Which vertical-line integral to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralKind {
    /// `∫ ‖R(a + is) x‖^2 ds`.
    Resolvent,
    /// `∫ |⟨R(a + is)^2 x, y⟩| ds`.
    ResolventSquared,
    /// `∫ ‖R(a + is)^* y‖^2 ds`.
    Adjoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralOptions {
    /// Integrate over `[-S, S]`; `None` integrates over the whole line.
    pub half_width: Option<f64>,
    /// Absolute tolerance per adaptive Simpson panel.
    pub tol: f64,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        IntegralOptions {
            half_width: None,
            tol: 1e-8,
        }
    }
}

fn padded(c: &CoeffVec, n: usize) -> Result<CoeffVec> {
    if c.len() > n {
        return Err(LabError::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    let mut v = c.entries().to_vec();
    v.resize(n, Complex64::new(0.0, 0.0));
    CoeffVec::new(v)
}

struct VerticalIntegrand<'a> {
    g: &'a GeneratorConfig,
    kind: IntegralKind,
    a: f64,
    x: CoeffVec,
    /// Isometric coordinates of `y`.
    dy: Vec<Complex64>,
}

impl VerticalIntegrand<'_> {
    fn eval(&self, s: f64) -> Result<f64> {
        let lambda = Complex64::new(self.a, s);
        let cfg = &self.g.space;
        match self.kind {
            IntegralKind::Resolvent => {
                let r = resolvent_apply(self.g, lambda, &self.x)?;
                Ok(norm2(&cfg.isometric_coords(&r)?).powi(2))
            }
            IntegralKind::ResolventSquared => {
                let r = resolvent_apply(self.g, lambda, &self.x)?;
                let r2 = resolvent_apply(self.g, lambda, &r)?;
                let d = cfg.isometric_coords(&r2)?;
                let ip: Complex64 = d.iter().zip(&self.dy).map(|(u, w)| u * w.conj()).sum();
                Ok(ip.norm())
            }
            IntegralKind::Adjoint => {
                let n = self.dy.len();
                let op = ConjugatedDiagonal::new(cfg.k, symbol_diagonal(self.g, OperatorKind::Resolvent(lambda), n)?)?;
                let op = match cfg.basis.transform() {
                    None => op,
                    Some(t) => op.with_transform(t.clone())?,
                };
                let mut out = vec![Complex64::new(0.0, 0.0); n];
                op.apply_adjoint(&self.dy, &mut out);
                Ok(norm2(&out).powi(2))
            }
        }
    }

    /// `lim_{|s| -> ∞} s^2 h(s)`.
    fn tail_limit(&self) -> Result<f64> {
        let cfg = &self.g.space;
        Ok(match self.kind {
            IntegralKind::Resolvent => norm2(&cfg.isometric_coords(&self.x)?).powi(2),
            IntegralKind::ResolventSquared => {
                let dx = cfg.isometric_coords(&self.x)?;
                dx.iter().zip(&self.dy).map(|(u, w)| u * w.conj()).sum::<Complex64>().norm()
            }
            IntegralKind::Adjoint => norm2(&self.dy).powi(2),
        })
    }
}

fn integrate<F: Fn(f64) -> Result<f64>>(h: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let err = std::cell::RefCell::new(None);
    let v = adaptive_simpson(
        &|s| match h(s) {
            Ok(v) => v,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        a,
        b,
        tol,
    )?;
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// One vertical-line integral at abscissa `a > 0`, on the truncation of length `n`.
///
/// `x` and `y` are zero-padded to length `n`. Breakpoints are placed at the
/// symbol values so that no resonance at `s = f(m)` falls between samples.
/// Over the whole line the tails `|s| > S_0` are mapped to `(0, 1]` by
/// `s = S_0 / v`, using the exact limit of `s^2 h(s)` at `v = 0`.
pub fn vertical_integral(
    g: &GeneratorConfig,
    kind: IntegralKind,
    a: f64,
    x: &CoeffVec,
    y: &CoeffVec,
    n: usize,
    opts: &IntegralOptions,
) -> Result<f64> {
    g.space.require_hilbert("vertical integral")?;
    if !(a > 0.0) || !a.is_finite() {
        return Err(out_of_range(format!("abscissa a = {a} must be positive")));
    }
    if n > g.symbol.n_max() {
        return Err(out_of_range(format!("truncation {n} exceeds symbol window {}", g.symbol.n_max())));
    }
    let x = padded(x, n)?;
    let y = padded(y, n)?;
    let dy = g.space.isometric_coords(&y)?;
    let h = VerticalIntegrand { g, kind, a, x, dy };
    let f = &g.symbol.values()[..n];
    let fmax = f.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let s0 = match opts.half_width {
        Some(s) if s > 0.0 => s,
        Some(s) => return Err(out_of_range(format!("half-width S = {s} must be positive"))),
        None => fmax + 1.0 + a,
    };
    let mut breaks: Vec<f64> = vec![-s0, s0];
    let mut last = f64::NEG_INFINITY;
    let mut sorted: Vec<f64> = f.to_vec();
    sorted.sort_by(f64::total_cmp);
    for v in sorted {
        if v - last > 0.5 * a && v.abs() < s0 {
            breaks.push(v);
            last = v;
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let tol = opts.tol;
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += integrate(&|s| h.eval(s), w[0], w[1], tol)?;
    }
    if opts.half_width.is_none() {
        let lim = h.tail_limit()?;
        let h = &h;
        let tail = |sign: f64| {
            move |v: f64| -> Result<f64> {
                if v == 0.0 {
                    Ok(lim / s0)
                } else {
                    Ok(h.eval(sign * s0 / v)? * s0 / (v * v))
                }
            }
        };
        total += integrate(&tail(1.0), 0.0, 1.0, tol)?;
        total += integrate(&tail(-1.0), 0.0, 1.0, tol)?;
    }
    Ok(total)
}

/// Vertical-line integrals over a grid of `a`.
///
/// Values are `I_1(a) = ∫ ‖R x‖^2`. Columns hold `I_2(a) = ∫ |⟨R^2 x, y⟩|`,
/// the adjoint variant `∫ ‖R^* y‖^2`, and each integral scaled by
/// `a / (1 + a^{-2k})`. The slope is fitted to `log I_1` against `log(1/a)`.
pub fn vertical_integral_scan(
    g: &GeneratorConfig,
    a_grid: &[f64],
    x: &CoeffVec,
    y: &CoeffVec,
    n: usize,
    opts: &IntegralOptions,
) -> Result<ScanResult> {
    let grid = ascending_grid(a_grid, "a")?;
    let kinds = [IntegralKind::Resolvent, IntegralKind::ResolventSquared, IntegralKind::Adjoint];
    let jobs: Vec<(usize, IntegralKind)> = (0..grid.len()).flat_map(|i| kinds.map(|k| (i, k))).collect();
    let vals = jobs
        .par_iter()
        .map(|&(i, kind)| vertical_integral(g, kind, grid[i], x, y, n, opts).map_err(at_point("a", grid[i])))
        .collect::<Result<Vec<_>>>()?;
    let col = |j: usize| -> Vec<f64> { (0..grid.len()).map(|i| vals[3 * i + j]).collect() };
    let k = g.k() as i32;
    let shape = |a: f64| a / (1.0 + a.powi(-2 * k));
    let scaled = |v: &[f64]| -> Vec<f64> { v.iter().zip(&grid).map(|(v, &a)| v * shape(a)).collect() };
    let (i1, i2, adj) = (col(0), col(1), col(2));
    let mut scan = ScanResult::new(grid.clone(), i1.clone());
    let lx: Vec<f64> = grid.iter().map(|a| -a.ln()).collect();
    let ly: Vec<f64> = i1.iter().map(|v| v.ln()).collect();
    scan.fit(&lx, &ly);
    scan.monotone_flag = i1.windows(2).all(|w| w[1] <= w[0]);
    scan.push_column("scaled_i1", scaled(&i1));
    scan.push_column("i2", i2.clone());
    scan.push_column("scaled_i2", scaled(&i2));
    scan.push_column("i1_adjoint", adj.clone());
    scan.push_column("scaled_i1_adjoint", scaled(&adj));
    Ok(scan)
}

/// Ratio between the largest and smallest of the running maxima of `v`,
/// traversed from the last entry to the first.
pub fn running_max_spread(v: &[f64]) -> f64 {
    let mut m = f64::NEG_INFINITY;
    let mut first = None;
    for &x in v.iter().rev() {
        m = m.max(x);
        first.get_or_insert(m);
    }
    match first {
        Some(f) => m / f,
        None => f64::NAN,
    }
}

/// `dist(e_n, span{e_j : j != n})` for each index in the grid, with column
/// `predicted = n^{-1/2}`. The slope is fitted to `log dist` against `log n`.
pub fn minimality_scan(space: &SpaceConfig, indices: &[usize], n: usize) -> Result<ScanResult> {
    let grid = ascending_grid(&indices.iter().map(|&i| i as f64).collect::<Vec<_>>(), "index")?;
    let values = grid
        .par_iter()
        .map(|&i| minimality_distance(space, i as usize, n))
        .collect::<Result<Vec<_>>>()?;
    let mut scan = ScanResult::new(grid.clone(), values);
    let lx: Vec<f64> = grid.iter().map(|i| i.ln()).collect();
    let ly: Vec<f64> = scan.values.iter().map(|v| v.ln()).collect();
    scan.fit(&lx, &ly);
    scan.monotone_flag = scan.values.windows(2).all(|w| w[1] <= w[0]);
    scan.push_column("predicted", grid.iter().map(|i| i.powf(-0.5)).collect());
    Ok(scan)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMapping {
    /// Eigenvalues of the dense truncated group matrix.
    pub computed: Vec<Complex64>,
    /// `e^{i t f(n)}`, `n <= N`.
    pub expected: Vec<Complex64>,
    pub max_deviation: f64,
}

/// Eigenvalues of the truncated group matrix against `e^{i t f(n)}`.
pub fn spectral_mapping_check(g: &GeneratorConfig, t: f64, n: usize) -> Result<SpectralMapping> {
    let m = truncated_matrix(g, OperatorKind::Group(t), n)?;
    let computed = dense_eigenvalues(&m)?;
    let expected: Vec<Complex64> = g.symbol.values()[..n].iter().map(|&f| (I * t * f).exp()).collect();
    let max_deviation = crate::generator::eigenvalue_deviation(&computed, &expected);
    Ok(SpectralMapping {
        computed,
        expected,
        max_deviation,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceCheck {
    /// Simpson approximation of `∫_0^T e^{-λt} e^{A_k t} c dt`.
    pub quadrature: CoeffVec,
    /// `‖quadrature + R(λ) c‖` in the space norm.
    pub residual: f64,
    /// `e^{-Re λ T} (1 + T)^k ‖e^{A_k T}‖_N`.
    pub tail_bound: f64,
    /// `|quadrature_1 - c_1 / (λ - i f(1))|`.
    pub first_component_error: f64,
}

/// Reconstructs `-R(λ) c` from the group through the Laplace integral.
pub fn laplace_check(g: &GeneratorConfig, lambda: Complex64, c: &CoeffVec, horizon: f64, steps: usize) -> Result<LaplaceCheck> {
    let q = laplace_resolvent(g, lambda, c, horizon, steps)?;
    let r = resolvent_apply(g, lambda, c)?;
    let sum = q.checked_add(&r)?;
    let residual = space_norm(&g.space, &sum)?;
    let tail_bound = laplace_tail_bound(g, lambda, horizon, c.len())?;
    let first = c[0] / (lambda - I * g.symbol.value(1));
    Ok(LaplaceCheck {
        first_component_error: (q[0] - first).norm(),
        quadrature: q,
        residual,
        tail_bound,
    })
}

/// Test sequences for the discrete Hardy inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HardySequence {
    /// `δ_1`.
    SingleSpike,
    /// `a_n = n^α`.
    Power(f64),
    /// Independent uniform `[0, 1)` entries from a seeded generator.
    Random(u64),
}

impl HardySequence {
    pub fn generate(&self, n: usize) -> Vec<f64> {
        match *self {
            HardySequence::SingleSpike => {
                let mut a = vec![0.0; n];
                if n > 0 {
                    a[0] = 1.0;
                }
                a
            }
            HardySequence::Power(alpha) => (1..=n).map(|i| (i as f64).powf(alpha)).collect(),
            HardySequence::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n).map(|_| rng.random::<f64>()).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouping_validation() {
        assert!(Grouping::new(vec![vec![1, 2], vec![3]], 3).is_ok());
        assert!(matches!(Grouping::new(vec![vec![1, 2], vec![2, 3]], 3), Err(LabError::InvalidPartition(_))));
        assert!(matches!(Grouping::new(vec![vec![1], vec![3]], 3), Err(LabError::InvalidPartition(_))));
        assert!(matches!(Grouping::new(vec![vec![1, 4]], 3), Err(LabError::InvalidPartition(_))));
        let u = Grouping::uniform(3, 7).unwrap();
        assert_eq!(u.blocks(), &[vec![1, 2, 3], vec![4, 5, 6], vec![7]]);
        assert_eq!(u.max_block(), 3);
        let p = Grouping::parse("1, 3\n2\n\n4,5\n", 5, Path::new("g.txt")).unwrap();
        assert_eq!(p.blocks().len(), 3);
        assert!(matches!(
            Grouping::parse("1,x\n", 1, Path::new("g.txt")),
            Err(LabError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn singleton_prefix_law() {
        let space = SpaceConfig::hilbert(1).unwrap();
        let grouping = Grouping::uniform(1, 8).unwrap();
        let r = partial_sum_projection_norms(&space, &grouping, &[1, 2, 3], NormMethod::DenseSvd, &PowerOptions::default())
            .unwrap();
        for (m, v) in r.prefix.grid.iter().zip(&r.prefix.values) {
            assert!((v - (m + 1.0).sqrt()).abs() < 1e-12);
        }
        assert!(r.block_norms[..7].iter().all(|v| (v - 2f64.sqrt()).abs() < 1e-15));
        assert_eq!(r.block_norms[7], 1.0);
    }

    #[test]
    fn first_component_integral() {
        let g = GeneratorConfig::log(1, 16).unwrap();
        let e1 = CoeffVec::basis(1, 1).unwrap();
        // R e_1 = -e_1 / λ and ‖e_1‖^2 = 2, so I_1(a) = 2π / a.
        for a in [0.5, 1.0, 2.0] {
            let v = vertical_integral(&g, IntegralKind::Resolvent, a, &e1, &e1, 16, &IntegralOptions::default()).unwrap();
            assert!((v - 2.0 * std::f64::consts::PI / a).abs() < 1e-6, "a={a}: {v}");
        }
    }

    #[test]
    fn running_max() {
        assert_eq!(running_max_spread(&[1.0, 2.0, 4.0]), 1.0);
        assert_eq!(running_max_spread(&[4.0, 2.0, 1.0]), 4.0);
    }

    #[test]
    fn hardy_sequences() {
        assert_eq!(HardySequence::SingleSpike.generate(3), [1.0, 0.0, 0.0]);
        assert_eq!(HardySequence::Power(-1.0).generate(2), [1.0, 0.5]);
        assert_eq!(HardySequence::Random(3).generate(5), HardySequence::Random(3).generate(5));
    }
}
