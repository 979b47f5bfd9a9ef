//! Difference calculus on finite sequences, the discrete Hardy ratio, and
//! finite-window diagnostics for the symbol classes `S_k`.
//!
//! Sequences are 1-indexed in the mathematics and 0-indexed in storage: entry
//! `c_n` lives at `entries()[n - 1]`. Every truncated sequence stands for the
//! formal series with `c_n = 0` beyond its length and `c_{1-j} = 0` for
//! `j >= 1`; the zero padding is implicit in the kernels, never stored.

use std::fmt;
use std::fs;
use std::ops::{Add, Index, Mul};
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::banded;
use crate::error::{out_of_range, LabError, Result};
use crate::numeric::CompensatedSum;

/// Largest order for which [`binom`] is computed in exact integer arithmetic.
pub const BINOM_MAX_ORDER: u64 = 62;

/// Binomial coefficient `C(k, m)`.
pub fn binom(k: u64, m: u64) -> Result<u64> {
    if k > BINOM_MAX_ORDER {
        return Err(out_of_range(format!(
            "binomial order {k} exceeds exactness cap {BINOM_MAX_ORDER}"
        )));
    }
    if m > k {
        return Err(out_of_range(format!("C({k}, {m}) requires m <= k")));
    }
    let m = m.min(k - m);
    let mut r: u128 = 1;
    for i in 0..m {
        r = r * u128::from(k - i) / u128::from(i + 1);
    }
    Ok(r as u64)
}

/// Truncated coefficient sequence `c_1..c_N` of a formal series `Σ c_n e_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVec(Vec<Complex64>);

impl CoeffVec {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(out_of_range("coefficient vector must have length >= 1"));
        }
        Ok(CoeffVec(entries))
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); len])
    }

    /// The basis vector `e_n` (1-based) inside a truncation of length `len`.
    pub fn basis(n: usize, len: usize) -> Result<Self> {
        if n == 0 || n > len {
            return Err(out_of_range(format!("basis index {n} not in 1..={len}")));
        }
        let mut v = Self::zeros(len)?;
        v.0[n - 1] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    /// `c_n` with the zero-padding convention for `n` outside `1..=N`.
    pub fn coeff(&self, n: i64) -> Complex64 {
        if n < 1 || n as usize > self.0.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.0[n as usize - 1]
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        CoeffVec(self.0.iter().map(|z| z * alpha).collect())
    }

    pub fn checked_add(&self, other: &CoeffVec) -> Result<Self> {
        if self.len() != other.len() {
            return Err(LabError::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(CoeffVec(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

impl Index<usize> for CoeffVec {
    type Output = Complex64;

    /// 0-based storage index.
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl Add for &CoeffVec {
    type Output = CoeffVec;

    /// Panics on length mismatch; use [`CoeffVec::checked_add`] for a fallible version.
    fn add(self, rhs: &CoeffVec) -> CoeffVec {
        self.checked_add(rhs).expect("CoeffVec length mismatch")
    }
}

impl Mul<Complex64> for &CoeffVec {
    type Output = CoeffVec;

    fn mul(self, rhs: Complex64) -> CoeffVec {
        self.scale(rhs)
    }
}

fn check_order(k: usize) -> Result<()> {
    if k < 1 {
        Err(out_of_range("difference order k must be >= 1"))
    } else {
        Ok(())
    }
}

/// `d_n = Σ_{j=0..k} (-1)^j C(k,j) c_{n-j}` with `c_{n-j} = 0` for `n - j < 1`.
pub fn diff_apply(k: usize, c: &CoeffVec) -> Result<CoeffVec> {
    check_order(k)?;
    let mut d = c.clone();
    banded::difference_in_place(k, &mut d.0);
    Ok(d)
}

/// Inverse of [`diff_apply`]: `k` repeated prefix sums.
pub fn diff_inverse(k: usize, d: &CoeffVec) -> Result<CoeffVec> {
    check_order(k)?;
    let mut c = d.clone();
    banded::prefix_sum_in_place(k, &mut c.0);
    Ok(c)
}

/// Ratio `Σ_n (A_n / n)^p / Σ_n a_n^p` with `A_n = a_1 + ... + a_n`.
///
/// The discrete Hardy inequality bounds it strictly by `(p / (p-1))^p`.
pub fn hardy_ratio(p: f64, a: &[f64]) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(out_of_range(format!("Hardy exponent p = {p} must exceed 1")));
    }
    if let Some((i, x)) = a.iter().enumerate().find(|(_, x)| !(**x >= 0.0) || !x.is_finite()) {
        return Err(out_of_range(format!(
            "a_{} = {x} is not a finite nonnegative number",
            i + 1
        )));
    }
    if a.iter().all(|&x| x == 0.0) {
        return Err(LabError::ZeroSequence);
    }
    let mut prefix = CompensatedSum::default();
    let mut num = CompensatedSum::default();
    let mut den = CompensatedSum::default();
    for (i, &x) in a.iter().enumerate() {
        prefix.add(x);
        num.add((prefix.value() / (i + 1) as f64).powf(p));
        den.add(x.powf(p));
    }
    Ok(num.value() / den.value())
}

/// `(p / (p - 1))^p`, the best constant in the discrete Hardy inequality.
pub fn hardy_constant(p: f64) -> f64 {
    (p / (p - 1.0)).powf(p)
}

/// How the symbol values were produced.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolKind {
    /// `f(n) = ln n`.
    Log,
    /// `f(n) = ln(1 + ln n)`.
    IteratedLog,
    /// `f(n) = sqrt(n)`, which violates `S_1` and does not yield a generator.
    SqrtWitness,
    /// Values read from a table; `source` is informational.
    Tabulated { source: Option<PathBuf> },
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolKind::Log => f.write_str("log"),
            SymbolKind::IteratedLog => f.write_str("iterated-log"),
            SymbolKind::SqrtWitness => f.write_str("sqrt-witness"),
            SymbolKind::Tabulated { .. } => f.write_str("tabulated"),
        }
    }
}

/// Eigenvalue-generating sequence `f(1), ..., f(N_max)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Symbol {
    kind: SymbolKind,
    values: Vec<f64>,
}

impl Symbol {
    fn analytic(kind: SymbolKind, n_max: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n_max == 0 {
            return Err(out_of_range("symbol window N_max must be >= 1"));
        }
        let values = (1..=n_max).map(|n| f(n as f64)).collect();
        Ok(Symbol { kind, values })
    }

    pub fn log(n_max: usize) -> Result<Self> {
        Self::analytic(SymbolKind::Log, n_max, f64::ln)
    }

    pub fn iterated_log(n_max: usize) -> Result<Self> {
        Self::analytic(SymbolKind::IteratedLog, n_max, |x| x.ln().ln_1p())
    }

    pub fn sqrt_witness(n_max: usize) -> Result<Self> {
        Self::analytic(SymbolKind::SqrtWitness, n_max, f64::sqrt)
    }

    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        Self::tabulated_from(values, None)
    }

    fn tabulated_from(values: Vec<f64>, source: Option<PathBuf>) -> Result<Self> {
        if values.is_empty() {
            return Err(out_of_range("tabulated symbol needs at least one value"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(out_of_range(format!("f({}) is not finite", i + 1)));
        }
        Ok(Symbol {
            kind: SymbolKind::Tabulated { source },
            values,
        })
    }

    /// Parses one real per line; line `i` holds `f(i)`.
    pub fn parse_table(text: &str, path: &Path) -> Result<Self> {
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            let v: f64 = t.parse().map_err(|_| LabError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                msg: format!("expected a real number, found {t:?}"),
            })?;
            if !v.is_finite() {
                return Err(LabError::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    msg: "value is not finite".into(),
                });
            }
            values.push(v);
        }
        Self::tabulated_from(values, Some(path.to_path_buf()))
    }

    pub fn load_table(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        Self::parse_table(&text, path)
    }

    /// Same kind on a different window. Tabulated symbols can only shrink.
    pub fn with_window(&self, n_max: usize) -> Result<Self> {
        match self.kind {
            SymbolKind::Log => Self::log(n_max),
            SymbolKind::IteratedLog => Self::iterated_log(n_max),
            SymbolKind::SqrtWitness => Self::sqrt_witness(n_max),
            SymbolKind::Tabulated { .. } => {
                if n_max == 0 || n_max > self.values.len() {
                    return Err(out_of_range(format!(
                        "tabulated symbol has {} values, cannot window to {n_max}",
                        self.values.len()
                    )));
                }
                Ok(Symbol {
                    kind: self.kind.clone(),
                    values: self.values[..n_max].to_vec(),
                })
            }
        }
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.kind
    }

    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// `f(n)` for `1 <= n <= N_max`.
    pub fn value(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Backward difference `Δ^j f(n) = Σ_{i=0..j} (-1)^i C(j,i) f(n-i)`, defined for
    /// `j + 1 <= n <= N_max` so that every argument is at least 1.
    ///
    /// For the log and square-root kinds at large `n` this sums the Taylor
    /// expansion of `f` about `n`, whose first `j` terms cancel identically;
    /// the direct alternating sum loses all significant digits once
    /// `n^j |Δ^j f|` is measured at `n ~ 10^6`.
    pub fn backward_difference(&self, j: usize, n: usize) -> Result<f64> {
        if j < 1 || n < j + 1 || n > self.n_max() {
            return Err(out_of_range(format!(
                "Δ^{j} f({n}) needs {} <= n <= {}",
                j + 1,
                self.n_max()
            )));
        }
        let nf = n as f64;
        let far = n >= 16 * j;
        match self.kind {
            SymbolKind::Log if far => Ok(taylor_difference(j, |m| {
                // f^(m)(n)/m! = (-1)^(m-1) / (m n^m)
                let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
                sign / (m as f64 * nf.powi(m as i32))
            })),
            SymbolKind::SqrtWitness if far => Ok(taylor_difference(j, |m| {
                // f^(m)(n)/m! = C(1/2, m) n^(1/2 - m)
                let mut c = 1.0;
                for r in 0..m {
                    c *= (0.5 - r as f64) / (r + 1) as f64;
                }
                c * nf.sqrt() / nf.powi(m as i32)
            })),
            SymbolKind::IteratedLog => {
                // f(n-i) - f(n) = ln1p(ln1p(-i/n) / (1 + ln n))
                let base = 1.0 + nf.ln();
                Ok(alternating_sum(j, |i| {
                    if i == 0 {
                        0.0
                    } else {
                        ((-(i as f64) / nf).ln_1p() / base).ln_1p()
                    }
                }))
            }
            _ => Ok(alternating_sum(j, |i| self.value(n - i))),
        }
    }
}

fn alternating_sum(j: usize, term: impl Fn(usize) -> f64) -> f64 {
    let mut c = 1.0;
    let mut acc = 0.0;
    for i in 0..=j {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * c * term(i);
        c = c * (j - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// `Σ_{m>=j} coef(m) (-1)^m S(j, m)` with `S(j, m) = Σ_i (-1)^i C(j,i) i^m
/// = (-1)^j j! S2(m, j)`, where `S2` are Stirling numbers of the second kind.
fn taylor_difference(j: usize, coef: impl Fn(usize) -> f64) -> f64 {
    const MAX_TERMS: usize = 400;
    // stirling[r] = S2(m, r) for the current m, r = 0..=j
    let mut stirling = vec![0.0_f64; j + 1];
    stirling[0] = 1.0; // S2(0, 0)
    let mut j_fact = 1.0;
    for r in 2..=j {
        j_fact *= r as f64;
    }
    let sign_j = if j % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc = 0.0;
    for m in 1..MAX_TERMS {
        for r in (1..=j).rev() {
            stirling[r] = r as f64 * stirling[r] + stirling[r - 1];
        }
        stirling[0] = 0.0;
        if m < j {
            continue;
        }
        let sign_m = if m % 2 == 0 { 1.0 } else { -1.0 };
        let term = coef(m) * sign_m * sign_j * j_fact * stirling[j];
        acc += term;
        if term.abs() <= 1e-18 * acc.abs() {
            break;
        }
    }
    acc
}

/// Finite-window report on membership of a symbol in `S_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkReport {
    pub k: usize,
    pub window: usize,
    /// `per_j_sup[j - 1] = sup_{j+1 <= n <= N} n^j |Δ^j f(n)|`. The first entry is
    /// the constant `C = sup n |Δ f(n)|`.
    pub per_j_sup: Vec<f64>,
    pub argmax: Vec<usize>,
    /// Some `n^j |Δ^j f(n)|` still rose by more than 1% within the last decade of the window.
    pub unbounded_flag: bool,
    /// The last decade of `f` exceeds every earlier value.
    pub tends_to_infinity_flag: bool,
}

impl SkReport {
    /// `C = sup_n n |Δ f(n)|` on the window.
    pub fn c_constant(&self) -> f64 {
        self.per_j_sup[0]
    }
}

/// Relative rise of the last-decade supremum that counts as "still growing".
const UNBOUNDED_RISE: f64 = 0.01;

/// Checks `{n^j Δ^j f(n)} ∈ ℓ_∞, 1 <= j <= k` and `f(n) -> ∞` on the window `n <= N`.
///
/// Only a prefix check: the flags are heuristics about the tail, never proofs.
pub fn sk_diagnostics(f: &Symbol, k: usize, window: usize) -> Result<SkReport> {
    check_order(k)?;
    if window > f.n_max() {
        return Err(out_of_range(format!(
            "window {window} exceeds symbol range {}",
            f.n_max()
        )));
    }
    if window < k + 1 {
        return Err(out_of_range(format!(
            "window {window} too short for order {k} (need >= {})",
            k + 1
        )));
    }
    let decade_start = (window / 10).max(1);
    let mut per_j_sup = Vec::with_capacity(k);
    let mut argmax = Vec::with_capacity(k);
    let mut unbounded = false;
    for j in 1..=k {
        let mut sup = 0.0_f64;
        let mut arg = j + 1;
        let mut sup_head = 0.0_f64;
        let mut sup_tail = 0.0_f64;
        for n in (j + 1)..=window {
            let v = (n as f64).powi(j as i32) * f.backward_difference(j, n)?.abs();
            if v > sup {
                sup = v;
                arg = n;
            }
            if n < decade_start {
                sup_head = sup_head.max(v);
            } else {
                sup_tail = sup_tail.max(v);
            }
        }
        if sup_tail > sup_head * (1.0 + UNBOUNDED_RISE) && decade_start > j + 1 {
            unbounded = true;
        }
        per_j_sup.push(sup);
        argmax.push(arg);
    }
    let vals = &f.values()[..window];
    let tends_to_infinity = window >= 10 && {
        let head = vals[..decade_start].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let tail = vals[decade_start..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        tail > head
    };
    Ok(SkReport {
        k,
        window,
        per_j_sup,
        argmax,
        unbounded_flag: unbounded,
        tends_to_infinity_flag: tends_to_infinity,
    })
}
