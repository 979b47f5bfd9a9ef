//! Command-line front end: one subcommand per experiment, CSV output with a
//! provenance comment, exit status 0 (contract holds), 2 (contract violated)
//! or 1 (usage or runtime error).

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::diffseq::{hardy_constant, hardy_ratio, sk_diagnostics, CoeffVec, Symbol};
use crate::error::{out_of_range, LabError, Result};
use crate::generator::{
    laplace_resolvent, operator_norm_with, probe_norm_lower_bound, resolvent_apply, spectrum_distance,
    GeneratorConfig, NormMethod, OperatorKind, PowerOptions, DEFAULT_SEED,
};
use crate::hkspace::{BasisModel, SpaceConfig};
use crate::lab::{
    block_norms, first_order_resolvent_bound, group_growth_scan, is_strictly_increasing,
    laplace_check, minimality_scan, partial_sum_projection_norms, resolvent_blowup_scan, running_max_spread,
    spectral_mapping_check, truncation_scan, vertical_integral_scan, Grouping, HardySequence, IntegralOptions,
    ScanResult,
};
use crate::numeric::logspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymbolArg {
    Log,
    IteratedLog,
    Sqrt,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    MatrixFree,
    DenseSvd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Discrete Hardy ratio of a test sequence.
    Hardy,
    /// Finite-window S_k diagnostics of the symbol.
    SkCheck,
    /// Norm of the group e^{A_k t} on a truncation.
    NormGroup,
    /// Norm of the resolvent at --lambda on a truncation.
    NormResolvent,
    /// Resolvent norm along a + i f(anchor-n) as a -> 0.
    Blowup,
    /// Distance from e_n to the span of the other basis vectors.
    Minimality,
    /// Norms of partial-sum projections onto leading blocks.
    PartialSums,
    /// Norms of block indicators.
    Blocks,
    /// Laplace-integral reconstruction of the resolvent.
    Laplace,
    /// Vertical-line resolvent integrals over a grid of abscissae.
    IntegralScan,
    /// Eigenvalues of truncated group matrices against e^{i t f(n)}.
    SpectrumMap,
    /// Group norm over growing truncations for f(n) = sqrt(n).
    NongenWitness,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Hardy => "hardy",
            Command::SkCheck => "sk-check",
            Command::NormGroup => "norm-group",
            Command::NormResolvent => "norm-resolvent",
            Command::Blowup => "blowup",
            Command::Minimality => "minimality",
            Command::PartialSums => "partial-sums",
            Command::Blocks => "blocks",
            Command::Laplace => "laplace",
            Command::IntegralScan => "integral-scan",
            Command::SpectrumMap => "spectrum-map",
            Command::NongenWitness => "nongen-witness",
        }
    }
}

/// Parses `a+bi`, `a-bi`, `bi`, `a` or `i` (with `j` accepted for `i`).
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {s:?} (expected a+bi)");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|r| Complex64::new(r, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |x: &str| -> std::result::Result<f64, String> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, imag(&body[i..])?))
        }
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "hklab", version, about = "Diagonal group generators on difference-weighted sequence spaces")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Difference order k.
    #[arg(long, global = true, default_value_t = 1)]
    pub k: usize,
    /// Exponent p (2 selects the Hilbert space).
    #[arg(long, global = true, default_value_t = 2.0)]
    pub p: f64,
    /// Symbol f(n); defaults to sqrt for nongen-witness and log elsewhere.
    #[arg(long = "f", global = true, value_enum)]
    pub symbol: Option<SymbolArg>,
    /// Tabulated symbol, one real per line (with --f table).
    #[arg(long, global = true)]
    pub table: Option<PathBuf>,
    /// Truncation length.
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    /// Comma-separated truncation lengths.
    #[arg(long = "N-grid", global = true, value_delimiter = ',')]
    pub n_grid: Vec<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Comma-separated times.
    #[arg(long = "t-grid", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub t_grid: Vec<f64>,
    #[arg(long = "a-min", global = true)]
    pub a_min: Option<f64>,
    #[arg(long = "a-max", global = true)]
    pub a_max: Option<f64>,
    /// Number of log-spaced points between --a-min and --a-max.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Comma-separated abscissae (overrides --a-min/--a-max/--points).
    #[arg(long = "a-grid", global = true, value_delimiter = ',')]
    pub a_grid: Vec<f64>,
    /// Spectral parameter, e.g. 0+2i.
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: Option<Complex64>,
    #[arg(long = "anchor-n", global = true)]
    pub anchor_n: Option<usize>,
    /// Hardy test sequence: single-spike, power:ALPHA or random.
    #[arg(long, global = true)]
    pub seq: Option<String>,
    /// Grouping: uniform:K or file:PATH (one comma-separated block per line).
    #[arg(long, global = true)]
    pub blocks: Option<String>,
    /// Comma-separated numbers of leading blocks for partial-sums.
    #[arg(long, global = true, value_delimiter = ',')]
    pub prefixes: Vec<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output CSV path (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for scans.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Basis transform, dense real matrix, one row per line.
    #[arg(long, global = true)]
    pub transform: Option<PathBuf>,
    /// Laplace horizon T.
    #[arg(long = "T", global = true)]
    pub horizon: Option<f64>,
    /// Laplace Simpson subintervals.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "matrix-free")]
    pub method: MethodArg,
    /// S_k diagnostics window (default N).
    #[arg(long, global = true)]
    pub window: Option<usize>,
    /// Half-width S for integral-scan (default: whole line).
    #[arg(long = "S", global = true)]
    pub half_width: Option<f64>,
    #[arg(long = "n-min", global = true)]
    pub n_min: Option<usize>,
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    /// Basis index of x (integral-scan, laplace).
    #[arg(long, global = true, default_value_t = 1)]
    pub x: usize,
    /// Basis index of y (integral-scan).
    #[arg(long, global = true, default_value_t = 1)]
    pub y: usize,
}

enum Cell {
    Int(i64),
    Num(f64),
}

struct Table {
    text: String,
}

impl Table {
    fn new(provenance: &str, header: &[&str]) -> Self {
        Table {
            text: format!("{provenance}\n{}\n", header.join(",")),
        }
    }

    fn row(&mut self, cells: &[Cell]) {
        let parts: Vec<String> = cells
            .iter()
            .map(|c| match c {
                Cell::Int(i) => i.to_string(),
                Cell::Num(x) => format!("{x:.16e}"),
            })
            .collect();
        self.text.push_str(&parts.join(","));
        self.text.push('\n');
    }
}

struct Outcome {
    table: Table,
    summary: String,
    pass: bool,
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "VIOLATED"
    }
}

impl RunConfig {
    fn symbol_arg(&self) -> SymbolArg {
        self.symbol.unwrap_or(match self.command {
            Command::NongenWitness => SymbolArg::Sqrt,
            _ => SymbolArg::Log,
        })
    }

    fn truncation(&self, default: usize) -> usize {
        self.n.unwrap_or(default)
    }

    fn symbol(&self, n_max: usize) -> Result<Symbol> {
        match self.symbol_arg() {
            SymbolArg::Log => Symbol::log(n_max),
            SymbolArg::IteratedLog => Symbol::iterated_log(n_max),
            SymbolArg::Sqrt => Symbol::sqrt_witness(n_max),
            SymbolArg::Table => {
                let path = self
                    .table
                    .as_ref()
                    .ok_or_else(|| out_of_range("--f table needs --table PATH"))?;
                let s = Symbol::load_table(path)?;
                if s.n_max() < n_max {
                    return Err(out_of_range(format!(
                        "table {} has {} values, need {n_max}",
                        path.display(),
                        s.n_max()
                    )));
                }
                Ok(s)
            }
        }
    }

    fn space(&self) -> Result<SpaceConfig> {
        let basis = match &self.transform {
            Some(path) => BasisModel::load_transform(path)?,
            None => BasisModel::orthonormal(),
        };
        SpaceConfig::new(self.k, self.p, basis)
    }

    fn generator(&self, n_max: usize) -> Result<GeneratorConfig> {
        Ok(GeneratorConfig::new(self.space()?, self.symbol(n_max)?))
    }

    fn power(&self) -> PowerOptions {
        PowerOptions {
            seed: self.seed,
            ..PowerOptions::default()
        }
    }

    fn method(&self) -> NormMethod {
        match self.method {
            MethodArg::MatrixFree => NormMethod::MatrixFree,
            MethodArg::DenseSvd => NormMethod::DenseSvd,
        }
    }

    fn a_grid(&self, lo: f64, hi: f64, points: usize) -> Vec<f64> {
        if !self.a_grid.is_empty() {
            return self.a_grid.clone();
        }
        logspace(self.a_min.unwrap_or(lo), self.a_max.unwrap_or(hi), self.points.unwrap_or(points))
    }

    fn t_grid(&self, default: &[f64]) -> Vec<f64> {
        if !self.t_grid.is_empty() {
            self.t_grid.clone()
        } else if let Some(t) = self.t {
            vec![t]
        } else {
            default.to_vec()
        }
    }
}

fn fmt_slope(s: Option<f64>) -> String {
    s.map_or("n/a".into(), |v| format!("{v:.6}"))
}

fn hardy(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    let n = cfg.truncation(100_000);
    let seq = match cfg.seq.as_deref().unwrap_or("single-spike") {
        "single-spike" => HardySequence::SingleSpike,
        "random" => HardySequence::Random(cfg.seed),
        s => match s.strip_prefix("power:").map(str::parse::<f64>) {
            Some(Ok(alpha)) => HardySequence::Power(alpha),
            _ => return Err(out_of_range(format!("unknown sequence {s:?} (single-spike, power:ALPHA, random)"))),
        },
    };
    let ratio = hardy_ratio(cfg.p, &seq.generate(n))?;
    let bound = hardy_constant(cfg.p);
    let mut table = Table::new(prov, &["N", "p", "ratio", "bound"]);
    table.row(&[Cell::Int(n as i64), Cell::Num(cfg.p), Cell::Num(ratio), Cell::Num(bound)]);
    let pass = ratio < bound;
    Ok(Outcome {
        table,
        summary: format!("hardy: ratio={ratio:.10} bound={bound:.10} {}", verdict(pass)),
        pass,
    })
}

fn sk_check(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    let window = cfg.window.or(cfg.n).unwrap_or(10_000);
    let f = cfg.symbol(window)?;
    let r = sk_diagnostics(&f, cfg.k, window)?;
    let mut table = Table::new(prov, &["j", "sup", "argmax"]);
    for (j, (s, a)) in r.per_j_sup.iter().zip(&r.argmax).enumerate() {
        table.row(&[Cell::Int(j as i64 + 1), Cell::Num(*s), Cell::Int(*a as i64)]);
    }
    let pass = !r.unbounded_flag && r.tends_to_infinity_flag;
    Ok(Outcome {
        table,
        summary: format!(
            "sk-check: C={:.10} unbounded_flag={} tends_to_infinity_flag={} {}",
            r.c_constant(),
            r.unbounded_flag,
            r.tends_to_infinity_flag,
            verdict(pass)
        ),
        pass,
    })
}

fn norm_group(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    let n = cfg.truncation(1024);
    let g = cfg.generator(n)?;
    let grid = cfg.t_grid(&[1.0]);
    let mut table = Table::new(prov, &["t", "norm", "lower_bound_only"]);
    if !g.space.is_hilbert() {
        for &t in &grid {
            let est = probe_norm_lower_bound(&g, OperatorKind::Group(t), n, 64, cfg.seed)?;
            table.row(&[Cell::Num(t), Cell::Num(est.value), Cell::Int(1)]);
        }
        return Ok(Outcome {
            table,
            summary: format!("norm-group: p={} values are probing lower bounds PASS", cfg.p),
            pass: true,
        });
    }
    let scan = match cfg.method() {
        NormMethod::MatrixFree => group_growth_scan(&g, &grid, n, &cfg.power())?,
        NormMethod::DenseSvd => dense_group_scan(&g, &grid, n)?,
    };
    for (t, v) in scan.grid.iter().zip(&scan.values) {
        table.row(&[Cell::Num(*t), Cell::Num(*v), Cell::Int(0)]);
    }
    let identity_ok = scan.grid.iter().zip(&scan.values).all(|(t, v)| *t != 0.0 || *v == 1.0);
    let slope_ok = scan.fitted_slope.is_none_or(|s| s <= g.k() as f64 + 0.1);
    let pass = identity_ok && slope_ok;
    Ok(Outcome {
        table,
        summary: format!(
            "norm-group: N={n} max norm={:.10} slope={} {}",
            scan.values.iter().cloned().fold(f64::MIN, f64::max),
            fmt_slope(scan.fitted_slope),
            verdict(pass)
        ),
        pass,
    })
}

fn dense_group_scan(g: &GeneratorConfig, grid: &[f64], n: usize) -> Result<ScanResult> {
    let mut scan = group_growth_scan(g, grid, n, &PowerOptions::default())?;
    for (t, v) in scan.grid.iter().zip(scan.values.iter_mut()) {
        *v = operator_norm_with(g, OperatorKind::Group(*t), n, NormMethod::DenseSvd, &PowerOptions::default())?.value;
    }
    Ok(scan)
}

fn norm_resolvent(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    let n = cfg.truncation(1024);
    let g = cfg.generator(n)?;
    let lambda = cfg.lambda.ok_or_else(|| out_of_range("--lambda is required"))?;
    let dist = spectrum_distance(&g, lambda, n)?;
    let lower = 1.0 / dist;
    let (norm, probed) = if g.space.is_hilbert() {
        (operator_norm_with(&g, OperatorKind::Resolvent(lambda), n, cfg.method(), &cfg.power())?.value, false)
    } else {
        (probe_norm_lower_bound(&g, OperatorKind::Resolvent(lambda), n, 64, cfg.seed)?.value, true)
    };
    let remark = if g.k() == 1 && g.space.basis.is_orthonormal() && g.space.is_hilbert() && n >= 2 {
        first_order_resolvent_bound(dist, sk_diagnostics(&g.symbol, 1, n)?.c_constant())
    } else {
        f64::NAN
    };
    let mut table = Table::new(prov, &["re", "im", "norm", "lower_bound", "remark_bound", "distance"]);
    table.row(&[
        Cell::Num(lambda.re),
        Cell::Num(lambda.im),
        Cell::Num(norm),
        Cell::Num(lower),
        Cell::Num(remark),
        Cell::Num(dist),
    ]);
    let pass = probed || (norm >= lower - 1e-8 && !(norm > remark));
    Ok(Outcome {
        table,
        summary: format!(
            "norm-resolvent: norm={norm:.10} lower_bound={lower:.10} remark_bound={remark:.10}{} {}",
            if probed { " (probing lower bound)" } else { "" },
            verdict(pass)
        ),
        pass,
    })
}

fn blowup(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    let n = cfg.truncation(8192);
    let g = cfg.generator(n)?;
    let scan = resolvent_blowup_scan(&g, cfg.anchor_n.unwrap_or(1000), &cfg.a_grid(1e-3, 1.0, 20), n, &cfg.power())?;
    let mut table = Table::new(prov, &["a", "norm", "lower_bound", "remark_bound", "violated"]);
    let lo = scan.column("lower_bound").unwrap();
    let up = scan.column("remark_bound").unwrap();
    let vi = scan.column("violated").unwrap();
    for i in 0..scan.grid.len() {
        table.row(&[
            Cell::Num(scan.grid[i]),
            Cell::Num(scan.values[i]),
            Cell::Num(lo[i]),
            Cell::Num(up[i]),
            Cell::Int(vi[i] as i64),
        ]);
    }
    let violations = vi.iter().filter(|v| **v != 0.0).count();
    let k = g.k() as f64;
    let slope_ok = scan.fitted_slope.is_none_or(|s| (0.95..=k + 1.1).contains(&s));
    let pass = slope_ok && violations == 0;
    Ok(Outcome {
        table,
        summary: format!(
            "blowup: slope={} (contract [0.95, {:.1}]) violations={violations} {}",
            fmt_slope(scan.fitted_slope),
            k + 1.1,
            verdict(pass)
        ),
        pass,
    })
}

fn minimality(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    let n = cfg.truncation(2000);
    let space = cfg.space()?;
    let lo = cfg.n_min.unwrap_or(1);
    let hi = cfg.n_max.unwrap_or(n.min(100));
    if lo < 1 || lo > hi {
        return Err(out_of_range(format!("index range {lo}..={hi} is empty")));
    }
    let idx: Vec<usize> = (lo..=hi).collect();
    let scan = minimality_scan(&space, &idx, n)?;
    let pred = scan.column("predicted").unwrap();
    let mut table = Table::new(prov, &["n", "distance", "predicted"]);
    let mut worst = 0.0_f64;
    for i in 0..scan.grid.len() {
        table.row(&[Cell::Int(scan.grid[i] as i64), Cell::Num(scan.values[i]), Cell::Num(pred[i])]);
        if space.k == 1 && space.basis.is_orthonormal() && 16.0 * scan.grid[i] <= n as f64 {
            worst = worst.max((scan.values[i] - pred[i]).abs() / pred[i]);
        }
    }
    let pass = worst <= 0.2 && scan.values.iter().all(|v| *v > 0.0);
    Ok(Outcome {
        table,
        summary: format!(
            "minimality: min distance={:.10} fitted exponent={} {}",
            scan.values.iter().cloned().fold(f64::MAX, f64::min),
            fmt_slope(scan.fitted_slope),
            verdict(pass)
        ),
        pass,
    })
}

fn grouping(cfg: &RunConfig, n: usize) -> Result<Grouping> {
    let grouping = cfg.blocks.as_deref().unwrap_or("uniform:1");
    if let Some(k) = grouping.strip_prefix("uniform:") {
        let size = k.parse::<usize>().map_err(|_| out_of_range(format!("bad block size {k:?}")))?;
        Grouping::uniform(size, n)
    } else if let Some(path) = grouping.strip_prefix("file:") {
        Grouping::load(path, n)
    } else {
        Err(out_of_range(format!("unknown grouping {grouping:?} (uniform:K or file:PATH)")))
    }
}

fn partial_sums(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    let n = cfg.truncation(128);
    let space = cfg.space()?;
    let gr = grouping(cfg, n)?;
    let prefixes: Vec<usize> = if cfg.prefixes.is_empty() {
        (1..=gr.blocks().len().min(64)).collect()
    } else {
        cfg.prefixes.clone()
    };
    let r = partial_sum_projection_norms(&space, &gr, &prefixes, cfg.method(), &cfg.power())?;
    let mut table = Table::new(prov, &["M", "norm"]);
    for (m, v) in r.prefix.grid.iter().zip(&r.prefix.values) {
        table.row(&[Cell::Int(*m as i64), Cell::Num(*v)]);
    }
    let min_block = r.block_norms.iter().cloned().fold(f64::MAX, f64::min);
    let pass = min_block >= r.block_lower_bound * (1.0 - 1e-12);
    Ok(Outcome {
        table,
        summary: format!(
            "partial-sums: max norm={:.10} slope={} min block norm={min_block:.10} bound={:.10} {}",
            r.prefix.values.iter().cloned().fold(f64::MIN, f64::max),
            fmt_slope(r.prefix.fitted_slope),
            r.block_lower_bound,
            verdict(pass)
        ),
        pass,
    })
}

fn blocks(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    let n = cfg.truncation(64);
    let space = cfg.space()?;
    let gr = grouping(cfg, n)?;
    let norms = block_norms(&space, &gr)?;
    let bound = 1.0 / space.basis.upper().sqrt();
    let mut table = Table::new(prov, &["block", "first", "size", "norm"]);
    for (i, (b, v)) in gr.blocks().iter().zip(&norms).enumerate() {
        table.row(&[Cell::Int(i as i64 + 1), Cell::Int(b[0] as i64), Cell::Int(b.len() as i64), Cell::Num(*v)]);
    }
    let min = norms.iter().cloned().fold(f64::MAX, f64::min);
    let pass = min >= bound * (1.0 - 1e-12);
    Ok(Outcome {
        table,
        summary: format!(
            "blocks: {} blocks, K={} min norm={min:.10} bound={bound:.10} {}",
            norms.len(),
            gr.max_block(),
            verdict(pass)
        ),
        pass,
    })
}

fn laplace(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    let n = cfg.truncation(8);
    let g = cfg.generator(n)?;
    let lambda = cfg.lambda.unwrap_or(Complex64::new(1.0, 0.0));
    let horizon = cfg.horizon.unwrap_or(40.0);
    let steps = cfg.steps.unwrap_or(4000);
    let c = CoeffVec::basis(cfg.x, n)?;
    let r = laplace_check(&g, lambda, &c, horizon, steps)?;
    // Richardson estimate of the Simpson error from a half-resolution run.
    let coarse = laplace_resolvent(&g, lambda, &c, horizon, (steps + steps % 2) / 2)?;
    let coarse_diff: f64 = r
        .quadrature
        .iter()
        .zip(coarse.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let quad_err = coarse_diff / 15.0;
    let neg = resolvent_apply(&g, lambda, &c)?.scale(Complex64::new(-1.0, 0.0));
    let mut table = Table::new(prov, &["n", "quadrature_re", "quadrature_im", "neg_resolvent_re", "neg_resolvent_im"]);
    for i in 0..n {
        table.row(&[
            Cell::Int(i as i64 + 1),
            Cell::Num(r.quadrature[i].re),
            Cell::Num(r.quadrature[i].im),
            Cell::Num(neg[i].re),
            Cell::Num(neg[i].im),
        ]);
    }
    let scale = (-lambda.re * horizon).exp() * (1.0 + horizon).powi(g.k() as i32);
    let allowed = 10.0 * scale.max(r.tail_bound) + 10.0 * quad_err;
    let pass = r.residual <= allowed;
    Ok(Outcome {
        table,
        summary: format!(
            "laplace: residual={:.6e} tail_bound={:.6e} quadrature_error_estimate={quad_err:.6e} {}",
            r.residual,
            r.tail_bound,
            verdict(pass)
        ),
        pass,
    })
}

fn integral_scan(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    let n = cfg.truncation(2048);
    let g = cfg.generator(n)?;
    let grid = if cfg.a_grid.is_empty() && cfg.a_min.is_none() {
        vec![0.1, 0.2, 0.4, 0.8]
    } else {
        cfg.a_grid(0.1, 0.8, 4)
    };
    let x = CoeffVec::basis(cfg.x, n)?;
    let y = CoeffVec::basis(cfg.y, n)?;
    let opts = IntegralOptions {
        half_width: cfg.half_width,
        ..IntegralOptions::default()
    };
    let scan = vertical_integral_scan(&g, &grid, &x, &y, n, &opts)?;
    let names = ["scaled_i1", "i2", "scaled_i2", "i1_adjoint", "scaled_i1_adjoint"];
    let mut header = vec!["a", "i1"];
    header.extend(names);
    let mut table = Table::new(prov, &header);
    for i in 0..scan.grid.len() {
        let mut row = vec![Cell::Num(scan.grid[i]), Cell::Num(scan.values[i])];
        row.extend(names.iter().map(|c| Cell::Num(scan.column(c).unwrap()[i])));
        table.row(&row);
    }
    let spreads: Vec<f64> = ["scaled_i1", "scaled_i2", "scaled_i1_adjoint"]
        .iter()
        .map(|c| running_max_spread(scan.column(c).unwrap()))
        .collect();
    let pass = spreads.iter().all(|s| *s < 10.0);
    Ok(Outcome {
        table,
        summary: format!(
            "integral-scan: running-max spreads i1={:.4} i2={:.4} adjoint={:.4} {}",
            spreads[0],
            spreads[1],
            spreads[2],
            verdict(pass)
        ),
        pass,
    })
}

fn spectrum_map(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    let n = cfg.truncation(128);
    let g = cfg.generator(n)?;
    let grid = cfg.t_grid(&[1.0, std::f64::consts::PI, 10.0]);
    let mut table = Table::new(prov, &["t", "max_deviation"]);
    let mut worst = 0.0_f64;
    for &t in &grid {
        let d = spectral_mapping_check(&g, t, n)?.max_deviation;
        worst = worst.max(d);
        table.row(&[Cell::Num(t), Cell::Num(d)]);
    }
    let pass = worst <= 1e-8;
    Ok(Outcome {
        table,
        summary: format!("spectrum-map: N={n} max deviation={worst:.6e} {}", verdict(pass)),
        pass,
    })
}

fn nongen_witness(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    let grid = if cfg.n_grid.is_empty() {
        vec![64, 256, 1024, 4096]
    } else {
        cfg.n_grid.clone()
    };
    let n_max = *grid.iter().max().unwrap();
    let g = cfg.generator(n_max)?;
    let t = cfg.t.unwrap_or(1.0);
    let scan: ScanResult = truncation_scan(&g, OperatorKind::Group(t), &grid, &cfg.power())?;
    let mut table = Table::new(prov, &["N", "norm"]);
    for (n, v) in scan.grid.iter().zip(&scan.values) {
        table.row(&[Cell::Int(*n as i64), Cell::Num(*v)]);
    }
    let v = &scan.values;
    let (pass, claim) = if t == 0.0 {
        (v.iter().all(|x| *x == 1.0), "identity at t = 0")
    } else if cfg.symbol_arg() == SymbolArg::Sqrt {
        (
            is_strictly_increasing(v) && scan.fitted_slope.is_some_and(|s| s > 0.0),
            "diverges with N",
        )
    } else {
        let stable = v.len() < 2 || (v[v.len() - 1] - v[v.len() - 2]).abs() <= 0.05 * v[v.len() - 2];
        (stable, "stabilizes with N")
    };
    Ok(Outcome {
        table,
        summary: format!(
            "nongen-witness: symbol {} t={t} slope in log N={} ({claim}) {}",
            g.symbol.kind(),
            fmt_slope(scan.fitted_slope),
            verdict(pass)
        ),
        pass,
    })
}

fn execute(cfg: &RunConfig, prov: &str) -> Result<Outcome> {
    if cfg.k < 1 {
        return Err(out_of_range("--k must be >= 1"));
    }
    match cfg.command {
        Command::Hardy => hardy(cfg, prov),
        Command::SkCheck => sk_check(cfg, prov),
        Command::NormGroup => norm_group(cfg, prov),
        Command::NormResolvent => norm_resolvent(cfg, prov),
        Command::Blowup => blowup(cfg, prov),
        Command::Minimality => minimality(cfg, prov),
        Command::PartialSums => partial_sums(cfg, prov),
        Command::Blocks => blocks(cfg, prov),
        Command::Laplace => laplace(cfg, prov),
        Command::IntegralScan => integral_scan(cfg, prov),
        Command::SpectrumMap => spectrum_map(cfg, prov),
        Command::NongenWitness => nongen_witness(cfg, prov),
    }
}

fn provenance(cfg: &RunConfig, argv: &[String]) -> String {
    let mut s = format!("# subcommand={} args=\"{}\"", cfg.command.name(), argv.join(" "));
    let _ = write!(
        s,
        " k={} p={} f={} N={} seed={}",
        cfg.k,
        cfg.p,
        cfg.symbol_arg().to_possible_value().map_or(String::new(), |v| v.get_name().to_string()),
        cfg.n.map_or("default".into(), |n| n.to_string()),
        cfg.seed
    );
    s
}

/// Runs one command line (without the program name) and returns the exit status.
pub fn run_with(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let full = std::iter::once("hklab".to_string()).chain(argv.iter().cloned());
    let cfg = match RunConfig::try_parse_from(full) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let help = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let target: &mut dyn Write = if help { stdout } else { stderr };
            let _ = write!(target, "{}", e.render());
            return if help { 0 } else { 1 };
        }
    };
    let prov = provenance(&cfg, argv);
    let result = match cfg.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&cfg, &prov)),
            Err(e) => Err(LabError::Unsupported(format!("thread pool: {e}"))),
        },
        None => execute(&cfg, &prov),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.table.text) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return 1;
            }
            let _ = writeln!(stdout, "{}", outcome.summary);
        }
        None => {
            let _ = write!(stdout, "{}", outcome.table.text);
            let _ = writeln!(stdout, "# {}", outcome.summary);
        }
    }
    if outcome.pass {
        0
    } else {
        2
    }
}

/// Runs with the process arguments and standard streams.
pub fn run() -> i32 {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    run_with(&argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("0+2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-1.5-0.5i").unwrap(), Complex64::new(-1.5, -0.5));
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+1e2i").unwrap(), Complex64::new(1e-3, 100.0));
        assert_eq!(parse_complex("2.5j").unwrap(), Complex64::new(0.0, 2.5));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run_with(&["bogus".into()], &mut out, &mut err), 1);
        assert_eq!(run_with(&["hardy".into(), "--p".into(), "x".into()], &mut out, &mut err), 1);
        assert_eq!(run_with(&["--help".into()], &mut out, &mut err), 0);
    }
}
