//! Command-line driver: config ingestion, length queries, metric estimates
//! and the experiment tables.
//!
//! Exit codes: 0 success, 2 configuration or parse error, 3 a checked
//! inequality failed (the offending row is printed).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;

use crate::geometry::{GeometryError, HypStructure, Realization, ThickPartSpec};
use crate::hyptrig::{pants_seam, PantsGeometry};
use crate::spectrum::{self, MetricEstimate, SpectrumError};
use crate::surface::{canonical_arc, enumerate_arcs, slope_word, ArcClass, CurveClass, Family, SurfaceType, Word};

pub const THREADS_ENV: &str = "HYPSPECTRUM_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hypspectrum", version, about = "Length spectra and length-spectrum metrics of hyperbolic surfaces")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Enumeration bound (overrides the config).
    #[arg(long, global = true)]
    pub bound: Option<usize>,
    /// Sampling seed (overrides the config).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// CSV output path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lengths of the classes listed in the config.
    Length,
    /// One metric estimate between `x` and `y`.
    Metric {
        /// d, dbar, dL, deltaL or K (overrides the config).
        name: Option<String>,
    },
    /// pants-example, thick-comparison, doubling, arcs-only or convergence.
    Experiment { name: String },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Assertion(_) => EXIT_ASSERTION,
        }
    }
}

impl From<SpectrumError> for CliError {
    fn from(e: SpectrumError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    #[serde(default)]
    pub genus: usize,
    #[serde(default)]
    pub punctures: usize,
    #[serde(default)]
    pub boundary: usize,
}

/// Fenchel–Nielsen coordinates of one structure.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FnCoordinates {
    #[serde(default)]
    pub curve_lengths: Vec<f64>,
    #[serde(default)]
    pub twists: Vec<f64>,
    #[serde(default)]
    pub boundary_lengths: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentParams {
    pub epsilon: f64,
    pub epsilon0: f64,
    /// Pants example: values of `t`.
    pub t_grid: Vec<f64>,
    /// Fit window of the seam decay.
    pub fit_window: [f64; 2],
    /// Thick comparison and arcs-only: lattice points per coordinate.
    pub grid: usize,
    /// Second bound for the stability check (default `bound + 2`).
    pub check_bound: Option<usize>,
    pub max_gap_change: f64,
    /// Doubling: number of sampled pairs, and the word bound on the double
    /// (the double is also run at twice this bound).
    pub pairs: usize,
    pub double_bound: usize,
    /// Convergence: base point and sample indices.
    pub ell0: f64,
    pub twist0: f64,
    pub boundary0: f64,
    pub ns: Vec<usize>,
    pub tolerance: f64,
    pub divergence: f64,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        ExperimentParams {
            epsilon: 0.3,
            epsilon0: 3.0,
            t_grid: vec![1.0, 2.0, 4.0, 8.0, 12.0, 16.0, 20.0, 24.0],
            fit_window: [8.0, 24.0],
            grid: 5,
            check_bound: None,
            max_gap_change: 0.1,
            pairs: 10,
            double_bound: 4,
            ell0: 3.0,
            twist0: 0.0,
            boundary0: 1.0,
            ns: vec![1, 2, 5, 10, 20, 50, 100],
            tolerance: 1e-2,
            divergence: 2.0,
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub surface: Option<SurfaceSpec>,
    /// Only `"default"` is available.
    #[serde(default = "default_decomposition")]
    pub decomposition: String,
    pub x: Option<FnCoordinates>,
    pub y: Option<FnCoordinates>,
    #[serde(default)]
    pub classes: Vec<String>,
    pub metric: Option<String>,
    #[serde(default = "default_bound")]
    pub bound: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub experiment: ExperimentParams,
}

fn default_decomposition() -> String {
    "default".into()
}

fn default_bound() -> usize {
    6
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            surface: None,
            decomposition: default_decomposition(),
            x: None,
            y: None,
            classes: vec![],
            metric: None,
            bound: default_bound(),
            seed: 0,
            experiment: ExperimentParams::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let c: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.bound == 0 {
            return Err(CliError::Config("bound must be at least 1".into()));
        }
        if self.decomposition != "default" {
            return Err(CliError::Config(format!("unknown decomposition {:?}", self.decomposition)));
        }
        if let Some(s) = &self.surface {
            SurfaceType::new(s.genus, s.punctures, s.boundary)
                .validate()
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        for c in self.x.iter().chain(&self.y) {
            if c.curve_lengths.iter().chain(&c.boundary_lengths).any(|&l| !(l > 0.0 && l.is_finite())) {
                return Err(CliError::Config("lengths must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn surface_type(&self) -> Result<SurfaceType, CliError> {
        let s = self.surface.as_ref().ok_or_else(|| CliError::Config("missing [surface]".into()))?;
        Ok(SurfaceType::new(s.genus, s.punctures, s.boundary))
    }

    fn structure(&self, which: &str) -> Result<HypStructure, CliError> {
        let c = match which {
            "x" => self.x.as_ref(),
            _ => self.y.as_ref(),
        }
        .ok_or_else(|| CliError::Config(format!("missing [{which}]")))?;
        let st = self.surface_type()?;
        HypStructure::new(st, c.curve_lengths.clone(), c.twists.clone(), c.boundary_lengths.clone())
            .map_err(|e| CliError::Config(format!("[{which}]: {e}")))
    }
}

/// Formats a real with 12 significant digits, like C's `%.12g`.
pub fn fmt_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-4..12).contains(&exp) {
        return format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A CSV table with a mandatory header.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table { header: header.iter().map(|s| s.as_ref().to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    fn row_text(&self, i: usize) -> String {
        self.header
            .iter()
            .zip(&self.rows[i])
            .map(|(h, v)| format!("{h}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Result of one command: text for stdout and a table for `--out`.
#[derive(Clone, Debug, Default)]
pub struct Output {
    pub report: String,
    pub table: Table,
    /// First failed check, reported after the table is written.
    pub failure: Option<String>,
}

fn r(x: f64) -> String {
    fmt_real(x)
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', ' ']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A length query, by symbolic name or canonical word.
#[derive(Clone, Debug, PartialEq)]
pub enum ClassQuery {
    Curve(CurveClass),
    Arc(ArcClass),
}

/// Parses `boundary i`, `seam i-j`, `self i`, `slope p/q`, `arc i-j WORD`,
/// `curve WORD` or a bare word. Boundary indices are 1-based.
pub fn parse_class(st: SurfaceType, spec: &str) -> Result<ClassQuery, CliError> {
    let bad = || CliError::Config(format!("cannot parse class {spec:?}"));
    let parts: Vec<&str> = spec.split_whitespace().collect();
    let index = |s: &str| -> Result<usize, CliError> {
        let i: usize = s.parse().map_err(|_| bad())?;
        if i == 0 || i > st.boundary {
            return Err(CliError::Config(format!("boundary index {i} out of range 1..={}", st.boundary)));
        }
        Ok(i - 1)
    };
    let pair = |s: &str| -> Result<(usize, usize), CliError> {
        let (a, b) = s.split_once('-').ok_or_else(bad)?;
        Ok((index(a)?, index(b)?))
    };
    let word = |s: &str| Word::parse(s).ok_or_else(|| CliError::Config(format!("{s:?} is not a word")));
    let bw = crate::surface::boundary_words(st).map_err(|e| CliError::Config(e.to_string()))?;
    match parts.as_slice() {
        ["boundary", i] => {
            let i = index(i)?;
            Ok(ClassQuery::Curve(CurveClass::boundary(i, &bw[i])))
        }
        ["seam", ij] => {
            let (i, j) = pair(ij)?;
            canonical_arc(&bw, i, &Word::empty(), j).map(ClassQuery::Arc).ok_or_else(bad)
        }
        ["self", i] if st.family() == Some(Family::Pants) => {
            let i = index(i)?;
            let arcs = enumerate_arcs(st, 1).map_err(|e| CliError::Config(e.to_string()))?;
            arcs.into_iter().find(|a| a.start == i && a.end == i).map(ClassQuery::Arc).ok_or_else(bad)
        }
        ["slope", pq] if st.family() == Some(Family::OneHoledTorus) => {
            let (p, q) = pq.split_once('/').ok_or_else(bad)?;
            let (p, q): (i64, i64) = (p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?);
            if q < 0 || (p, q) == (0, 0) || gcd(p.unsigned_abs(), q as u64) != 1 {
                return Err(bad());
            }
            Ok(ClassQuery::Curve(CurveClass::interior(&slope_word(p, q))))
        }
        ["arc", ij, w] => {
            let (i, j) = pair(ij)?;
            canonical_arc(&bw, i, &word(w)?, j).map(ClassQuery::Arc).ok_or_else(bad)
        }
        ["curve", w] | [w] => Ok(ClassQuery::Curve(CurveClass::interior(&word(w)?))),
        _ => Err(bad()),
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn cmd_length(cfg: &RunConfig) -> Result<Output, CliError> {
    let x = cfg.structure("x")?;
    if cfg.classes.is_empty() {
        return Err(CliError::Config("no classes listed".into()));
    }
    let real = Realization::new(&x)?;
    let mut out = Output { table: Table::new(&["class", "kind", "word", "length"]), ..Default::default() };
    for name in &cfg.classes {
        let q = parse_class(x.surface, name)?;
        let (kind, word, l) = match &q {
            ClassQuery::Curve(c) => ("curve", c.word.to_string(), real.curve_length(c)),
            ClassQuery::Arc(a) => ("arc", format!("{}-{}:{}", a.start + 1, a.end + 1, a.connector), real.arc_length(a)),
        };
        let l = l.map_err(|e| CliError::Config(format!("{name}: {e}")))?;
        writeln!(out.report, "{name}\t{kind}\t{word}\t{}", r(l)).unwrap();
        out.table.push(vec![quote(name), kind.into(), word, r(l)]);
    }
    Ok(out)
}

pub fn cmd_metric(cfg: &RunConfig, name: Option<&str>) -> Result<Output, CliError> {
    let name = name.or(cfg.metric.as_deref()).ok_or_else(|| CliError::Config("no metric named".into()))?;
    let (x, y) = (cfg.structure("x")?, cfg.structure("y")?);
    let b = cfg.bound;
    let e: MetricEstimate = match name {
        "d" => spectrum::d_weak(&x, &y, b)?,
        "dbar" => spectrum::d_bar(&x, &y, b)?,
        "dL" => spectrum::d_l(&x, &y, b)?,
        "deltaL" => spectrum::delta_l(&x, &y, b)?,
        "K" => spectrum::k_ratio(&x, &y, b)?,
        other => return Err(CliError::Config(format!("unknown metric {other:?} (d, dbar, dL, deltaL, K)"))),
    };
    let witness = e.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
    let mut out = Output {
        table: Table::new(&["metric", "bound", "value", "exact", "slack", "family", "witness"]),
        ..Default::default()
    };
    writeln!(out.report, "{name} = {} (bound {b}, family {}, exact {}, slack {})", r(e.value), e.family, e.exact, r(e.slack)).unwrap();
    if name == "K" {
        writeln!(out.report, "log K = {}", r(e.value.ln())).unwrap();
    }
    writeln!(out.report, "witness: {witness}").unwrap();
    if let Some(c) = e.arcs_only {
        writeln!(out.report, "arcs only: {} (B∪C {}, slack {})", r(c.arcs_only), r(c.all), r(c.slack)).unwrap();
    }
    out.table.push(vec![
        name.into(),
        b.to_string(),
        r(e.value),
        e.exact.to_string(),
        r(e.slack),
        e.family.to_string(),
        quote(&witness),
    ]);
    Ok(out)
}

pub fn cmd_experiment(cfg: &RunConfig, name: &str) -> Result<Output, CliError> {
    match name {
        "pants-example" => pants_example(cfg),
        "thick-comparison" => thick_comparison(cfg),
        "arcs-only" => arcs_only(cfg),
        "doubling" => doubling(cfg),
        "convergence" => convergence(cfg),
        other => Err(CliError::Config(format!(
            "unknown experiment {other:?} (pants-example, thick-comparison, doubling, arcs-only, convergence)"
        ))),
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Seam of the pants `(t,t,t)`; the hexagon's alternate sides are `t/2`.
pub fn pants_seam_length(t: f64) -> Result<f64, CliError> {
    let p = PantsGeometry::new(t, t, t).map_err(|e| CliError::Config(e.to_string()))?;
    pants_seam(&p, 0, 1).map_err(|e| CliError::Config(e.to_string()))
}

/// The same formula with alternate sides `t`, as if `t` were the half-length.
pub fn pants_seam_length_full_sides(t: f64) -> Result<f64, CliError> {
    pants_seam_length(2.0 * t)
}

fn pants_example(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = &cfg.experiment;
    let mut out = Output {
        table: Table::new(&["t", "d_L", "delta_L", "seam_length", "seam_length_full_sides", "decay_exponent", "decay_exponent_full_sides"]),
        ..Default::default()
    };
    let x = HypStructure::pants(1.0, 1.0, 1.0)?;
    let mut rows = vec![];
    for &t in &p.t_grid {
        let y = HypStructure::pants(t, t, t)?;
        let dl = spectrum::d_l(&x, &y, 1)?.value;
        let delta = spectrum::delta_l(&x, &y, 1)?.value;
        rows.push((t, dl, delta, pants_seam_length(t)?, pants_seam_length_full_sides(t)?));
    }
    let mut prev: Option<(f64, f64, f64)> = None;
    for &(t, dl, delta, s, sf) in &rows {
        let local = |(pt, ps, psf): (f64, f64, f64)| ((s.ln() - ps.ln()) / (t - pt), (sf.ln() - psf.ln()) / (t - pt));
        let (e, ef) = prev.map(local).map(|(a, b)| (r(a), r(b))).unwrap_or_default();
        out.table.push(vec![r(t), r(dl), r(delta), r(s), r(sf), e, ef]);
        prev = Some((t, s, sf));
        if (dl - t.ln().abs()).abs() > 1e-9 && out.failure.is_none() {
            out.failure = Some(format!("d_L at t={t} is {} instead of log t", r(dl)));
        }
        if delta < dl && out.failure.is_none() {
            out.failure = Some(format!("delta_L < d_L at t={t}"));
        }
    }
    let window: Vec<_> = rows.iter().filter(|row| row.0 >= p.fit_window[0] && row.0 <= p.fit_window[1]).collect();
    if window.len() >= 2 {
        let ts: Vec<f64> = window.iter().map(|row| row.0).collect();
        let fit = |k: usize| fit_slope(&ts, &window.iter().map(|row| [row.3, row.4, row.2][k].ln()).collect::<Vec<_>>());
        let (half, full) = (fit(0), fit(1));
        let delta_slope = fit_slope(&ts, &window.iter().map(|row| row.2).collect::<Vec<_>>());
        writeln!(out.report, "seam decay exponent over t in [{}, {}]:", r(p.fit_window[0]), r(p.fit_window[1])).unwrap();
        writeln!(out.report, "  half-length convention: fitted {} (closed form -0.25)", r(half)).unwrap();
        writeln!(out.report, "  full-length convention: fitted {} (closed form -0.5)", r(full)).unwrap();
        writeln!(out.report, "delta_L slope in t: {} (closed form 0.25)", r(delta_slope)).unwrap();
        if (half + 0.25).abs() > 1e-3 && out.failure.is_none() {
            out.failure = Some(format!("fitted seam exponent {} differs from -1/4", r(half)));
        }
    } else {
        writeln!(out.report, "fewer than two grid points in the fit window; no decay fit").unwrap();
    }
    Ok(out)
}

fn thick_spec(p: &ExperimentParams) -> Result<ThickPartSpec, CliError> {
    Ok(ThickPartSpec::new(p.epsilon, p.epsilon0)?)
}

fn coords(x: &HypStructure) -> [String; 3] {
    [r(x.curve_lengths[0]), r(x.twists[0]), r(x.boundary_lengths[0])]
}

const PAIR_COLUMNS: [&str; 8] = ["index", "seed", "x_ell", "x_twist", "x_boundary", "y_ell", "y_twist", "y_boundary"];

fn pair_cells(i: usize, seed: u64, x: &HypStructure, y: &HypStructure) -> Vec<String> {
    let mut v = vec![i.to_string(), seed.to_string()];
    v.extend(coords(x));
    v.extend(coords(y));
    v
}

fn columns(extra: &[&str]) -> Vec<String> {
    PAIR_COLUMNS.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn thick_comparison(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = &cfg.experiment;
    let samples = spectrum::torus_grid(p.grid, cfg.seed);
    let spec = thick_spec(p)?;
    let check = p.check_bound.unwrap_or(cfg.bound + 2);
    let a = spectrum::comparison_experiment(&samples, spec, cfg.bound)?;
    let b = spectrum::comparison_experiment(&samples, spec, check)?;
    let mut out = Output {
        table: Table::new(&columns(&["d_L", "delta_L", "d", "d_bar", "gap", "gap_check", "slack"])),
        ..Default::default()
    };
    for (i, (ra, rb)) in a.pairs.iter().zip(&b.pairs).enumerate() {
        let mut row = pair_cells(i, cfg.seed, &ra.x, &ra.y);
        row.extend([ra.d_l, ra.delta_l, ra.d, ra.d_bar, ra.gap, rb.gap, ra.slack].map(r));
        out.table.push(row);
        if ra.gap < 0.0 || ra.delta_l < ra.d || ra.delta_l < ra.d_bar {
            out.failure.get_or_insert_with(|| format!("negative gap: {}", out.table.row_text(i)));
        }
    }
    let change = (b.max_gap - a.max_gap).abs();
    writeln!(out.report, "pairs: {} (seed {}, thick part ε={} ε₀={})", a.pairs.len(), cfg.seed, r(spec.epsilon), r(spec.epsilon0)).unwrap();
    writeln!(out.report, "max gap δ_L − d_L: {} at bound {}, {} at bound {check}", r(a.max_gap), cfg.bound, r(b.max_gap)).unwrap();
    if change > p.max_gap_change * a.max_gap.max(b.max_gap) {
        out.failure.get_or_insert_with(|| format!("max gap changed by {} between bounds {} and {check}", r(change), cfg.bound));
    }
    Ok(out)
}

fn arcs_only(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = &cfg.experiment;
    let samples = spectrum::torus_grid(p.grid, cfg.seed);
    let report = spectrum::comparison_experiment(&samples, thick_spec(p)?, cfg.bound)?;
    let mut out = Output { table: Table::new(&columns(&["d_B", "d_BC", "difference", "slack"])), ..Default::default() };
    let mut worst = 0.0f64;
    let mut max_slack = 0.0f64;
    for (i, row) in report.pairs.iter().enumerate() {
        let c = row.arcs_only;
        let diff = (c.arcs_only - c.all).abs();
        worst = worst.max(diff);
        max_slack = max_slack.max(c.slack);
        let mut cells = pair_cells(i, cfg.seed, &row.x, &row.y);
        cells.extend([c.arcs_only, c.all, diff, c.slack].map(r));
        out.table.push(cells);
        if !c.holds() {
            out.failure.get_or_insert_with(|| format!("B-only and B∪C differ beyond slack: {}", out.table.row_text(i)));
        }
    }
    writeln!(out.report, "pairs: {} at bound {}; max |d_B − d_BC| {}, max slack {}", report.pairs.len(), cfg.bound, r(worst), r(max_slack)).unwrap();
    Ok(out)
}

// Words on the double lose about 1e-7 relative precision at length 8.
const DOUBLE_ROUNDOFF: f64 = 1e-7;

fn doubling(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = &cfg.experiment;
    let b = p.double_bound.max(1);
    let mut out = Output {
        table: Table::new(&columns(&["d_S", "d_Sd_bound", "d_Sd_2bound", "gap", "slack"])),
        ..Default::default()
    };
    for (i, (x, y)) in spectrum::torus_pairs(p.pairs, cfg.seed).iter().enumerate() {
        let s = spectrum::d_weak(x, y, 2 * b)?;
        let d1 = spectrum::d_weak_on_double(x, y, b)?;
        let d2 = spectrum::d_weak_on_double(x, y, 2 * b)?;
        let gap = (s.value - d2.value).abs();
        let slack = s.slack.max((d2.value - d1.value).abs());
        let mut cells = pair_cells(i, cfg.seed, x, y);
        cells.extend([s.value, d1.value, d2.value, gap, slack].map(r));
        out.table.push(cells);
        if gap > slack + DOUBLE_ROUNDOFF {
            out.failure.get_or_insert_with(|| format!("d on S and on the double differ beyond slack: {}", out.table.row_text(i)));
        }
    }
    writeln!(out.report, "pairs: {} (seed {}), surface bound {}, double bounds {b} and {}", p.pairs, cfg.seed, 2 * b, 2 * b).unwrap();
    Ok(out)
}

fn convergence(cfg: &RunConfig) -> Result<Output, CliError> {
    let p = &cfg.experiment;
    let x0 = HypStructure::one_holed_torus(p.ell0, p.twist0, p.boundary0)?;
    let mut out = Output { table: Table::new(&["path", "n", "ell", "d", "d_bar", "d_L", "delta_L", "slack"]), ..Default::default() };
    let paths: [(&str, Box<dyn Fn(usize) -> f64 + Sync>, f64); 2] = [
        ("shrink", Box::new(|n| p.ell0 + 1.0 / n as f64), -1.0),
        ("pinch", Box::new(|n| 1.0 / n as f64), 1.0),
    ];
    for (name, ell, direction) in &paths {
        let table = spectrum::convergence_study(
            |n| HypStructure::one_holed_torus(ell(n), p.twist0, p.boundary0),
            &x0,
            &p.ns,
            cfg.bound,
        )?;
        for row in &table.rows {
            out.table.push(vec![
                name.to_string(),
                row.n.to_string(),
                r(ell(row.n)),
                r(row.d),
                r(row.d_bar),
                r(row.d_l),
                r(row.delta_l),
                r(row.slack),
            ]);
        }
        let last = out.table.rows.len() - 1;
        let Some(end) = table.rows.last() else { continue };
        let monotone = table.monotone(*direction);
        writeln!(
            out.report,
            "{name}: monotone {monotone}, last n={} values {}",
            end.n,
            end.values().map(r).join(" ")
        )
        .unwrap();
        if !monotone {
            out.failure.get_or_insert_with(|| format!("{name}: estimators are not co-monotone"));
        }
        let ok = if *direction < 0.0 {
            end.values().iter().all(|&v| v < p.tolerance)
        } else {
            end.values().iter().all(|&v| v > p.divergence)
        };
        if !ok {
            out.failure.get_or_insert_with(|| format!("{name}: {}", out.table.row_text(last)));
        }
        if *direction < 0.0 {
            if let Some(env) = table.envelope(p.tolerance) {
                writeln!(out.report, "{name}: envelope of all estimators where d_L < {}: {}", r(p.tolerance), r(env)).unwrap();
            }
        } else {
            writeln!(out.report, "{name}: all above {} together: {}", r(p.divergence), table.diverge_together(p.divergence)).unwrap();
        }
    }
    Ok(out)
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| CliError::Config(format!("{THREADS_ENV}={v:?} is not a thread count")))?;
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    configure_threads()?;
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(b) = cli.bound {
        cfg.bound = b;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    match &cli.command {
        Command::Length => cmd_length(&cfg),
        Command::Metric { name } => cmd_metric(&cfg, name.as_deref()),
        Command::Experiment { name } => cmd_experiment(&cfg, name),
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let out = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    print!("{}", out.report);
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, out.table.to_csv()) {
            eprintln!("cannot write {}: {e}", path.display());
            return EXIT_CONFIG;
        }
    } else if out.table.rows.len() <= 1 {
        print!("{}", out.table.to_csv());
    }
    match out.failure {
        Some(msg) => {
            eprintln!("{}", CliError::Assertion(msg));
            EXIT_ASSERTION
        }
        None => EXIT_OK,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_real_matches_printf_g() {
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(2.0), "2");
        assert_eq!(fmt_real(-1.5), "-1.5");
        assert_eq!(fmt_real(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_real(1e-4), "0.0001");
        assert_eq!(fmt_real(1.5e-5), "1.5e-05");
        assert_eq!(fmt_real(123456789012.0), "123456789012");
        assert_eq!(fmt_real(1234567890123.0), "1.23456789012e+12");
        assert_eq!(fmt_real(f64::INFINITY), "inf");
        assert_eq!(fmt_real(f64::NAN), "nan");
    }

    #[test]
    fn table_quotes_and_headers() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![quote("x y"), r(0.5)]);
        assert_eq!(t.to_csv(), "a,b\n\"x y\",0.5\n");
    }

    #[test]
    fn class_names_parse() {
        let st = SurfaceType::ONE_HOLED_TORUS;
        assert!(matches!(parse_class(st, "slope 1/0"), Ok(ClassQuery::Curve(_))));
        assert!(matches!(parse_class(st, "boundary 1"), Ok(ClassQuery::Curve(_))));
        assert!(matches!(parse_class(st, "arc 1-1 a"), Ok(ClassQuery::Arc(_))));
        assert!(parse_class(st, "boundary 0").is_err());
        assert!(parse_class(st, "slope 2/4").is_err());
        assert!(parse_class(SurfaceType::PANTS, "seam 1-2").is_ok());
        assert!(parse_class(SurfaceType::PANTS, "seam 1-4").is_err());
    }

    #[test]
    fn config_rejects_unknown_keys_and_bad_values() {
        assert!(RunConfig::parse("bound = 3").is_ok());
        assert!(RunConfig::parse("bogus = 3").is_err());
        assert!(RunConfig::parse("decomposition = \"other\"").is_err());
        assert!(RunConfig::parse("[surface]\ngenus = 0\nboundary = 2").is_err());
        let c = RunConfig::parse("[experiment]\ngrid = 3").unwrap();
        assert_eq!(c.experiment.grid, 3);
        assert_eq!(c.experiment.pairs, 10);
    }

    #[test]
    fn slope_fit_is_exact_on_lines() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 0.5 - 0.25 * x).collect();
        assert!((fit_slope(&xs, &ys) + 0.25).abs() < 1e-14);
    }
}
