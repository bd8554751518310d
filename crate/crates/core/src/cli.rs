//! Command-line front end.
//!
//! Every subcommand produces either a single record or a table, written as
//! CSV (default) or JSON. Output depends only on the arguments.
//!
//! Exit codes: 0 success, 1 majorization violated (`verify` only), 2 usage
//! or degeneracy error.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value as Json};

use crate::asym::{
    alignment_bracket, approx_steps, approximation_error_sweep, find_exact_alignment, guarded_grid,
};
use crate::error::Error;
use crate::evolve::{alignment_ratio, argmax_steps, optimal_steps, plan_steps, trajectory};
use crate::kernel::{Analysis, GroverParams};
use crate::major::{lorenz_series, step_by_step_check};

/// Step window used when no optimal step count is available.
pub const FALLBACK_M_MAX: usize = 30;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ggmaj",
    version,
    about = "Generalized Grover kernels: spectra, trajectories, majorization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Eigenphases and amplitude components for one (N, t, g)
    Spectrum,
    /// delta_omega, delta_a, |a1|, |a2| over a uniform t grid with g = t + offset
    Sweep,
    /// Marked and per-unmarked probabilities for m = 0 ..= m-max
    Trajectory,
    /// Lorenz-curve cumulants in long format
    Lorenz,
    /// Exact, oracle and large-N step counts
    Steps,
    /// Step-by-step majorization check (exit 1 when violated)
    Verify,
    /// Relative error of the large-N delta_omega over a guarded t grid
    ApproxError,
    /// Phase t at which the search succeeds with certainty
    ExactT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Dimension N; `approx-error` also takes `A..B`, `A..B:STEP` or `A,B,C`
    #[arg(long, global = true)]
    pub n: Option<String>,

    /// Step for `--n A..B`
    #[arg(long, global = true, default_value_t = 50)]
    pub n_step: u64,

    /// beta = e^{it}; accepts decimals and forms like `pi`, `pi/2`, `5pi/6`
    #[arg(long, global = true, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub t: f64,

    /// delta = e^{i(t + g_offset)}
    #[arg(long, global = true, default_value = "0", value_parser = parse_angle, allow_hyphen_values = true)]
    pub g_offset: f64,

    #[arg(long, global = true, default_value_t = 64)]
    pub grid_points: usize,

    #[arg(long, global = true)]
    pub m_max: Option<usize>,

    #[arg(long, global = true, default_value_t = 1)]
    pub stride: usize,

    /// Target step count for `exact-t`
    #[arg(long, global = true)]
    pub target_m: Option<usize>,

    /// Lower end of the `exact-t` bracket
    #[arg(long, global = true, value_parser = parse_angle, allow_hyphen_values = true)]
    pub t_lo: Option<f64>,

    /// Upper end of the `exact-t` bracket
    #[arg(long, global = true, value_parser = parse_angle, allow_hyphen_values = true)]
    pub t_hi: Option<f64>,

    /// Search horizon for the argmax oracle in `steps`
    #[arg(long, global = true)]
    pub horizon: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

/// Validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n: Vec<u64>,
    pub t: f64,
    pub g_offset: f64,
    pub grid_points: usize,
    pub m_max: Option<usize>,
    pub stride: usize,
    pub target_m: Option<usize>,
    pub bracket: Option<(f64, f64)>,
    pub horizon: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parses an angle in radians: a decimal literal, or `[-][c][*]pi[/d]`
/// such as `pi`, `-pi/3`, `5pi/6`, `2*pi`, `0.5pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<f64>() {
        return if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("angle `{s}` is not finite"))
        };
    }
    let bad = || format!("cannot parse angle `{s}`");
    let lower = s.to_ascii_lowercase();
    let (sign, body) = match lower.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, lower.strip_prefix('+').unwrap_or(&lower)),
    };
    let idx = body.find("pi").ok_or_else(bad)?;
    let coeff = body[..idx].trim().trim_end_matches('*').trim();
    let coeff = if coeff.is_empty() {
        1.0
    } else {
        coeff.parse::<f64>().map_err(|_| bad())?
    };
    let rest = body[idx + 2..].trim();
    let denom = match rest.strip_prefix('/') {
        Some(d) => d.trim().parse::<f64>().map_err(|_| bad())?,
        None if rest.is_empty() => 1.0,
        None => return Err(bad()),
    };
    if denom == 0.0 || !coeff.is_finite() {
        return Err(bad());
    }
    Ok(sign * coeff * PI / denom)
}

/// Parses `N`, `A..B` (with `step`), `A..B:STEP` or `A,B,C`.
pub fn parse_n_list(s: &str, step: u64) -> Result<Vec<u64>, String> {
    let bad = || format!("cannot parse N list `{s}`");
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let (b, step) = match b.split_once(':') {
            Some((b, st)) => (b, st.trim().parse::<u64>().map_err(|_| bad())?),
            None => (b, step),
        };
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if step == 0 || a > b {
            return Err(bad());
        }
        return Ok((a..=b).step_by(step as usize).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse::<u64>().map_err(|_| bad()))
        .collect()
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let o = &cli.opts;
        let n = match &o.n {
            Some(s) => parse_n_list(s, o.n_step).map_err(CliError::Usage)?,
            None => return Err(CliError::Usage("--n is required".into())),
        };
        if n.is_empty() || n.iter().any(|&v| v < 2) {
            return Err(CliError::Usage("every N must be at least 2".into()));
        }
        if n.len() > 1 && cli.command != Command::ApproxError {
            return Err(CliError::Usage(
                "only approx-error accepts several values of N".into(),
            ));
        }
        if o.grid_points < 2 && matches!(cli.command, Command::Sweep | Command::ApproxError) {
            return Err(CliError::Usage("--grid-points must be at least 2".into()));
        }
        if o.stride == 0 {
            return Err(CliError::Usage("--stride must be at least 1".into()));
        }
        let bracket = match (o.t_lo, o.t_hi) {
            (Some(lo), Some(hi)) => Some((lo, hi)),
            (None, None) => None,
            _ => return Err(CliError::Usage("--t-lo and --t-hi go together".into())),
        };
        Ok(RunConfig {
            command: cli.command,
            n,
            t: o.t,
            g_offset: o.g_offset,
            grid_points: o.grid_points,
            m_max: o.m_max,
            stride: o.stride,
            target_m: o.target_m,
            bracket,
            horizon: o.horizon,
            format: o.format,
            output: o.output.clone(),
        })
    }

    fn single_n(&self) -> u64 {
        self.n[0]
    }

    fn params(&self) -> Result<GroverParams, CliError> {
        Ok(GroverParams::with_offset(
            self.single_n(),
            self.t,
            self.g_offset,
        )?)
    }
}

/// A cell of tabular output.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) if v.is_nan() => "NaN".into(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Float(v) => serde_json::Number::from_f64(*v)
                .map(Json::Number)
                .unwrap_or(Json::Null),
            Cell::Int(v) => Json::from(*v),
            Cell::Bool(b) => Json::Bool(*b),
            Cell::Empty => Json::Null,
        }
    }
}

/// Result of one command, before formatting.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    /// Key-value pairs; CSV renders them as `key,value` rows.
    Record(Vec<(&'static str, Cell)>),
    Table {
        columns: Vec<&'static str>,
        rows: Vec<Vec<Cell>>,
    },
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut s = String::new();
        match self {
            Output::Record(fields) => {
                s.push_str("key,value\n");
                for (k, v) in fields {
                    let _ = writeln!(s, "{k},{}", v.csv());
                }
            }
            Output::Table { columns, rows } => {
                s.push_str(&columns.join(","));
                s.push('\n');
                for row in rows {
                    let line: Vec<String> = row.iter().map(Cell::csv).collect();
                    s.push_str(&line.join(","));
                    s.push('\n');
                }
            }
        }
        s
    }

    fn to_json(&self) -> String {
        let value = match self {
            Output::Record(fields) => Json::Object(
                fields
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.json()))
                    .collect::<Map<_, _>>(),
            ),
            Output::Table { columns, rows } => Json::Array(
                rows.iter()
                    .map(|row| {
                        Json::Object(
                            columns
                                .iter()
                                .zip(row)
                                .map(|(k, v)| (k.to_string(), v.json()))
                                .collect::<Map<_, _>>(),
                        )
                    })
                    .collect(),
            ),
        };
        let mut s = serde_json::to_string_pretty(&value).expect("serializable");
        s.push('\n');
        s
    }
}

fn float(v: f64) -> Cell {
    Cell::Float(v)
}

fn degenerate_hint(e: Error) -> CliError {
    match e {
        Error::DegenerateSpectrum { gap } => CliError::Compute(Error::InvalidArgument(format!(
            "degenerate spectrum (|xi1 - xi2| = {gap:e}): beta = delta = -1 makes the kernel the identity; \
             no spectral decomposition exists"
        ))),
        other => CliError::Compute(other),
    }
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<Output, CliError> {
    let params = cfg.params()?;
    let a = Analysis::new(params).map_err(degenerate_hint)?;
    Ok(Output::Record(vec![
        ("omega1", float(a.spectral.omega1())),
        ("omega2", float(a.spectral.omega2())),
        ("delta_omega", float(a.spectral.delta_omega)),
        ("abs_a1", float(a.decomp.a1().norm())),
        ("abs_a2", float(a.decomp.a2().norm())),
        ("delta_a", float(a.decomp.delta_a)),
        ("sum_abs", float(a.decomp.sum_abs())),
        ("is_efficient", Cell::Bool(params.is_efficient())),
    ]))
}

fn cmd_sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    let n = cfg.single_n();
    let rows = (0..cfg.grid_points)
        .map(|i| {
            let t = TAU * i as f64 / cfg.grid_points as f64;
            let params = GroverParams::with_offset(n, t, cfg.g_offset)?;
            Ok(match Analysis::new(params) {
                Ok(a) => vec![
                    float(t),
                    float(a.spectral.delta_omega),
                    float(a.decomp.delta_a),
                    float(a.decomp.a1().norm()),
                    float(a.decomp.a2().norm()),
                    Cell::Bool(false),
                ],
                Err(Error::DegenerateSpectrum { .. }) => {
                    vec![
                        float(t),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Bool(true),
                    ]
                }
                Err(e) => return Err(CliError::Compute(e)),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Output::Table {
        columns: vec![
            "t",
            "delta_omega",
            "delta_a",
            "abs_a1",
            "abs_a2",
            "degenerate",
        ],
        rows,
    })
}

/// `m_max` if given, else the optimal step count, else [`FALLBACK_M_MAX`].
fn default_window(cfg: &RunConfig, params: &GroverParams) -> usize {
    cfg.m_max
        .unwrap_or_else(|| plan_steps(params).map(|p| p.m).unwrap_or(FALLBACK_M_MAX))
}

fn cmd_trajectory(cfg: &RunConfig) -> Result<Output, CliError> {
    let params = cfg.params()?;
    let traj = trajectory(&params, default_window(cfg, &params));
    let rows = traj
        .iter()
        .map(|(m, d)| vec![Cell::Int(m as u64), float(d.p0()), float(d.p_other())])
        .collect();
    Ok(Output::Table {
        columns: vec!["m", "p_x0", "p_perp_each"],
        rows,
    })
}

fn cmd_lorenz(cfg: &RunConfig) -> Result<Output, CliError> {
    let params = cfg.params()?;
    let traj = trajectory(&params, default_window(cfg, &params));
    let mut rows = Vec::new();
    for curve in lorenz_series(&traj, cfg.stride)? {
        for (k, c) in curve.cumulants.iter().enumerate() {
            rows.push(vec![
                Cell::Int(curve.m as u64),
                Cell::Int(k as u64 + 1),
                float(*c),
            ]);
        }
    }
    Ok(Output::Table {
        columns: vec!["m", "k", "cumulant"],
        rows,
    })
}

fn cmd_steps(cfg: &RunConfig) -> Result<Output, CliError> {
    let params = cfg.params()?;
    let a = Analysis::new(params).map_err(degenerate_hint)?;
    let plan = optimal_steps(&a.decomp, &a.spectral)?;
    let (m_argmax, _) = argmax_steps(&params, cfg.horizon)?;
    let m_approx = match approx_steps(cfg.t, params.n()) {
        Ok(m) => Cell::Int(m),
        Err(Error::DivergentSteps(_)) => Cell::Empty,
        Err(e) => return Err(e.into()),
    };
    Ok(Output::Record(vec![
        ("M_exact", Cell::Int(plan.m as u64)),
        ("M_argmax", Cell::Int(m_argmax as u64)),
        ("M_approx", m_approx),
        ("p_at_M", float(plan.p_at_m)),
    ]))
}

fn cmd_verify(cfg: &RunConfig) -> Result<(Output, i32), CliError> {
    let params = cfg.params()?;
    let m_end = match (params.is_efficient(), plan_steps(&params)) {
        (true, Ok(plan)) => cfg.m_max.unwrap_or(plan.m).min(plan.m),
        _ => cfg.m_max.unwrap_or(FALLBACK_M_MAX),
    };
    let report = step_by_step_check(&trajectory(&params, m_end), m_end)?;
    let first = report
        .first_violation
        .as_ref()
        .map_or(Cell::Empty, |v| Cell::Int(v.step as u64));
    let code = if report.holds_overall {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    };
    Ok((
        Output::Record(vec![
            ("holds_overall", Cell::Bool(report.holds_overall)),
            ("first_violation", first),
            ("m_end", Cell::Int(m_end as u64)),
        ]),
        code,
    ))
}

fn cmd_approx_error(cfg: &RunConfig) -> Result<Output, CliError> {
    let grid = guarded_grid(cfg.grid_points);
    let multi = cfg.n.len() > 1;
    let mut rows = Vec::new();
    for &n in &cfg.n {
        for r in approximation_error_sweep(n, &grid)? {
            let mut row = vec![
                float(r.t),
                float(r.exact_dw),
                float(r.approx_dw),
                float(r.abs_err),
                float(r.rel_err_percent),
            ];
            if multi {
                row.insert(0, Cell::Int(n));
            }
            rows.push(row);
        }
    }
    let mut columns = vec!["t", "exact_dw", "approx_dw", "abs_err", "rel_err_percent"];
    if multi {
        columns.insert(0, "n");
    }
    Ok(Output::Table { columns, rows })
}

fn cmd_exact_t(cfg: &RunConfig) -> Result<Output, CliError> {
    let n = cfg.single_n();
    let target = match cfg.target_m {
        Some(m) => m,
        None => {
            // smallest integer the ratio reaches, since it grows away from t = 0
            let a = Analysis::new(GroverParams::efficient(n, 0.0)?)?;
            let r = alignment_ratio(&a.decomp, &a.spectral);
            if (r - r.round()).abs() <= crate::asym::ALIGNMENT_TOL {
                r.round() as usize
            } else {
                r.ceil() as usize
            }
        }
    };
    let bracket = match cfg.bracket {
        Some(b) => b,
        None => alignment_bracket(n, target, 2048)?,
    };
    let sol = find_exact_alignment(n, target, bracket)?;
    Ok(Output::Table {
        columns: vec!["t_star", "M", "ratio", "p_success"],
        rows: vec![vec![
            float(sol.t),
            Cell::Int(sol.m as u64),
            float(sol.ratio),
            float(sol.p_success),
        ]],
    })
}

/// Runs a validated configuration, returning the output and exit code.
pub fn execute(cfg: &RunConfig) -> Result<(Output, i32), CliError> {
    let out = match cfg.command {
        Command::Spectrum => cmd_spectrum(cfg)?,
        Command::Sweep => cmd_sweep(cfg)?,
        Command::Trajectory => cmd_trajectory(cfg)?,
        Command::Lorenz => cmd_lorenz(cfg)?,
        Command::Steps => cmd_steps(cfg)?,
        Command::Verify => return cmd_verify(cfg),
        Command::ApproxError => cmd_approx_error(cfg)?,
        Command::ExactT => cmd_exact_t(cfg)?,
    };
    Ok((out, EXIT_OK))
}

/// Parses nothing; runs `cli`, writes the rendered output to `--output` or
/// `stdout`, diagnostics to `stderr`, and returns the process exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = RunConfig::from_cli(cli).and_then(|cfg| {
        let (out, code) = execute(&cfg)?;
        let text = out.render(cfg.format);
        match &cfg.output {
            Some(path) => std::fs::write(path, text)?,
            None => stdout.write_all(text.as_bytes())?,
        }
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "ggmaj: {e}");
            EXIT_ERROR
        }
    }
}
