//! Command-line front end: simulate paths, emit error tables, dump operator
//! matrices, and sample basis functions.
//!
//! All numeric output is deterministic: CSV floats use fixed
//! 17-significant-digit scientific notation, JSON uses the shortest
//! round-trip representation, and identical invocations produce
//! byte-identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fbm_spectral::accuracy::{self, reference};
use fbm_spectral::fbm::{self, HurstParams};
use fbm_spectral::operators;
use fbm_spectral::sim::{self, Mode};
use fbm_spectral::{BasisSpec, SpectralMatrix};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "fbm-spectral", version, about = "Spectral simulation of fractional Brownian motion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate sample paths on a time grid
    Simulate {
        /// Hurst parameter in (0, 1)
        #[arg(long, default_value_t = 0.5)]
        hurst: f64,
        /// Right end T of the time interval [0, T]
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        /// Truncation order L (number of basis functions)
        #[arg(long, default_value_t = 64)]
        order: usize,
        /// Number of independent paths
        #[arg(long, default_value_t = 1)]
        paths: usize,
        /// Point count for a uniform grid, or an explicit comma-separated time list
        #[arg(long, default_value = "1000")]
        grid: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// strong (kernel), weak (Cholesky factor), or liouville
        #[arg(long, default_value = "strong")]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Covariance approximation error tables
    Errors {
        /// Hurst values: single, comma list, or inclusive range a:b:step
        #[arg(long, default_value = "0.5")]
        hurst: String,
        /// Comma-separated truncation orders
        #[arg(long, default_value = "64")]
        orders: String,
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        /// Compare each cell against the embedded reference tables and fail on deviation
        #[arg(long)]
        paper_check: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump one operator matrix (row-major)
    Operator {
        /// One of mult:A, int-left:B, int-right:B, inversion, kernel:H, covariance:H, cholesky:H
        selector: String,
        #[arg(long, default_value_t = 64)]
        order: usize,
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the basis functions on a grid
    Basis {
        #[arg(long, default_value_t = 64)]
        order: usize,
        #[arg(long, default_value_t = 1.0)]
        horizon: f64,
        /// Point count for a uniform grid, or an explicit comma-separated time list
        #[arg(long, default_value = "1000")]
        grid: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Usage errors exit with 2, runtime/check failures with 1.
enum Failure {
    Usage(String),
    Run(String),
    CheckFailed(String),
}

impl From<fbm_spectral::Error> for Failure {
    fn from(e: fbm_spectral::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_grid(arg: &str, horizon: f64) -> Result<Vec<f64>, Failure> {
    let trimmed = arg.trim();
    if let Ok(count) = trimmed.parse::<usize>() {
        if count < 2 {
            return Err(Failure::Usage(format!(
                "uniform grid needs at least 2 points, got {count}"
            )));
        }
        return Ok((0..count)
            .map(|i| horizon * i as f64 / (count - 1) as f64)
            .collect());
    }
    let points: Result<Vec<f64>, _> = trimmed.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match points {
        Ok(p) if !p.is_empty() => Ok(p),
        _ => Err(Failure::Usage(format!(
            "grid must be a point count or a comma-separated time list, got {arg:?}"
        ))),
    }
}

fn parse_hursts(arg: &str) -> Result<Vec<f64>, Failure> {
    let bad = |why: &str| Failure::Usage(format!("invalid Hurst specification {arg:?}: {why}"));
    if arg.contains(':') {
        let parts: Vec<&str> = arg.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("range form is a:b:step"));
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad("bad range start"))?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad("bad range end"))?;
        let step: f64 = parts[2].trim().parse().map_err(|_| bad("bad range step"))?;
        if step.is_nan() || step <= 0.0 || b < a {
            return Err(bad("need step > 0 and end >= start"));
        }
        let mut out = Vec::new();
        let mut k = 0u64;
        loop {
            let v = a + k as f64 * step;
            if v > b + 1e-12 {
                break;
            }
            out.push(v.min(b));
            k += 1;
        }
        return Ok(out);
    }
    let list: Result<Vec<f64>, _> = arg.split(',').map(|p| p.trim().parse::<f64>()).collect();
    match list {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(bad("expected a number, comma list, or a:b:step")),
    }
}

fn parse_orders(arg: &str) -> Result<Vec<usize>, Failure> {
    let list: Result<Vec<usize>, _> = arg
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<usize>())
        .collect();
    match list {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(Failure::Usage(format!(
            "orders must be a non-empty comma-separated list of positive integers, got {arg:?}"
        ))),
    }
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| {
            Failure::Run(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    hurst: f64,
    horizon: f64,
    order: usize,
    paths: usize,
    grid_arg: &str,
    seed: u64,
    mode: Mode,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let grid = parse_grid(grid_arg, horizon)?;
    let sample = sim::simulate(hurst, horizon, order, &grid, paths, seed, mode)?;
    let content = match format {
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "# fbm-spectral {VERSION}");
            let _ = writeln!(
                s,
                "# hurst={hurst} horizon={horizon} order={order} seed={seed} mode={mode} paths={paths}"
            );
            let mut header = String::from("# columns: t");
            for p in 0..paths {
                let _ = write!(header, ",path{}", p + 1);
            }
            let _ = writeln!(s, "{header}");
            for (gi, t) in sample.grid.iter().enumerate() {
                let mut line = fmt_float(*t);
                for row in &sample.values {
                    line.push(',');
                    line.push_str(&fmt_float(row[gi]));
                }
                let _ = writeln!(s, "{line}");
            }
            s
        }
        Format::Json => {
            let doc = json!({
                "meta": {
                    "version": VERSION,
                    "hurst": hurst,
                    "horizon": horizon,
                    "order": order,
                    "seed": seed,
                    "mode": mode.to_string(),
                    "paths": paths,
                },
                "data": {
                    "t": sample.grid,
                    "paths": sample.values,
                },
            });
            format!("{doc}\n")
        }
    };
    write_output(out, &content)
}

fn reference_lookup(h: f64, order: usize) -> Option<(f64, f64)> {
    let row = reference::HURSTS.iter().position(|&rh| (rh - h).abs() < 1e-12)?;
    let col = reference::ORDERS.iter().position(|&ro| ro == order)?;
    Some((reference::EPS[row][col], reference::EPS1[row][col]))
}

fn cmd_errors(
    hurst_arg: &str,
    orders_arg: &str,
    horizon: f64,
    paper_check: bool,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let hursts = parse_hursts(hurst_arg)?;
    let orders = parse_orders(orders_arg)?;
    let table = accuracy::error_table(&hursts, &orders, horizon)?;

    let rates: Vec<Option<f64>> = table
        .iter()
        .map(|row| {
            if orders.len() >= 3 {
                let eps: Vec<f64> = row.iter().map(|r| r.eps).collect();
                accuracy::fit_rate(&orders, &eps).ok()
            } else {
                None
            }
        })
        .collect();

    if paper_check {
        if (horizon - 1.0).abs() > 0.0 {
            return Err(Failure::Usage(
                "reference comparison is defined for horizon 1 only".into(),
            ));
        }
        let mut misses = Vec::new();
        for (hi, row) in table.iter().enumerate() {
            for report in row {
                let Some((eps_ref, eps1_ref)) = reference_lookup(hursts[hi], report.order) else {
                    return Err(Failure::Usage(format!(
                        "cell H={} L={} is outside the reference grid",
                        hursts[hi], report.order
                    )));
                };
                if (report.eps - eps_ref).abs() > reference::TOLERANCE {
                    misses.push(format!(
                        "eps H={} L={}: {} vs reference {eps_ref}",
                        hursts[hi], report.order, report.eps
                    ));
                }
                if (report.eps1 - eps1_ref).abs() > reference::TOLERANCE {
                    misses.push(format!(
                        "eps1 H={} L={}: {} vs reference {eps1_ref}",
                        hursts[hi], report.order, report.eps1
                    ));
                }
            }
        }
        if !misses.is_empty() {
            return Err(Failure::CheckFailed(misses.join("\n")));
        }
    }

    let content = match format {
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "# fbm-spectral {VERSION}");
            let _ = writeln!(s, "# horizon={horizon}");
            let _ = writeln!(s, "# columns: hurst,order,eps,eps1,eps2,rate");
            for (hi, row) in table.iter().enumerate() {
                for report in row {
                    let rate = rates[hi].map(fmt_float).unwrap_or_default();
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{rate}",
                        hursts[hi],
                        report.order,
                        fmt_float(report.eps),
                        fmt_float(report.eps1),
                        fmt_float(report.eps2),
                    );
                }
            }
            s
        }
        Format::Json => {
            let mut rows: Vec<serde_json::Value> = Vec::new();
            for (hi, row) in table.iter().enumerate() {
                for report in row {
                    rows.push(json!({
                        "hurst": hursts[hi],
                        "order": report.order,
                        "eps": report.eps,
                        "eps1": report.eps1,
                        "eps2": report.eps2,
                        "rate": rates[hi],
                    }));
                }
            }
            let doc = json!({
                "meta": { "version": VERSION, "horizon": horizon },
                "data": rows,
            });
            format!("{doc}\n")
        }
    };
    write_output(out, &content)
}

fn build_operator(selector: &str, spec: &BasisSpec) -> Result<SpectralMatrix, Failure> {
    let (name, arg) = match selector.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (selector, None),
    };
    let parse_arg = |what: &str| -> Result<f64, Failure> {
        arg.ok_or_else(|| Failure::Usage(format!("operator {name} needs :{what}")))?
            .parse::<f64>()
            .map_err(|_| Failure::Usage(format!("bad {what} in selector {selector:?}")))
    };
    match name {
        "mult" => Ok(operators::mult_matrix(parse_arg("alpha")?, spec)?),
        "int-left" => Ok(operators::frac_int_left(parse_arg("beta")?, spec)?),
        "int-right" => Ok(operators::frac_int_right(parse_arg("beta")?, spec)?),
        "inversion" => {
            if arg.is_some() {
                return Err(Failure::Usage("inversion takes no argument".into()));
            }
            Ok(operators::inversion_matrix(spec))
        }
        "kernel" => {
            let h = HurstParams::new(parse_arg("hurst")?)?;
            Ok(fbm::assemble_kernel(&h, spec)?)
        }
        "covariance" => {
            let h = HurstParams::new(parse_arg("hurst")?)?;
            Ok(fbm::covariance_spectrum(&h, spec)?)
        }
        "cholesky" => {
            let h = HurstParams::new(parse_arg("hurst")?)?;
            Ok(fbm::cholesky_factor(&fbm::covariance_spectrum(&h, spec)?)?)
        }
        other => Err(Failure::Usage(format!(
            "unknown operator {other:?}; expected mult:A, int-left:B, int-right:B, inversion, kernel:H, covariance:H, or cholesky:H"
        ))),
    }
}

fn cmd_operator(
    selector: &str,
    order: usize,
    horizon: f64,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let spec = BasisSpec::new(horizon, order)?;
    let matrix = build_operator(selector, &spec)?;
    // dumps are headerless so that coinciding operators produce identical files
    let content = match format {
        Format::Csv => {
            let mut s = String::new();
            for row in matrix.entries().rows() {
                let line: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
                let _ = writeln!(s, "{}", line.join(","));
            }
            s
        }
        Format::Json => {
            let rows: Vec<Vec<f64>> = matrix
                .entries()
                .rows()
                .into_iter()
                .map(|r| r.to_vec())
                .collect();
            let doc = json!({
                "meta": { "horizon": horizon, "order": order },
                "data": rows,
            });
            format!("{doc}\n")
        }
    };
    write_output(out, &content)
}

fn cmd_basis(
    order: usize,
    horizon: f64,
    grid_arg: &str,
    format: Format,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let spec = BasisSpec::new(horizon, order)?;
    let grid = parse_grid(grid_arg, horizon)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &t in &grid {
        rows.push(fbm_spectral::legendre::eval_basis(t, &spec)?);
    }
    let content = match format {
        Format::Csv => {
            let mut s = String::new();
            let _ = writeln!(s, "# fbm-spectral {VERSION}");
            let _ = writeln!(s, "# horizon={horizon} order={order}");
            let mut header = String::from("# columns: t");
            for i in 0..order {
                let _ = write!(header, ",p{i}");
            }
            let _ = writeln!(s, "{header}");
            for (t, row) in grid.iter().zip(&rows) {
                let mut line = fmt_float(*t);
                for v in row {
                    line.push(',');
                    line.push_str(&fmt_float(*v));
                }
                let _ = writeln!(s, "{line}");
            }
            s
        }
        Format::Json => {
            let doc = json!({
                "meta": { "version": VERSION, "horizon": horizon, "order": order },
                "data": { "t": grid, "basis": rows },
            });
            format!("{doc}\n")
        }
    };
    write_output(out, &content)
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(raw) = std::env::var("FBM_SPECTRAL_THREADS") {
        let n: usize = raw.trim().parse().map_err(|_| {
            Failure::Usage(format!("FBM_SPECTRAL_THREADS must be a non-negative integer, got {raw:?}"))
        })?;
        if n > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Run(format!("thread pool setup failed: {e}")))?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    match cli.command {
        Command::Simulate {
            hurst,
            horizon,
            order,
            paths,
            grid,
            seed,
            mode,
            format,
            out,
        } => cmd_simulate(
            hurst,
            horizon,
            order,
            paths,
            &grid,
            seed,
            mode,
            format,
            out.as_deref(),
        ),
        Command::Errors {
            hurst,
            orders,
            horizon,
            paper_check,
            format,
            out,
        } => cmd_errors(&hurst, &orders, horizon, paper_check, format, out.as_deref()),
        Command::Operator {
            selector,
            order,
            horizon,
            format,
            out,
        } => cmd_operator(&selector, order, horizon, format, out.as_deref()),
        Command::Basis {
            order,
            horizon,
            grid,
            format,
            out,
        } => cmd_basis(order, horizon, &grid, format, out.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
        Err(Failure::CheckFailed(msg)) => {
            eprintln!("reference check failed:\n{msg}");
            ExitCode::FAILURE
        }
    }
}
