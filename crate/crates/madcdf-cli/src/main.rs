//! `madcdf` — MAD-curve shape statistics, CDF estimation, and Monte Carlo
//! benchmarks over a single numeric CSV column.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. All numeric output is
//! printed with the shortest decimal representation that round-trips.

mod csvio;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use madcdf::{
    build_mad_curve, default_richardson_config, estimate, estimate_richardson_adjusted,
    estimate_richardson_raw, pointwise_ci, quantile_from_estimate, run_benchmark, shape_summary,
    theoretical_shape, BenchConfig, BenchError, BenchReport, Builtin, CdfEstimate, DistSpec,
    Method, Sample, ScVariant,
};

use csvio::{load_csv, ColumnSelector, MissingPolicy};

/// Environment variable capping benchmark worker threads.
const THREADS_VAR: &str = "MADCDF_THREADS";

#[derive(Parser)]
#[command(
    name = "madcdf",
    version,
    about = "MAD-curve shape statistics, CDF estimation, and ASE benchmarks",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct InputArgs {
    /// CSV file with the data column
    csv: PathBuf,
    /// Column name or 0-based index (default: first numeric column)
    #[arg(long)]
    col: Option<String>,
    /// Missing-value policy for the selected column
    #[arg(long, value_enum, default_value_t)]
    missing: MissingPolicy,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print MAD-based shape measures of a data column as JSON
    Shape {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Write the MAD-plot dataset (dispersion curves and envelope lines) as CSV
    Madplot {
        #[command(flatten)]
        input: InputArgs,
        /// Evaluate on an evenly spaced grid of this many points instead of
        /// the sample's own order statistics
        #[arg(long)]
        grid: Option<usize>,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the CDF at the sample's order statistics and write it as CSV
    Cdf {
        #[command(flatten)]
        input: InputArgs,
        /// Estimator: empirical, forward, backward, centre, fch, obc,
        /// richardson (adjusted), or richardson-raw
        #[arg(long)]
        method: String,
        /// Initial step for the richardson methods (default: range/sqrt(n))
        #[arg(long)]
        h0: Option<f64>,
        /// Extrapolation depth for the richardson methods
        #[arg(long)]
        levels: Option<usize>,
        /// Add pointwise confidence bounds at this level, e.g. 0.99
        #[arg(long)]
        ci: Option<f64>,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Invert an estimated CDF at a probability and print the quantile
    Quantile {
        #[command(flatten)]
        input: InputArgs,
        /// Probability in (0, 1)
        #[arg(long)]
        p: f64,
        /// Estimator (as for `cdf`; must be monotone)
        #[arg(long)]
        method: String,
    },
    /// Run the Monte Carlo ASE benchmark over built-in mixture distributions
    Bench {
        /// Comma-separated distribution names
        #[arg(long, value_delimiter = ',', default_value = "G,SS,OU,SB,SC")]
        dist: Vec<String>,
        /// Comma-separated sample sizes
        #[arg(long, value_delimiter = ',', default_value = "20,50,200")]
        n: Vec<usize>,
        /// Replications per cell
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        /// Master seed (required; echoed in the report metadata)
        #[arg(long)]
        seed: u64,
        /// Comma-separated estimator names
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "empirical,forward,backward,centre,obc,fch,richardson_adjusted"
        )]
        estimators: Vec<String>,
        /// Use the literal geometric scale sequence for the SC mixture
        #[arg(long)]
        sc_paper_literal: bool,
        /// Output CSV path; a .meta.json sidecar is written next to it
        #[arg(long)]
        out: PathBuf,
    },
    /// Print theoretical wideness measures for six reference distributions
    Table1 {
        /// Quantile grid resolution
        #[arg(long, default_value_t = 100_000)]
        grid: usize,
    },
}

/// Errors split by exit code: usage (1) vs data (2).
enum AppError {
    Usage(String),
    Data(anyhow::Error),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Data(_) => 2,
        }
    }
}

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

fn data(err: impl Into<anyhow::Error>) -> AppError {
    AppError::Data(err.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let kind = err.kind();
            if kind == ErrorKind::DisplayHelp || kind == ErrorKind::DisplayVersion {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                AppError::Usage(msg) => eprintln!("error: {msg}"),
                AppError::Data(e) => eprintln!("error: {e:#}"),
            }
            ExitCode::from(err.code())
        }
    }
}

fn run(cmd: Cmd) -> Result<(), AppError> {
    match cmd {
        Cmd::Shape { input } => cmd_shape(&input),
        Cmd::Madplot { input, grid, out } => cmd_madplot(&input, grid, &out),
        Cmd::Cdf {
            input,
            method,
            h0,
            levels,
            ci,
            out,
        } => cmd_cdf(&input, &method, h0, levels, ci, &out),
        Cmd::Quantile { input, p, method } => cmd_quantile(&input, p, &method),
        Cmd::Bench {
            dist,
            n,
            reps,
            seed,
            estimators,
            sc_paper_literal,
            out,
        } => cmd_bench(&dist, &n, reps, seed, &estimators, sc_paper_literal, &out),
        Cmd::Table1 { grid } => cmd_table1(grid),
    }
}

fn load_input(input: &InputArgs) -> Result<Sample, AppError> {
    let selector = ColumnSelector {
        path: input.csv.clone(),
        column: input.col.clone(),
        missing: input.missing,
    };
    load_csv(&selector).map_err(data)
}

fn parse_method(name: &str) -> Result<Method, AppError> {
    name.parse::<Method>().map_err(|e| usage(e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), AppError> {
    std::fs::write(path, contents)
        .map_err(|e| data(anyhow::Error::new(e).context(format!("cannot write {path:?}"))))
}

/// Quotes a CSV field only when RFC 4180 requires it.
fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn cmd_shape(input: &InputArgs) -> Result<(), AppError> {
    let sample = load_input(input)?;
    let summary = shape_summary(&sample).map_err(data)?;
    let json = serde_json::to_string_pretty(&summary).map_err(data)?;
    println!("{json}");
    Ok(())
}

fn cmd_madplot(input: &InputArgs, grid: Option<usize>, out: &Path) -> Result<(), AppError> {
    let sample = load_input(input)?;
    let dense_grid = match grid {
        None => None,
        Some(points) => {
            if points < 2 {
                return Err(usage("--grid must be at least 2 points"));
            }
            let (lo, hi) = (sample.min(), sample.max());
            if lo == hi {
                return Err(usage(
                    "--grid needs a sample with nonzero range; omit it to evaluate at the data",
                ));
            }
            let step = (hi - lo) / (points - 1) as f64;
            Some(
                (0..points)
                    .map(|i| {
                        if i + 1 == points {
                            hi
                        } else {
                            lo + step * i as f64
                        }
                    })
                    .collect::<Vec<f64>>(),
            )
        }
    };
    let curve = build_mad_curve(&sample, dense_grid.as_deref()).map_err(data)?;

    let mut body = String::from("v,delta,delta_plus,delta_minus,line_left,line_right\n");
    for p in &curve.points {
        writeln!(
            body,
            "{},{},{},{},{},{}",
            p.v, p.delta, p.delta_plus, p.delta_minus, p.line_left, p.line_right
        )
        .expect("string write");
    }
    write_file(out, &body)
}

fn estimate_with_flags(
    sample: &Sample,
    method: Method,
    h0: Option<f64>,
    levels: Option<usize>,
) -> Result<CdfEstimate, AppError> {
    let richardson = matches!(method, Method::RichardsonRaw | Method::RichardsonAdjusted);
    if !richardson && (h0.is_some() || levels.is_some()) {
        return Err(usage("--h0/--levels apply only to the richardson methods"));
    }
    if richardson {
        let mut cfg = default_richardson_config(sample);
        if let Some(h) = h0 {
            if !(h.is_finite() && h > 0.0) {
                return Err(usage("--h0 must be a positive number"));
            }
            cfg.h0 = h;
        }
        if let Some(depth) = levels {
            if depth == 0 {
                return Err(usage("--levels must be at least 1"));
            }
            cfg.max_levels = depth;
        }
        match method {
            Method::RichardsonRaw => estimate_richardson_raw(sample, Some(cfg)).map_err(data),
            _ => estimate_richardson_adjusted(sample, Some(cfg)).map_err(data),
        }
    } else {
        estimate(sample, method).map_err(data)
    }
}

fn cmd_cdf(
    input: &InputArgs,
    method_name: &str,
    h0: Option<f64>,
    levels: Option<usize>,
    ci: Option<f64>,
    out: &Path,
) -> Result<(), AppError> {
    let method = parse_method(method_name)?;
    if let Some(level) = ci {
        if !(level > 0.0 && level < 1.0) {
            return Err(usage("--ci must lie strictly between 0 and 1"));
        }
        if method == Method::RichardsonRaw {
            return Err(usage(
                "--ci needs a monotone estimate; richardson-raw is not adjusted",
            ));
        }
    }
    let sample = load_input(input)?;
    let est = estimate_with_flags(&sample, method, h0, levels)?;

    let mut body = String::new();
    match ci {
        None => {
            body.push_str("v,p\n");
            for p in &est.points {
                writeln!(body, "{},{}", p.v, p.p).expect("string write");
            }
        }
        Some(level) => {
            let band = pointwise_ci(&est, level).map_err(data)?;
            body.push_str("v,p,lo,hi\n");
            for (p, b) in est.points.iter().zip(&band) {
                writeln!(body, "{},{},{},{}", p.v, p.p, b.lo, b.hi).expect("string write");
            }
        }
    }
    write_file(out, &body)
}

fn cmd_quantile(input: &InputArgs, p: f64, method_name: &str) -> Result<(), AppError> {
    let method = parse_method(method_name)?;
    if method == Method::RichardsonRaw {
        return Err(usage(
            "quantile needs a monotone estimate; use richardson instead of richardson-raw",
        ));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(usage("--p must lie strictly between 0 and 1"));
    }
    let sample = load_input(input)?;
    let est = estimate_with_flags(&sample, method, None, None)?;
    let q = quantile_from_estimate(&est, p).map_err(data)?;
    if q.clamped {
        eprintln!("note: p={p} lies outside the estimated range; result clamped to an endpoint");
    }
    println!("{}", q.value);
    Ok(())
}

fn parse_dists(names: &[String]) -> Result<Vec<Builtin>, AppError> {
    names
        .iter()
        .map(|name| name.parse::<Builtin>().map_err(|e| usage(e.to_string())))
        .collect()
}

fn parse_estimators(names: &[String]) -> Result<Vec<Method>, AppError> {
    names.iter().map(|name| parse_method(name)).collect()
}

fn cap_threads() -> Result<(), AppError> {
    if let Ok(raw) = std::env::var(THREADS_VAR) {
        let threads: usize = raw.parse().ok().filter(|&t| t >= 1).ok_or_else(|| {
            usage(format!(
                "{THREADS_VAR} must be a positive integer, got {raw:?}"
            ))
        })?;
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    Ok(())
}

fn render_bench_csv(report: &BenchReport) -> String {
    let mut body = String::from("dist,n,estimator,mean_ase,mc_se,reps\n");
    for cell in &report.cells {
        writeln!(
            body,
            "{},{},{},{},{},{}",
            cell.dist, cell.n, cell.estimator, cell.mean_ase, cell.mc_std_error, cell.reps
        )
        .expect("string write");
    }
    body
}

#[derive(serde::Serialize)]
struct BenchSidecar<'a> {
    config: &'a BenchConfig,
    version: &'a str,
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

fn cmd_bench(
    dist: &[String],
    sizes: &[usize],
    reps: usize,
    seed: u64,
    estimators: &[String],
    sc_paper_literal: bool,
    out: &Path,
) -> Result<(), AppError> {
    cap_threads()?;
    let config = BenchConfig {
        distributions: parse_dists(dist)?,
        sizes: sizes.to_vec(),
        reps,
        estimators: parse_estimators(estimators)?,
        master_seed: seed,
        sc_variant: if sc_paper_literal {
            ScVariant::PaperLiteral
        } else {
            ScVariant::MarronWand
        },
    };
    let report = run_benchmark(&config).map_err(|e| match e {
        BenchError::InvalidConfig(msg) => usage(msg),
        other => data(other),
    })?;
    write_file(out, &render_bench_csv(&report))?;

    let sidecar = BenchSidecar {
        config: &report.config,
        version: &report.version,
    };
    let json = serde_json::to_string_pretty(&sidecar).map_err(data)?;
    write_file(&sidecar_path(out), &format!("{json}\n"))
}

fn cmd_table1(grid: usize) -> Result<(), AppError> {
    let rows: Vec<(&str, DistSpec)> = vec![
        ("beta(0.1,0.1)", DistSpec::beta(0.1, 0.1).expect("valid")),
        ("beta(1,1)", DistSpec::beta(1.0, 1.0).expect("valid")),
        ("normal", DistSpec::normal(0.0, 1.0).expect("valid")),
        ("logistic", DistSpec::logistic(0.0, 1.0).expect("valid")),
        ("laplace", DistSpec::laplace(0.0, 1.0).expect("valid")),
        ("t3", DistSpec::t3()),
    ];
    let mut body = String::from("dist,w_r,w_l,w,l\n");
    for (label, spec) in &rows {
        let shape = theoretical_shape(spec, grid).map_err(|e| usage(e.to_string()))?;
        writeln!(
            body,
            "{},{},{},{},{}",
            csv_field(label),
            shape.w_r,
            shape.w_l,
            shape.w,
            shape.l
        )
        .expect("string write");
    }
    print!("{body}");
    Ok(())
}
