//! Command-line front end: `fit`, `sample`, `curve`, `reliability` and
//! `moments`.
//!
//! Exit status is 0 on success, 1 on data or runtime errors and 2 on usage
//! errors. Output is assembled in memory and written only once the command
//! has succeeded, so a failed invocation never leaves a partial file.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::competitors::Family;
use crate::corpus::load_source;
use crate::dist::{RegParams, DEFAULT_DEPTH};
use crate::error::Error;
use crate::estimator::fit_mle;
use crate::gof::{self, GofReport};
use crate::relsim::{self, Topology};
use crate::rng::RngState;
use crate::sampler;

#[derive(Debug, Parser)]
#[command(
    name = "regmix",
    version,
    about = "Recursive exponential-gamma mixture lifetime toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the mixture and/or the competitor families to a dataset.
    Fit(FitArgs),
    /// Draw random lifetimes, one per line.
    Sample(SampleArgs),
    /// Emit a pdf, cdf or hazard curve as CSV.
    Curve(CurveArgs),
    /// Exact vs simulated two-component system reliability table.
    Reliability(ReliabilityArgs),
    /// Moments and summary indices.
    Moments(MomentsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    All,
    Reg,
    Gl3,
    Expgl,
    Ngl,
    Ql,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveKind {
    Pdf,
    Cdf,
    Hazard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TopologyArg {
    Parallel,
    Series,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: f64,
    /// Recursion depth (configuration, never fitted).
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub n: u32,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// `builtin:ex1`..`builtin:ex4` or a path to a one-value-per-line file.
    #[arg(long)]
    pub data: String,
    #[arg(long, value_enum, default_value_t = ModelChoice::All)]
    pub model: ModelChoice,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    pub what: CurveKind,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.01)]
    pub min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub max: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReliabilityArgs {
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    pub theta: f64,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub n: u32,
    #[arg(long, default_value_t = 100.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 10.0)]
    pub step: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = TopologyArg::Parallel)]
    pub topology: TopologyArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

/// Failure of a subcommand, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime(e: impl ToString) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Successful output: the payload and any warnings for standard error.
struct Rendered {
    body: String,
    output: Option<PathBuf>,
    warnings: Vec<String>,
}

fn params(alpha: f64, theta: f64, n: u32) -> Result<RegParams, CliError> {
    RegParams::new(alpha, theta, n).map_err(usage)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(rendered) => {
            for w in &rendered.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let written = match &rendered.output {
                Some(path) => std::fs::write(path, &rendered.body)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out
                    .write_all(rendered.body.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => 0,
                Err(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    1
                }
            }
        }
        Err(e) => {
            let (CliError::Usage(msg) | CliError::Runtime(msg)) = &e;
            let _ = writeln!(err, "error: {msg}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command) -> Result<Rendered, CliError> {
    match command {
        Command::Fit(a) => cmd_fit(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Curve(a) => cmd_curve(a),
        Command::Reliability(a) => cmd_reliability(a),
        Command::Moments(a) => cmd_moments(a),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn cmd_fit(args: &FitArgs) -> Result<Rendered, CliError> {
    if args.n == 0 {
        return Err(usage("--n must be >= 1"));
    }
    let data = load_source(&args.data).map_err(runtime)?;
    let mut warnings = Vec::new();
    let body = match args.model {
        ModelChoice::All => {
            let report = gof::build_report(&data, args.n);
            for r in report.rows.iter().filter(|r| !r.converged) {
                warnings.push(format!(
                    "{} fit did not converge: {}",
                    r.model,
                    r.messages.join("; ")
                ));
            }
            render_report(&report, args.format)
        }
        ModelChoice::Reg => {
            let fit = fit_mle(data.values(), args.n, None).map_err(runtime)?;
            if !fit.converged {
                warnings.push(format!("fit did not converge: {}", fit.messages.join("; ")));
            }
            match args.format {
                OutputFormat::Json => to_json(&fit),
                OutputFormat::Table => {
                    let row = gof::proposed_row(&data, args.n);
                    GofReport::from_rows(data.label(), data.count(), args.n, vec![row]).to_table()
                }
            }
        }
        choice => {
            let family = match choice {
                ModelChoice::Gl3 => Family::Gl3,
                ModelChoice::Expgl => Family::ExpGl,
                ModelChoice::Ngl => Family::Ngl,
                _ => Family::Ql,
            };
            match args.format {
                OutputFormat::Json => {
                    let fit =
                        crate::competitors::comp_fit(family, data.values()).map_err(runtime)?;
                    to_json(&fit)
                }
                OutputFormat::Table => {
                    let row = gof::competitor_row(&data, family);
                    GofReport::from_rows(data.label(), data.count(), args.n, vec![row]).to_table()
                }
            }
        }
    };
    Ok(Rendered {
        body,
        output: args.output.clone(),
        warnings,
    })
}

fn render_report(report: &GofReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Table => report.to_table(),
    }
}

fn cmd_sample(args: &SampleArgs) -> Result<Rendered, CliError> {
    let p = params(args.model.alpha, args.model.theta, args.model.n)?;
    if args.count == 0 {
        return Err(usage("--count must be >= 1"));
    }
    let mut rng = RngState::new(args.seed, args.stream);
    let draws = sampler::sample_many(&p, args.count, &mut rng).map_err(usage)?;
    let mut body = String::with_capacity(draws.len() * 20);
    for x in draws {
        let _ = writeln!(body, "{x}");
    }
    Ok(Rendered {
        body,
        output: args.output.clone(),
        warnings: Vec::new(),
    })
}

fn cmd_curve(args: &CurveArgs) -> Result<Rendered, CliError> {
    let p = params(args.model.alpha, args.model.theta, args.model.n)?;
    if !(args.min >= 0.0 && args.max > args.min && args.max.is_finite()) {
        return Err(usage(format!(
            "need 0 <= --min < --max, got [{}, {}]",
            args.min, args.max
        )));
    }
    if args.points < 2 {
        return Err(usage("--points must be >= 2"));
    }
    if args.what != CurveKind::Cdf && args.min == 0.0 {
        return Err(usage("pdf and hazard curves need --min > 0"));
    }
    let mut body = String::from("x,value\n");
    let mut overflow = 0;
    let last = (args.points - 1) as f64;
    for i in 0..args.points {
        let x = if i + 1 == args.points {
            args.max
        } else {
            args.min + (args.max - args.min) * i as f64 / last
        };
        let value = match args.what {
            CurveKind::Pdf => p.pdf(x),
            CurveKind::Cdf => p.cdf(x),
            CurveKind::Hazard => p.hazard(x),
        };
        match value {
            Ok(v) => {
                let _ = writeln!(body, "{x},{v}");
            }
            Err(Error::Overflow(_)) => {
                overflow += 1;
                let _ = writeln!(body, "{x},overflow");
            }
            Err(e) => return Err(runtime(e)),
        }
    }
    let warnings = if overflow > 0 {
        vec![format!(
            "{overflow} grid points lie beyond reliability underflow and are marked `overflow`"
        )]
    } else {
        Vec::new()
    };
    Ok(Rendered {
        body,
        output: args.output.clone(),
        warnings,
    })
}

/// Reproducibility note printed alongside reliability tables.
pub const RELIABILITY_NOTE: &str = "exact column uses 2R-R^2 (parallel) or R^2 (series); \
previously published values for (alpha, theta, n) = (3, 0.05, 3), e.g. 0.508866 at t = 50, \
are not reproduced by either formula, and absolute errors of order 1e-5 are below Monte Carlo resolution; compare \
estimates against the 3-sigma binomial bound instead";

fn cmd_reliability(args: &ReliabilityArgs) -> Result<Rendered, CliError> {
    let p = params(args.alpha, args.theta, args.n)?;
    if !(args.step > 0.0) || !(args.t_max >= args.step) {
        return Err(usage("need --step > 0 and --t-max >= --step"));
    }
    if args.trials == 0 {
        return Err(usage("--trials must be >= 1"));
    }
    let topology = match args.topology {
        TopologyArg::Parallel => Topology::Parallel,
        TopologyArg::Series => Topology::Series,
    };
    let rng = RngState::from_seed(args.seed);
    let rows = relsim::reliability_table(&p, args.t_max, args.step, topology, args.trials, &rng)
        .map_err(runtime)?;
    let violations = rows
        .iter()
        .filter(|r| r.abs_error > relsim::binomial_bound(r.exact, args.trials))
        .count();
    let mut warnings = vec![format!("note: {RELIABILITY_NOTE}")];
    if violations > 0 {
        warnings.push(format!(
            "{violations} rows exceed the 3-sigma binomial bound"
        ));
    }
    Ok(Rendered {
        body: relsim::table_to_csv(&rows),
        output: args.output.clone(),
        warnings,
    })
}

#[derive(Serialize)]
struct MomentsReport {
    params: RegParams,
    weight: f64,
    raw_moments: Vec<f64>,
    summary: crate::dist::MomentSummary,
}

fn cmd_moments(args: &MomentsArgs) -> Result<Rendered, CliError> {
    let p = params(args.model.alpha, args.model.theta, args.model.n)?;
    let raw_moments = (1..=4)
        .map(|r| p.raw_moment(r))
        .collect::<Result<Vec<_>, _>>()
        .map_err(runtime)?;
    let report = MomentsReport {
        params: p,
        weight: p.weight(),
        raw_moments,
        summary: p.moment_summary(),
    };
    let body = match args.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Table => {
            let s = report.summary;
            let mut t = String::new();
            let rows: [(&str, f64); 10] = [
                ("weight p_n", report.weight),
                ("E[X]", report.raw_moments[0]),
                ("E[X^2]", report.raw_moments[1]),
                ("E[X^3]", report.raw_moments[2]),
                ("E[X^4]", report.raw_moments[3]),
                ("mean", s.mean),
                ("variance", s.variance),
                ("cv", s.cv),
                ("skewness", s.skewness),
                ("kurtosis", s.kurtosis),
            ];
            for (name, v) in rows {
                let _ = writeln!(t, "{name:<10} {v:>18.6}");
            }
            t
        }
    };
    Ok(Rendered {
        body,
        output: None,
        warnings: Vec::new(),
    })
}
