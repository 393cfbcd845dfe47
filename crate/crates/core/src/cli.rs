//! Command-line front end.
//!
//! Sub-commands: `eval` (one value), `table` (grid of values), `bounds`
//! (lower bound, value, upper bound and asymptote along λ) and `scan`
//! (monotonicity report). Output is CSV or JSON, to standard output or to
//! `--out`. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 2 | domain or usage error |
//! | 3 | series truncation failure |
//! | 4 | I/O error |
//! | 5 | a computed bound does not hold (internal error) |

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analysis::{gen_renyi2_anomaly_probe, scan_monotonicity, ScanGrid, ScanReport};
use crate::asymptotics::{asymptote, AsymptoteKind};
use crate::bounds::{bounds_for, optimal_gamma};
use crate::entropies::{EntropyKind, EntropyQuery};
use crate::error::EntropyError;
use crate::format::{format_g, round_sig};
use crate::series::{PoissonParams, SeriesConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_TRUNCATION: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_BOUND_VIOLATION: i32 = 5;

/// Version of the JSON layout, written as the top-level `"schema"` field.
pub const JSON_SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "poisson-entropy",
    version,
    about = "Entropies of the Poisson distribution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Significant digits of printed values.
    #[arg(long, default_value_t = 12, global = true,
          value_parser = clap::value_parser!(u32).range(4..=17))]
    precision: u32,
    #[arg(long, default_value_t = 1e-14, global = true)]
    rel_tol: f64,
    #[arg(long, default_value_t = 10_000_000, global = true)]
    max_terms: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one entropy at one intensity.
    Eval {
        #[command(flatten)]
        orders: Orders,
        #[arg(long)]
        lambda: f64,
    },
    /// Tabulate an entropy over order and intensity grids.
    Table {
        #[command(flatten)]
        orders: Orders,
        /// Range of alpha values, LO:HI:STEP (replaces --alpha).
        #[arg(long, conflicts_with = "alpha")]
        alpha_range: Option<String>,
        /// Range of beta values, LO:HI:STEP (replaces --beta).
        #[arg(long, conflicts_with = "beta")]
        beta_range: Option<String>,
        #[arg(long)]
        lambda_range: String,
    },
    /// Lower bound, value, upper bound and asymptote along λ > 1.
    Bounds {
        #[command(flatten)]
        orders: Orders,
        #[arg(long)]
        lambda_range: String,
        /// γ of the Rényi upper bound; optimised over the λ range when omitted.
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Monotonicity scan in λ.
    Scan {
        #[command(flatten)]
        orders: Orders,
        #[arg(long)]
        lambda_range: String,
    },
}

#[derive(Debug, Args)]
struct Orders {
    #[arg(long, value_parser = parse_kind)]
    kind: EntropyKind,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
}

fn parse_kind(s: &str) -> std::result::Result<EntropyKind, String> {
    s.parse().map_err(|e: EntropyError| e.to_string())
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Entropy(EntropyError),
    Io(io::Error),
    BoundViolation(String),
}

impl From<EntropyError> for CliError {
    fn from(e: EntropyError) -> Self {
        CliError::Entropy(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_DOMAIN,
            CliError::Entropy(EntropyError::TruncationFailure { .. }) => EXIT_TRUNCATION,
            CliError::Entropy(_) => EXIT_DOMAIN,
            CliError::Io(_) => EXIT_IO,
            CliError::BoundViolation(_) => EXIT_BOUND_VIOLATION,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Entropy(e) => e.to_string(),
            CliError::Io(e) => format!("I/O error: {e}"),
            CliError::BoundViolation(m) => format!("bound violation: {m}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Caps the global rayon pool at `PE_THREADS` threads (0 or unset: automatic).
pub fn configure_threads() {
    let n = std::env::var("PE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if n > 0 {
        // Fails only if the pool was already built, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Results go to `stdout` unless `--out` is given; diagnostics go to
/// `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let out = &cli.output;
    let cfg = SeriesConfig::new(
        out.rel_tol,
        out.max_terms,
        SeriesConfig::default().log_domain_threshold(),
    )?;
    let p = out.precision as usize;
    let text = match &cli.command {
        Command::Eval { orders, lambda } => cmd_eval(orders, *lambda, cfg, out.format, p)?,
        Command::Table {
            orders,
            alpha_range,
            beta_range,
            lambda_range,
        } => cmd_table(
            orders,
            alpha_range.as_deref(),
            beta_range.as_deref(),
            lambda_range,
            cfg,
            out.format,
            p,
        )?,
        Command::Bounds {
            orders,
            lambda_range,
            gamma,
        } => cmd_bounds(orders, lambda_range, *gamma, cfg, out.format, p)?,
        Command::Scan {
            orders,
            lambda_range,
        } => cmd_scan(orders, lambda_range, cfg, out.format, p)?,
    };
    match &out.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses `LO:HI:STEP` into lo + k·step, k ≥ 0, up to HI.
fn parse_range(name: &str, s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| CliError::Usage(format!("{name}: cannot parse '{s}' as LO:HI:STEP")))?;
    let [lo, hi, step] = nums[..] else {
        return Err(CliError::Usage(format!(
            "{name}: expected LO:HI:STEP, got '{s}'"
        )));
    };
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
        return Err(CliError::Usage(format!(
            "{name}: non-finite bound in '{s}'"
        )));
    }
    if !(step > 0.0) || hi < lo {
        return Err(CliError::Usage(format!("{name}: empty grid '{s}'")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|k| lo + k as f64 * step).collect())
}

fn fmt_opt(v: Option<f64>, p: usize) -> String {
    v.map(|x| format_g(x, p)).unwrap_or_default()
}

fn json_num(v: f64, p: usize) -> Value {
    json!(round_sig(v, p))
}

fn json_opt(v: Option<f64>, p: usize) -> Value {
    v.map_or(Value::Null, |x| json_num(x, p))
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON serialisation");
    s.push('\n');
    s
}

fn query(
    orders: &Orders,
    alpha: Option<f64>,
    beta: Option<f64>,
    lambda: f64,
    cfg: SeriesConfig,
) -> CliResult<EntropyQuery> {
    let mut params = PoissonParams::new(lambda);
    params.alpha = alpha;
    params.beta = beta;
    Ok(EntropyQuery::new(orders.kind, params, cfg)?)
}

fn cmd_eval(
    orders: &Orders,
    lambda: f64,
    cfg: SeriesConfig,
    format: Format,
    p: usize,
) -> CliResult<String> {
    let q = query(orders, orders.alpha, orders.beta, lambda, cfg)?;
    let r = q.evaluate_detailed()?;
    let tail = r.rel_tail * r.value.abs();
    Ok(match format {
        Format::Csv => format!(
            "kind,alpha,beta,lambda,value,terms_used,tail_bound\n{},{},{},{},{},{},{}\n",
            orders.kind,
            fmt_opt(orders.alpha, p),
            fmt_opt(orders.beta, p),
            format_g(lambda, p),
            format_g(r.value, p),
            r.terms_used,
            format_g(tail, 4),
        ),
        Format::Json => to_json_text(&json!({
            "schema": JSON_SCHEMA,
            "kind": orders.kind,
            "alpha": orders.alpha,
            "beta": orders.beta,
            "lambda": lambda,
            "value": json_num(r.value, p),
            "terms_used": r.terms_used,
            "tail_bound": json_num(tail, 4),
        })),
    })
}

fn order_values(
    kind: EntropyKind,
    name: &str,
    needed: bool,
    single: Option<f64>,
    range: Option<&str>,
) -> CliResult<Vec<Option<f64>>> {
    match (needed, single, range) {
        (false, None, None) => Ok(vec![None]),
        (false, _, _) => Err(CliError::Usage(format!("{kind} takes no {name}"))),
        (true, Some(v), None) => Ok(vec![Some(v)]),
        (true, None, Some(r)) => Ok(parse_range(&format!("--{name}-range"), r)?
            .into_iter()
            .map(Some)
            .collect()),
        (true, None, None) => Err(CliError::Usage(format!(
            "{kind} requires --{name} or --{name}-range"
        ))),
        (true, Some(_), Some(_)) => unreachable!("clap rejects conflicting flags"),
    }
}

type TableRow = (Option<f64>, Option<f64>, f64, f64);

fn cmd_table(
    orders: &Orders,
    alpha_range: Option<&str>,
    beta_range: Option<&str>,
    lambda_range: &str,
    cfg: SeriesConfig,
    format: Format,
    p: usize,
) -> CliResult<String> {
    let kind = orders.kind;
    let alphas = order_values(kind, "alpha", kind.needs_alpha(), orders.alpha, alpha_range)?;
    let betas = order_values(kind, "beta", kind.needs_beta(), orders.beta, beta_range)?;
    let lambdas = parse_range("--lambda-range", lambda_range)?;

    let mut cells = Vec::new();
    for &a in &alphas {
        for &b in &betas {
            for &l in &lambdas {
                cells.push((a, b, l));
            }
        }
    }
    let rows: Vec<Option<TableRow>> = cells
        .par_iter()
        .map(|&(a, b, l)| -> CliResult<_> {
            match query(orders, a, b, l, cfg) {
                // Order combinations on a singular value (α = 1, α = β, ...)
                // are left out of the table.
                Err(CliError::Entropy(EntropyError::DegenerateOrder(_))) => Ok(None),
                Err(e) => Err(e),
                Ok(q) => Ok(Some((a, b, l, q.evaluate()?))),
            }
        })
        .collect::<CliResult<_>>()?;
    let rows: Vec<_> = rows.into_iter().flatten().collect();

    Ok(match format {
        Format::Csv => {
            let mut s = String::from("alpha,beta,lambda,value\n");
            for (a, b, l, v) in rows {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_opt(a, p),
                    fmt_opt(b, p),
                    format_g(l, p),
                    format_g(v, p)
                ));
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|(a, b, l, v)| {
                    json!({"alpha": json_opt(a, p), "beta": json_opt(b, p),
                           "lambda": json_num(l, p), "value": json_num(v, p)})
                })
                .collect();
            to_json_text(&json!({"schema": JSON_SCHEMA, "kind": kind, "rows": rows}))
        }
    })
}

fn cmd_bounds(
    orders: &Orders,
    lambda_range: &str,
    gamma: Option<f64>,
    cfg: SeriesConfig,
    format: Format,
    p: usize,
) -> CliResult<String> {
    let kind = orders.kind;
    let lambdas = parse_range("--lambda-range", lambda_range)?;
    // Validates orders and arity once up front.
    let template = query(orders, orders.alpha, orders.beta, lambdas[0], cfg)?;
    if let Some(&bad) = lambdas.iter().find(|&&l| l <= 1.0) {
        return Err(
            EntropyError::Domain(format!("bounds need lambda > 1, range contains {bad}")).into(),
        );
    }
    let gamma = match (kind, gamma) {
        (EntropyKind::Renyi, None) => {
            let hi = *lambdas.last().expect("non-empty range");
            Some(optimal_gamma(
                orders.alpha.expect("validated"),
                hi.max(1.0 + 1e-9),
                &cfg,
            )?)
        }
        (EntropyKind::Renyi, g) => g,
        (_, Some(_)) => {
            return Err(CliError::Usage(format!(
                "--gamma applies to renyi only, not {kind}"
            )))
        }
        (_, None) => None,
    };

    let rows = lambdas
        .par_iter()
        .map(|&l| -> CliResult<_> {
            let value = template.at_lambda(l)?.evaluate()?;
            let b = bounds_for(kind, orders.alpha, orders.beta, l, gamma, &cfg)?;
            let asym = match asymptote(AsymptoteKind::Entropy(kind), orders.alpha, orders.beta, l) {
                Ok(v) => Some(v),
                Err(EntropyError::NoAsymptote(_)) => None,
                Err(e) => return Err(e.into()),
            };
            if !b.contains(value) {
                return Err(CliError::BoundViolation(format!(
                    "lambda = {l}: lower {} value {value} upper {:?}",
                    b.lower, b.upper
                )));
            }
            Ok((l, b.lower, value, b.upper, asym))
        })
        .collect::<CliResult<Vec<_>>>()?;

    Ok(match format {
        Format::Csv => {
            let mut s = String::from("lambda,lower,value,upper,asymptote\n");
            for (l, lo, v, up, asym) in rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    format_g(l, p),
                    format_g(lo, p),
                    format_g(v, p),
                    fmt_opt(up, p),
                    fmt_opt(asym, p)
                ));
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|(l, lo, v, up, asym)| {
                    json!({"lambda": json_num(l, p), "lower": json_num(lo, p), "value": json_num(v, p),
                           "upper": json_opt(up, p), "asymptote": json_opt(asym, p)})
                })
                .collect();
            to_json_text(&json!({
                "schema": JSON_SCHEMA,
                "kind": kind,
                "alpha": orders.alpha,
                "beta": orders.beta,
                "gamma": gamma,
                "rows": rows,
            }))
        }
    })
}

fn cmd_scan(
    orders: &Orders,
    lambda_range: &str,
    cfg: SeriesConfig,
    format: Format,
    p: usize,
) -> CliResult<String> {
    let parts: Vec<f64> = lambda_range
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--lambda-range: cannot parse '{lambda_range}'")))?;
    let [lo, hi, step] = parts[..] else {
        return Err(CliError::Usage(format!(
            "--lambda-range: expected LO:HI:STEP, got '{lambda_range}'"
        )));
    };
    let grid = ScanGrid::new(lo, hi, step)?;
    let report = match orders.kind {
        EntropyKind::GenRenyi2 => {
            let (a, b) = match (orders.alpha, orders.beta) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(CliError::Usage(
                        "gen_renyi2 requires --alpha and --beta".into(),
                    ))
                }
            };
            gen_renyi2_anomaly_probe(a, b, grid, &cfg)?
        }
        _ => scan_monotonicity(&query(orders, orders.alpha, orders.beta, lo, cfg)?, grid)?,
    };
    Ok(match format {
        Format::Csv => scan_csv(&report, p),
        Format::Json => to_json_text(&scan_json(&report, p)),
    })
}

fn scan_csv(r: &ScanReport, p: usize) -> String {
    let mut s = String::from("lambda,value,derivative\n");
    for ((l, v), d) in r.grid.iter().zip(&r.values).zip(&r.derivatives) {
        s.push_str(&format!(
            "{},{},{}\n",
            format_g(*l, p),
            format_g(*v, p),
            format_g(*d, p)
        ));
    }
    s
}

fn scan_json(r: &ScanReport, p: usize) -> Value {
    let round = |xs: &[f64]| xs.iter().map(|&x| json_num(x, p)).collect::<Vec<_>>();
    json!({
        "schema": JSON_SCHEMA,
        "kind": r.kind,
        "alpha": r.alpha,
        "beta": r.beta,
        "proven_monotone": r.proven_monotone,
        "grid": round(&r.grid),
        "values": round(&r.values),
        "derivatives": round(&r.derivatives),
        "decreasing_intervals": r.decreasing_intervals.iter()
            .map(|&(a, b)| json!([json_num(a, p), json_num(b, p)])).collect::<Vec<_>>(),
        "extrema": r.extrema.iter()
            .map(|e| json!({"lambda": json_num(e.lambda, p), "kind": e.kind})).collect::<Vec<_>>(),
    })
}
