//! Command-line front end.
//!
//! Every subcommand prints one JSON document (default) or CSV with a header
//! row. Floats carry 12 significant digits. Timing goes to stderr so stdout
//! is reproducible. Exit codes: 0 success, 1 domain error, 2 budget or
//! precision error, 64 usage error.
//!
//! `--config file.json` supplies flags from a JSON object such as
//! `{"ell": 1, "r": [1], "t": 40}`; flags given on the command line win.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::analytic::{self, SumConfig};
use crate::error::{Error, ErrorClass};
use crate::manifold::{ManifoldParams, TorusLattice};
use crate::{approx, circle, counting, diophantine, extremal};

/// Environment variable read when `--threads` is absent.
pub const THREADS_ENV: &str = "HEISENBERG_WEYL_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "heisenberg-weyl",
    version,
    about = "Spectral counting and Weyl-law remainders on rational Heisenberg manifolds",
    args_override_self = true
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads: a positive integer or `auto`.
    #[arg(long, global = true, env = THREADS_ENV, default_value = "auto")]
    threads: String,
    /// JSON file with flag values; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ManifoldArgs {
    #[arg(long, default_value_t = 1)]
    ell: u32,
    /// Divisibility chain r₁ | … | r_ℓ; defaults to all ones.
    #[arg(long, num_args = 1..)]
    r: Vec<u64>,
    /// Flat torus for the class-I spectrum: `standard` or `dual`.
    #[arg(long, default_value = "standard")]
    torus: String,
}

impl ManifoldArgs {
    fn params(&self) -> Result<ManifoldParams, Error> {
        let r = if self.r.is_empty() {
            vec![1; self.ell as usize]
        } else {
            self.r.clone()
        };
        let torus: TorusLattice = self.torus.parse()?;
        Ok(ManifoldParams::new(self.ell, &r)?.with_torus_lattice(torus))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// N(t), the Weyl main term and the remainder R(t).
    Count {
        #[command(flatten)]
        m: ManifoldArgs,
        #[arg(long)]
        t: f64,
        /// Also run the independent brute-force count.
        #[arg(long)]
        brute: bool,
    },
    /// E(u) = c·R(2πu²) next to the fractional-part sum E*(u).
    WeylError {
        #[command(flatten)]
        m: ManifoldArgs,
        #[arg(long, num_args = 1.., required = true)]
        u: Vec<f64>,
    },
    /// Cumulative ∫R(t)² dt and its log–log slope.
    MeanSquare {
        #[command(flatten)]
        m: ManifoldArgs,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// Checks |ψ + Σ_H| ≤ Σ*_H on a uniform grid.
    VaalerCheck {
        #[arg(long = "H")]
        h: usize,
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// E(u) − E*(u) with the secular part removed and its growth exponent.
    EstarCompare {
        #[command(flatten)]
        m: ManifoldArgs,
        #[arg(long = "u-min", default_value_t = 50.0)]
        u_min: f64,
        #[arg(long = "u-max", default_value_t = 500.0)]
        u_max: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        blocks: usize,
    },
    /// Table of θ_ℓ(n).
    Theta {
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long = "n-max")]
        n_max: u64,
    },
    /// Direct exponential sum E_j(h, u) against its stationary-phase transform.
    ExpsumCheck {
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long, default_value_t = 0)]
        j: u32,
        #[arg(long, num_args = 1.., default_values_t = [1u64, 2])]
        h: Vec<u64>,
        #[arg(long, num_args = 1.., default_values_t = [50.3, 100.3, 200.3])]
        u: Vec<f64>,
    },
    /// Fejér identity checks, or the average I(T, U) when `--U` is given.
    FejerCheck {
        #[arg(long = "T")]
        t: f64,
        #[arg(long = "Q", num_args = 1..)]
        q: Vec<f64>,
        #[arg(long, num_args = 1.., default_values_t = [0.0])]
        delta: Vec<f64>,
        #[arg(long = "U")]
        big_u: Option<f64>,
        #[arg(long, default_value_t = 1)]
        ell: u32,
        #[arg(long = "k-cap", default_value_t = 100_000)]
        k_cap: u64,
    },
    /// Squarefree integers in (1, Q].
    Squarefree {
        #[arg(long = "Q")]
        q: u64,
    },
    /// Smallest U with ‖U√q − 1/2‖ ≤ ε₀/T for all squarefree q ∈ (1, T²].
    KroneckerSearch {
        #[arg(long = "T")]
        t: f64,
        #[arg(long, default_value_t = diophantine::DEFAULT_EPSILON0)]
        eps0: f64,
        /// First candidate; defaults to ⌈T²⌉.
        #[arg(long = "u-min")]
        u_min: Option<u64>,
        /// Number of candidates to scan.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Smallest ‖h·(√q₁, …, √q_s)‖ over nonzero |h|_∞ ≤ H.
    Besicovitch {
        /// Explicit list; defaults to the squarefree integers in (1, Q].
        #[arg(long, num_args = 1..)]
        qs: Vec<u64>,
        #[arg(long = "Q", default_value_t = 9)]
        q: u64,
        #[arg(long = "H", default_value_t = 2)]
        h: u64,
    },
    /// The full search for a large positive remainder.
    SearchExceptional {
        #[command(flatten)]
        m: ManifoldArgs,
        #[arg(long = "T", default_value_t = 2.0)]
        t: f64,
        #[arg(long, default_value_t = 0.25)]
        eps0: f64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 2001)]
        grid: usize,
        #[arg(long = "k-cap", default_value_t = 100_000)]
        k_cap: u64,
        /// Also write the `u,S` trace as CSV here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Lattice points in the disc of radius x and P(x).
    Circle {
        #[arg(long, num_args = 1.., required = true)]
        x: Vec<f64>,
    },
    /// Cumulative ∫P(x)² dx and its log–log slope.
    CircleMeansquare {
        #[arg(long)]
        xmax: f64,
        #[arg(long, default_value_t = 100)]
        grid: usize,
    },
}

const SUBCOMMANDS: &[&str] = &[
    "count",
    "weyl-error",
    "mean-square",
    "vaaler-check",
    "estar-compare",
    "theta",
    "expsum-check",
    "fejer-check",
    "squarefree",
    "kronecker-search",
    "besicovitch",
    "search-exceptional",
    "circle",
    "circle-meansquare",
];

/// What a command produced: a JSON value and, optionally, a CSV rendering
/// that replaces the generic one.
struct Emitted {
    json: Value,
    csv: Option<String>,
}

impl Emitted {
    fn value(json: Value) -> Self {
        Emitted { json, csv: None }
    }

    fn of(x: &impl Serialize) -> Self {
        Emitted::value(serde_json::to_value(x).expect("report serializes"))
    }
}

enum Failure {
    Usage(String),
    Run(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match splice_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };

    let threads = match parse_threads(&cli.threads) {
        Ok(n) => n,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker threads: {e}");
            return EXIT_DOMAIN;
        }
    };

    let started = Instant::now();
    let result = pool.install(|| execute(&cli));
    let elapsed = started.elapsed().as_secs_f64();

    let emitted = match result {
        Ok(e) => e,
        Err(f) => return report_failure(f, err),
    };
    let text = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string(&round_floats(emitted.json)).expect("json");
            s.push('\n');
            s
        }
        Format::Csv => emitted.csv.unwrap_or_else(|| generic_csv(&emitted.json)),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        return report_failure(Failure::Io(msg), err);
    }
    let _ = writeln!(err, "# finished in {elapsed:.3} s");
    EXIT_OK
}

fn report_failure(f: Failure, err: &mut dyn Write) -> i32 {
    match f {
        Failure::Usage(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Failure::Io(msg) => {
            let _ = writeln!(err, "error: cannot write output: {msg}");
            EXIT_DOMAIN
        }
        Failure::Run(e) => {
            let _ = writeln!(err, "error: {e}");
            match e.class() {
                ErrorClass::Domain => EXIT_DOMAIN,
                ErrorClass::Budget => EXIT_BUDGET,
            }
        }
    }
}

fn parse_threads(s: &str) -> Result<usize, String> {
    if s == "auto" {
        return Ok(0);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("invalid value '{s}' for '--threads': expected a positive integer or `auto`")),
    }
}

/// Turns `--config path` into flags inserted right after the subcommand name.
fn splice_config(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        let a = a.to_string_lossy();
        if a == "--config" {
            path = argv.get(i + 1).map(|p| PathBuf::from(p.clone()));
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(PathBuf::from(p));
        }
    }
    let Some(path) = path else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| format!("config {} is not valid JSON: {e}", path.display()))?;
    let Value::Object(map) = value else {
        return Err(format!("config {} must hold a JSON object", path.display()));
    };
    let mut flags: Vec<OsString> = Vec::new();
    for (key, v) in map {
        let flag = format!("--{}", key.trim_start_matches('-'));
        match v {
            Value::Bool(true) => flags.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                flags.push(flag.into());
                for item in items {
                    flags.push(scalar(&item, &key)?.into());
                }
            }
            other => {
                flags.push(flag.into());
                flags.push(scalar(&other, &key)?.into());
            }
        }
    }
    let at = argv
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .ok_or("a subcommand is required")?;
    let mut spliced = argv[..=at].to_vec();
    spliced.extend(flags);
    spliced.extend_from_slice(&argv[at + 1..]);
    Ok(spliced)
}

fn scalar(v: &Value, key: &str) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(format!("config entry `{key}` must be a scalar or a list of scalars")),
    }
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = crate::round_sig(n.as_f64().expect("f64"));
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => crate::fmt_sig(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Array(a) => a.iter().map(csv_cell).collect::<Vec<_>>().join(";"),
        Value::Object(_) => serde_json::to_string(v).unwrap_or_default(),
    }
}

/// One row per object; the header comes from the first object's keys.
fn generic_csv(v: &Value) -> String {
    let rows: Vec<&serde_json::Map<String, Value>> = match v {
        Value::Object(m) => vec![m],
        Value::Array(items) => items.iter().filter_map(Value::as_object).collect(),
        _ => Vec::new(),
    };
    let Some(first) = rows.first() else {
        return format!("value\n{}\n", csv_cell(v));
    };
    let keys: Vec<&String> = first.keys().collect();
    let mut out = keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = keys
            .iter()
            .map(|k| row.get(*k).map(csv_cell).unwrap_or_default())
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn execute(cli: &Cli) -> Result<Emitted, Failure> {
    Ok(match &cli.command {
        Command::Count { m, t, brute } => {
            let params = m.params()?;
            let c = counting::count_spectrum(&params, *t)?;
            let mut v = json!({
                "t": c.t,
                "N": c.n_of_t,
                "main": c.main_term,
                "R": c.remainder,
                "normalized": c.normalized,
            });
            if *brute {
                v["N_brute"] = json!(counting::brute_force_n(&params, *t)?);
            }
            Emitted::value(v)
        }
        Command::WeylError { m, u } => {
            let params = m.params()?;
            let mut rows = Vec::new();
            for &u in u {
                let t = 2.0 * std::f64::consts::PI * u * u;
                let c = counting::count_spectrum(&params, t)?;
                let e = counting::normalized_error_e(&params, u)?;
                rows.push(json!({
                    "u": u,
                    "t": t,
                    "R": c.remainder,
                    "E": e,
                    "Estar": approx::estar(params.ell(), u),
                }));
            }
            Emitted::value(Value::Array(rows))
        }
        Command::MeanSquare { m, t_max, grid } => {
            let rep = counting::mean_square(&m.params()?, *t_max, *grid)?;
            Emitted {
                json: json!({
                    "t_max": t_max,
                    "grid": grid,
                    "fitted_slope": rep.fitted_slope,
                    "fitted_log_constant": rep.fitted_log_constant,
                    "T": rep.t_grid,
                    "integral": rep.integral_values,
                }),
                csv: Some(rep.to_csv()),
            }
        }
        Command::VaalerCheck { h, grid, tol } => {
            if *h == 0 || *grid == 0 {
                return Err(Failure::Run(Error::InvalidArgument(
                    "--H and --grid must be positive".into(),
                )));
            }
            let c = approx::vaaler_check(*h, *grid, *tol);
            Emitted::value(json!({
                "H": c.degree,
                "grid": c.grid,
                "min_slack": c.min_slack,
                "max_slack": c.max_slack,
                "violations": c.violations,
            }))
        }
        Command::EstarCompare {
            m,
            u_min,
            u_max,
            samples,
            blocks,
        } => {
            let c = approx::estar_compare(&m.params()?, *u_min, *u_max, *samples, *blocks)?;
            Emitted {
                json: json!({
                    "ell": c.ell,
                    "fitted_exponent": c.fitted_exponent,
                    "fitted_log_constant": c.fitted_log_constant,
                    "secular_c0": c.secular_c0,
                    "secular_c1": c.secular_c1,
                    "block_u": c.block_u,
                    "block_rms": c.block_rms,
                }),
                csv: Some(c.to_csv()),
            }
        }
        Command::Theta { ell, n_max } => {
            if *ell == 0 || *n_max == 0 {
                return Err(Failure::Run(Error::InvalidArgument(
                    "--ell and --n-max must be positive".into(),
                )));
            }
            let table = analytic::ThetaTable::new(*ell, *n_max);
            Emitted {
                json: json!({ "ell": ell, "n_max": n_max, "theta": &table.values[1..] }),
                csv: Some(table.to_csv()),
            }
        }
        Command::ExpsumCheck { ell, j, h, u } => {
            let mut rows = Vec::new();
            for &h in h {
                for &u in u {
                    if h == 0 || !(u >= 1.0) || *ell == 0 {
                        return Err(Failure::Run(Error::InvalidArgument(
                            "need h >= 1, u >= 1 and ell >= 1".into(),
                        )));
                    }
                    rows.push(analytic::transform_check(*j, h, u, *ell));
                }
            }
            let constants: Vec<f64> = rows.iter().map(|r| r.constant).collect();
            let max = constants.iter().cloned().fold(0.0, f64::max);
            let min = constants.iter().cloned().fold(f64::INFINITY, f64::min);
            let csv = generic_csv(&serde_json::to_value(&rows).expect("rows"));
            Emitted {
                json: json!({ "cases": rows, "constant_ratio": max / min }),
                csv: Some(csv),
            }
        }
        Command::FejerCheck {
            t,
            q,
            delta,
            big_u,
            ell,
            k_cap,
        } => match big_u {
            Some(u) => {
                let cfg = SumConfig {
                    k_cap: Some(*k_cap),
                    ..SumConfig::default()
                };
                Emitted::of(&analytic::fejer_average_i(*t, *u, *ell, &cfg)?)
            }
            None => {
                if q.is_empty() {
                    return Err(Failure::Usage("fejer-check needs --Q (identity check) or --U (average)".into()));
                }
                let mut rows = Vec::new();
                for &q in q {
                    for &d in delta {
                        rows.push(analytic::fejer_identity_check(*t, q, d)?);
                    }
                }
                Emitted::of(&rows)
            }
        },
        Command::Squarefree { q } => {
            let qs = diophantine::squarefree_up_to(*q);
            let csv = std::iter::once("q".to_string())
                .chain(qs.iter().map(u64::to_string))
                .collect::<Vec<_>>()
                .join("\n")
                + "\n";
            Emitted {
                json: json!({ "Q": q, "count": qs.len(), "values": qs }),
                csv: Some(csv),
            }
        }
        Command::KroneckerSearch {
            t,
            eps0,
            u_min,
            budget,
        } => {
            let mut target = diophantine::KroneckerTarget::new(*t, *eps0)?;
            if *budget == 0 {
                return Err(Failure::Run(Error::InvalidArgument("--budget must be positive".into())));
            }
            let lo = u_min.unwrap_or(((t * t).ceil() as u64).max(1));
            let hi = lo
                .checked_add(budget - 1)
                .ok_or(Error::Overflow("computing the end of the search range"))?;
            let found = target.search(lo, hi)?.ok_or(Error::SearchFailed { u_min: lo, u_max: hi })?;
            let distances = target.distances(found);
            let max_distance = distances.iter().cloned().fold(0.0, f64::max);
            Emitted::value(json!({
                "T": t,
                "epsilon0": eps0,
                "s": target.s(),
                "U": found,
                "max_distance": max_distance,
                "qs": target.qs,
                "distances": distances,
            }))
        }
        Command::Besicovitch { qs, q, h } => {
            let qs = if qs.is_empty() {
                diophantine::squarefree_up_to(*q)
            } else {
                qs.clone()
            };
            Emitted::of(&diophantine::besicovitch_check(&qs, *h)?)
        }
        Command::SearchExceptional {
            m,
            t,
            eps0,
            budget,
            grid,
            k_cap,
            trace,
        } => {
            let cfg = extremal::PipelineConfig {
                t: *t,
                epsilon0: *eps0,
                search_budget: *budget,
                grid: *grid,
                sum: SumConfig {
                    k_cap: Some(*k_cap),
                    ..SumConfig::default()
                },
            };
            let rep = extremal::run_pipeline(&m.params()?, &cfg)?;
            let csv = rep.trace_csv();
            if let Some(path) = trace {
                std::fs::write(path, &csv).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            }
            Emitted {
                json: serde_json::to_value(&rep).expect("report"),
                csv: Some(csv),
            }
        }
        Command::Circle { x } => {
            let samples = x
                .iter()
                .map(|&x| circle::circle_count(x))
                .collect::<Result<Vec<_>, _>>()?;
            let mut csv = format!("{}\n", circle::CircleSample::csv_header());
            for s in &samples {
                csv.push_str(&s.csv_row());
                csv.push('\n');
            }
            let rows: Vec<Value> = samples
                .iter()
                .map(|s| json!({ "x": s.x, "count": s.count, "P": s.p_value }))
                .collect();
            Emitted {
                json: Value::Array(rows),
                csv: Some(csv),
            }
        }
        Command::CircleMeansquare { xmax, grid } => {
            let rep = circle::cramer_mean_square(*xmax, *grid)?;
            Emitted {
                json: json!({
                    "x_max": xmax,
                    "grid": grid,
                    "slope": rep.slope,
                    "log_constant": rep.log_constant,
                    "X": rep.x_grid,
                    "integral": rep.integral_values,
                }),
                csv: Some(rep.to_csv()),
            }
        }
    })
}
