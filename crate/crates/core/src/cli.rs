//! Command-line surface: argument parsing, CSV ingestion, and report rendering.
//!
//! Reports are JSON objects with sorted keys and shortest round-trip floats.
//! Every numeric field is the serialized library result, so parsing a report
//! back yields the same `f64` bits the library call returned.

use std::path::{Path, PathBuf};

use clap::builder::PossibleValuesParser;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::aop::{compare_means_seeded, error_bound, monte_carlo_gap, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::families::{
    builtin_family, exp_tx_generator, g_alpha_family, radical_generator, x_pow_alpha_x_family,
    ParametricFamily, BUILTIN_FAMILIES,
};
use crate::generator::Generator;
use crate::interval::Interval;
use crate::mean::{evaluate_mean_with, Sample, Tolerances, Weights};
use crate::scale::{limit_check, mean_curve, solve_scale, verify_scale, window_grid};

pub const GENERATOR_SPECS: &str =
    "identity, exp, ln, x-ln-x, power:r, radical:α, xax:α, exptx:t, galpha:α";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "quasimean",
    version,
    about = "Quasi-arithmetic means and scales of means"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Absolute tolerance for mean evaluation.
    #[arg(long, global = true, value_parser = positive)]
    pub atol: Option<f64>,

    /// Relative tolerance for mean evaluation.
    #[arg(long, global = true, value_parser = positive)]
    pub rtol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weighted quasi-arithmetic mean of a data file.
    Eval {
        /// Generator spec, e.g. power:2.
        #[arg(long)]
        generator: String,
        #[arg(long)]
        data: PathBuf,
    },
    /// Parameter of a family whose mean hits a target.
    Solve {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, allow_hyphen_values = true)]
        target: f64,
        #[arg(long)]
        data: PathBuf,
    },
    /// Ordering of two means through A = f''/f'.
    Compare {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Restrict both generators to this interval.
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Grid check that a family is a scale.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 64)]
        x_grid: usize,
        #[arg(long, default_value_t = 64)]
        t_grid: usize,
    },
    /// Mean as a function of the family parameter.
    Curve {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        data: PathBuf,
        /// Number of window points (log-spaced for multiplicative parameters).
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Uniform bound on |M_f - M_k| over an interval, with a Monte-Carlo check.
    Bound {
        #[arg(long)]
        f: String,
        #[arg(long)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        interval: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_parser = PossibleValuesParser::new(BUILTIN_FAMILIES))]
    pub family: String,
    /// Parameter window `lo,hi` in the family's own parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Restrict the family to the open interval `lo,hi`.
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("must be positive and finite, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::InvalidArgument(format!("expected 'lo,hi', got '{s}'"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo = parts[0].parse::<f64>().map_err(|_| bad())?;
    let hi = parts[1].parse::<f64>().map_err(|_| bad())?;
    Ok((lo, hi))
}

/// Parses `name` or `name:param` into a built-in generator.
pub fn parse_generator(spec: &str) -> Result<Generator> {
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => {
            let v = p.trim().parse::<f64>().map_err(|_| {
                Error::InvalidArgument(format!("bad parameter in generator '{spec}'"))
            })?;
            (n.trim(), Some(v))
        }
        None => (spec.trim(), None),
    };
    let positive_param = |v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidArgument(format!(
                "parameter of '{name}' must be positive, got {v}"
            )))
        }
    };
    match (name, param) {
        ("identity", None) => Ok(Generator::identity()),
        ("exp", None) => Ok(Generator::exp()),
        ("ln", None) => Ok(Generator::ln()),
        ("x-ln-x", None) => Ok(Generator::x_ln_x()),
        ("power", Some(r)) if r.is_finite() => Ok(Generator::power(r)),
        ("radical", Some(a)) => Ok(radical_generator(positive_param(a)?.ln())),
        ("xax", Some(a)) if a.is_finite() => Ok(x_pow_alpha_x_family().make(a)),
        ("exptx", Some(t)) if t.is_finite() => Ok(exp_tx_generator(t)),
        ("galpha", Some(a)) => {
            let a = positive_param(a)?;
            Ok(g_alpha_family(Generator::exp())?
                .make(a)
                .renamed(format!("galpha:{a}")))
        }
        _ => Err(Error::InvalidArgument(format!(
            "unknown generator '{spec}'; expected one of: {GENERATOR_SPECS}"
        ))),
    }
}

fn family(args: &FamilyArgs) -> Result<ParametricFamily> {
    let mut fam = builtin_family(&args.family)?;
    if let Some(d) = &args.domain {
        let (lo, hi) = parse_pair(d)?;
        fam = fam.restrict_domain(Interval::open(lo, hi)?)?;
    }
    if let Some(w) = &args.window {
        let (lo, hi) = parse_pair(w)?;
        fam = fam.with_window(lo, hi)?;
    }
    Ok(fam)
}

/// Reads a `value[,weight]` CSV. Without a weight column the weights are uniform.
pub fn ingest_sample(path: &Path) -> Result<(Sample, Weights)> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Input {
            row: 1,
            message: e.to_string(),
        })?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let value_col = column("value").ok_or_else(|| Error::Input {
        row: 1,
        message: format!(
            "header must contain 'value', got '{}'",
            headers.iter().collect::<Vec<_>>().join(",")
        ),
    })?;
    let weight_col = column("weight");

    let mut values = Vec::new();
    let mut weights = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Input {
            row: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let cell = |i: usize, what: &str| -> Result<f64> {
            let raw = record.get(i).unwrap_or("");
            raw.parse::<f64>().map_err(|_| Error::Input {
                row,
                message: format!("{what} '{raw}' is not a number"),
            })
        };
        values.push(cell(value_col, "value")?);
        if let Some(i) = weight_col {
            weights.push(cell(i, "weight")?);
        }
    }
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    let sample = Sample::new(values)?;
    let weights = match weight_col {
        Some(_) => Weights::new(weights)?,
        None => Weights::uniform(sample.len())?,
    };
    Ok((sample, weights))
}

fn tolerances(cli: &Cli) -> Result<Tolerances> {
    let d = Tolerances::default();
    Tolerances::new(cli.atol.unwrap_or(d.atol), cli.rtol.unwrap_or(d.rtol))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Runs one invocation and returns the text for standard output.
pub fn run(cli: &Cli) -> Result<String> {
    let curve = matches!(cli.command, Command::Curve { .. });
    if cli.format == Format::Csv && !curve {
        return Err(Error::InvalidArgument(
            "csv output is only available for curve".into(),
        ));
    }
    let tol = tolerances(cli)?;
    let report = match &cli.command {
        Command::Eval { generator, data } => {
            let g = parse_generator(generator)?;
            let (a, w) = ingest_sample(data)?;
            let mean = evaluate_mean_with(&g, &a, &w, tol)?;
            json!({ "command": "eval", "generator": g.name(), "n": a.len(), "mean": mean })
        }
        Command::Solve {
            family: fa,
            target,
            data,
        } => {
            let fam = family(fa)?;
            let (a, w) = ingest_sample(data)?;
            let result = solve_scale(&fam, &a, &w, *target)?;
            let mut report = to_value(&result);
            report["command"] = json!("solve");
            report["family"] = json!(fam.name());
            report
        }
        Command::Compare {
            f,
            g,
            interval,
            grid,
            seed,
        } => {
            let (mut f, mut g) = (parse_generator(f)?, parse_generator(g)?);
            if let Some(s) = interval {
                let (lo, hi) = parse_pair(s)?;
                let u = Interval::closed(lo, hi)?;
                f = f.restrict(u)?;
                g = g.restrict(u)?;
            }
            let verdict = compare_means_seeded(&f, &g, *grid, *seed)?;
            let mut report = to_value(&verdict);
            report["command"] = json!("compare");
            report["f"] = json!(f.name());
            report["g"] = json!(g.name());
            report["seed"] = json!(seed);
            report
        }
        Command::Verify {
            family: fa,
            x_grid,
            t_grid,
        } => {
            let fam = family(fa)?;
            let mut report = to_value(&verify_scale(&fam, *x_grid, *t_grid)?);
            report["command"] = json!("verify");
            report["domain"] = json!(fam.domain().to_string());
            report
        }
        Command::Curve {
            family: fa,
            data,
            points,
        } => {
            if *points < 2 {
                return Err(Error::InvalidArgument(format!(
                    "need at least 2 curve points, got {points}"
                )));
            }
            let fam = family(fa)?;
            let (a, w) = ingest_sample(data)?;
            let curve = mean_curve(&fam, &a, &w, &window_grid(&fam, *points));
            if cli.format == Format::Csv {
                return Ok(curve_csv(&curve));
            }
            let limits = if a.is_constant() {
                Value::Null
            } else {
                to_value(&limit_check(&fam, &a, &w)?)
            };
            json!({ "command": "curve", "family": fam.name(), "points": to_value(&curve), "limits": limits })
        }
        Command::Bound {
            f,
            k,
            interval,
            samples,
            seed,
        } => {
            let (lo, hi) = parse_pair(interval)?;
            let u = Interval::closed(lo, hi)?;
            let (f, k) = (parse_generator(f)?, parse_generator(k)?);
            let cert = error_bound(&f, &k, &u)?;
            let mut report = to_value(&cert);
            if *samples > 0 {
                report["monte_carlo"] = to_value(&monte_carlo_gap(&f, &k, &u, *samples, *seed)?);
            }
            report["command"] = json!("bound");
            report["f"] = json!(f.name());
            report["k"] = json!(k.name());
            report["seed"] = json!(seed);
            report
        }
    };
    let mut text = serde_json::to_string_pretty(&report).expect("json values serialize");
    text.push('\n');
    Ok(text)
}

fn curve_csv(curve: &[crate::scale::CurvePoint]) -> String {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["t", "mean", "error"])
        .expect("in-memory write");
    for p in curve {
        let mean = p.mean.map(|m| format!("{m:?}")).unwrap_or_default();
        out.write_record([
            format!("{:?}", p.t),
            mean,
            p.error.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(out.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

/// `{"code", "message"}` for standard error.
pub fn error_json(code: &str, message: &str) -> String {
    json!({ "code": code, "message": message }).to_string()
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

/// Parses `args`, runs, and prints. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{}", error_json("usage", e.to_string().trim_end()));
            return 2;
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("{}", error_json(e.code(), &e.to_string()));
            exit_code(&e)
        }
    }
}
