//! Command implementations for the `feedsec` binary.
//!
//! Every command validates its parameters through the owning module before
//! doing any work and echoes its resolved configuration in its output.
//! Exit codes: 0 success, 1 usage or validation error, 2 runtime or
//! degenerate-parameter error.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bsc::{
    backward_key_capacity, linear_grid, no_feedback_secrecy_capacity, optimize_alpha,
    rate_breakdown, rate_surface, simulate_maurer, write_surface_csv, BscSystem, SurfaceMode,
    DEFAULT_GRID_POINTS,
};
use crate::error::Error;
use crate::gaussian::{
    capacity_forward, monte_carlo_sk, run_sk, secrecy_summary_with, GaussianWiretapParams,
    SkConfig, ThetaVariance,
};
use crate::region::{theorem1_rate, FeedbackSystemSpec};

/// Largest message count whose midpoints are exactly representable.
const MAX_MESSAGES: f64 = 9_007_199_254_740_992.0;

#[derive(Debug, Parser)]
#[command(
    name = "feedsec",
    version,
    about = "Secrecy rates for wiretap channels with feedback"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimized secrecy-rate surface of the binary symmetric scheme (CSV).
    BscSurface(SurfaceArgs),
    /// Rate breakdown of the binary symmetric scheme at one system.
    BscRates(RatesArgs),
    /// Monte Carlo of the modulo-add feedback scheme.
    MaurerSim(MaurerArgs),
    /// Evaluate the achievable rate of a discrete system given as JSON.
    RegionEval(RegionArgs),
    /// Schalkwijk-Kailath Monte Carlo plus secrecy analysis.
    SkSimulate(SkArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridMode {
    /// Same (eps, delta) on the forward and backward channels.
    Symmetric,
    /// Grid sweeps the forward channel; --eps-b/--del-b fix the backward one.
    FixedBackward,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    /// Points per axis of the evenly spaced grid.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = 0.0)]
    pub min: f64,
    #[arg(long, default_value_t = 0.5)]
    pub max: f64,
    /// Explicit eps values (comma separated); overrides the even grid.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub eps_values: Option<Vec<f64>>,
    /// Explicit delta values (comma separated); overrides the even grid.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub delta_values: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = GridMode::Symmetric)]
    pub mode: GridMode,
    #[arg(long)]
    pub eps_b: Option<f64>,
    #[arg(long)]
    pub del_b: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RatesArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps_f: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub del_f: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub eps_b: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub del_b: f64,
    /// Fixed time-share; optimized when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MaurerArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub eps_b: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub del_b: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    /// JSON file with the system distributions.
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SkArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub power: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub var_n: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub var_m: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub var_s: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rho1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rho2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rho3: f64,
    /// Channel uses per message.
    #[arg(long)]
    pub n: usize,
    /// Rate as a fraction of the forward capacity; M = ceil(2^(n R)).
    #[arg(long, allow_negative_numbers = true)]
    pub rate_fraction: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use the exact finite-M variance of theta in the leakage bound.
    #[arg(long)]
    pub finite_m_variance: bool,
    /// Also dump one run's transcript as CSV to this path.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    /// Message sent in the dumped transcript.
    #[arg(long, default_value_t = 1)]
    pub transcript_message: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Resolved configuration of one invocation, echoed in every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub params: BTreeMap<String, Value>,
    pub out: Option<String>,
    pub seed: Option<u64>,
    pub format: Format,
}

impl RunConfig {
    fn new(subcommand: &str, output: &OutputArgs, format: Format, seed: Option<u64>) -> Self {
        RunConfig {
            subcommand: subcommand.to_string(),
            params: BTreeMap::new(),
            out: output.out.as_ref().map(|p| p.display().to_string()),
            seed,
            format,
        }
    }

    fn set(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(key.to_string(), json!(value));
    }
}

/// A failed command: message plus process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Degenerate(_) | Error::Io(_) => 2,
            _ => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::BscSurface(a) => cmd_bsc_surface(a),
        Command::BscRates(a) => cmd_bsc_rates(a),
        Command::MaurerSim(a) => cmd_maurer_sim(a),
        Command::RegionEval(a) => cmd_region_eval(a),
        Command::SkSimulate(a) => cmd_sk_simulate(a),
    }
}

fn json_only(name: &str, output: &OutputArgs) -> CliResult<Format> {
    match output.format.unwrap_or(Format::Json) {
        Format::Json => Ok(Format::Json),
        Format::Csv => Err(CliError::usage(format!("{name} only writes JSON"))),
    }
}

fn open_out(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| {
                CliError::from(Error::Io(io::Error::new(
                    e.kind(),
                    format!("{}: {e}", p.display()),
                )))
            })?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json(path: Option<&Path>, value: &Value) -> CliResult<()> {
    let mut out = open_out(path)?;
    let text = serde_json::to_string_pretty(value).expect("serializable");
    writeln!(out, "{text}")
        .and_then(|_| out.flush())
        .map_err(|e| CliError::from(Error::Io(e)))
}

pub fn cmd_bsc_surface(a: &SurfaceArgs) -> CliResult<()> {
    let format = a.output.format.unwrap_or(Format::Csv);
    let mut cfg = RunConfig::new("bsc-surface", &a.output, format, None);
    let grid = |explicit: &Option<Vec<f64>>| -> CliResult<Vec<f64>> {
        match explicit {
            Some(v) => Ok(v.clone()),
            None => Ok(linear_grid(a.min, a.max, a.points)?),
        }
    };
    let eps = grid(&a.eps_values)?;
    let del = grid(&a.delta_values)?;
    if eps.is_empty() || del.is_empty() {
        return Err(CliError::usage("surface grid is empty"));
    }
    let mode = match a.mode {
        GridMode::Symmetric => {
            if a.eps_b.is_some() || a.del_b.is_some() {
                return Err(CliError::usage(
                    "--eps-b/--del-b require --mode fixed-backward",
                ));
            }
            SurfaceMode::Symmetric
        }
        GridMode::FixedBackward => match (a.eps_b, a.del_b) {
            (Some(eps_b), Some(del_b)) => SurfaceMode::FixedBackward { eps_b, del_b },
            _ => {
                return Err(CliError::usage(
                    "--mode fixed-backward needs --eps-b and --del-b",
                ))
            }
        },
    };
    cfg.set("grid_eps", &eps);
    cfg.set("grid_delta", &del);
    cfg.set("mode", mode);
    let points = rate_surface(&eps, &del, mode)?;
    match format {
        Format::Csv => {
            // The CSV body is fixed by its header; the configuration goes to stderr.
            eprintln!("{}", serde_json::to_string(&cfg).expect("serializable"));
            let mut out = open_out(a.output.out.as_deref())?;
            write_surface_csv(&mut out, &points)?;
            out.flush().map_err(|e| CliError::from(Error::Io(e)))
        }
        Format::Json => write_json(
            a.output.out.as_deref(),
            &json!({ "config": cfg, "points": points }),
        ),
    }
}

pub fn cmd_bsc_rates(a: &RatesArgs) -> CliResult<()> {
    let format = json_only("bsc-rates", &a.output)?;
    let sys = BscSystem::new(a.eps_f, a.del_f, a.eps_b, a.del_b)?;
    let mut cfg = RunConfig::new("bsc-rates", &a.output, format, None);
    cfg.set("eps_f", a.eps_f);
    cfg.set("del_f", a.del_f);
    cfg.set("eps_b", a.eps_b);
    cfg.set("del_b", a.del_b);
    cfg.set("alpha", a.alpha);
    let breakdown = match a.alpha {
        Some(alpha) => rate_breakdown(&sys, alpha)?,
        None => optimize_alpha(&sys),
    };
    let value = json!({
        "config": cfg,
        "alpha_optimized": a.alpha.is_none(),
        "breakdown": breakdown,
        "no_feedback_secrecy_capacity": no_feedback_secrecy_capacity(sys.eps_f, sys.del_f)?,
        "backward_key_capacity": backward_key_capacity(&sys),
    });
    write_json(a.output.out.as_deref(), &value)
}

pub fn cmd_maurer_sim(a: &MaurerArgs) -> CliResult<()> {
    json_only("maurer-sim", &a.output)?;
    if a.n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let report = simulate_maurer(a.eps_b, a.del_b, a.n, a.seed)?;
    let mut value = serde_json::to_value(&report).expect("serializable");
    value["out"] = json!(a.output.out.as_ref().map(|p| p.display().to_string()));
    value["subcommand"] = json!("maurer-sim");
    write_json(a.output.out.as_deref(), &value)
}

pub fn cmd_region_eval(a: &RegionArgs) -> CliResult<()> {
    let format = json_only("region-eval", &a.output)?;
    let text = std::fs::read_to_string(&a.spec)
        .map_err(|e| CliError::usage(format!("{}: {e}", a.spec.display())))?;
    let spec = FeedbackSystemSpec::from_json(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", a.spec.display())))?;
    let result = theorem1_rate(&spec)?;
    let mut cfg = RunConfig::new("region-eval", &a.output, format, None);
    cfg.set("spec", a.spec.display().to_string());
    let spec_json: Value = serde_json::from_str(&text).expect("already parsed");
    cfg.set("system", spec_json);
    write_json(
        a.output.out.as_deref(),
        &json!({ "config": cfg, "result": result }),
    )
}

/// `ceil(2^(n R))`, at least 2.
pub fn message_count(n: usize, rate: f64) -> CliResult<u64> {
    let m = (n as f64 * rate).exp2();
    if !m.is_finite() || m > MAX_MESSAGES {
        return Err(CliError::usage(format!(
            "2^(n R) = {m:e} messages exceeds the supported maximum 2^53"
        )));
    }
    // Guard against 2^(nR) landing a hair above an integer.
    Ok(((m - 1e-9).ceil() as u64).max(2))
}

pub fn cmd_sk_simulate(a: &SkArgs) -> CliResult<()> {
    let format = json_only("sk-simulate", &a.output)?;
    let params =
        GaussianWiretapParams::new(a.power, a.var_n, a.var_m, a.var_s, a.rho1, a.rho2, a.rho3)?;
    if !(a.rate_fraction > 0.0 && a.rate_fraction <= 1.0) {
        return Err(Error::domain("rate_fraction", a.rate_fraction, "(0, 1]").into());
    }
    if a.trials == 0 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    let rate = a.rate_fraction * capacity_forward(&params);
    let num_messages = message_count(a.n, rate)?;
    let config = SkConfig::new(params, a.n, num_messages, a.seed)?;
    let theta_var = if a.finite_m_variance {
        ThetaVariance::FiniteMessages(num_messages)
    } else {
        ThetaVariance::Uniform
    };
    // Degenerate correlations fail here, before any simulation work.
    let summary = secrecy_summary_with(&params, a.n, rate, theta_var)?;
    if let Some(path) = &a.transcript {
        let t = run_sk(&config, a.transcript_message)?;
        let mut out = open_out(Some(path))?;
        t.write_csv(&mut out)?;
        out.flush().map_err(|e| CliError::from(Error::Io(e)))?;
    }
    let mc = monte_carlo_sk(&config, a.trials)?;

    let mut cfg = RunConfig::new("sk-simulate", &a.output, format, Some(a.seed));
    cfg.set("params", params);
    cfg.set("n", a.n);
    cfg.set("rate_fraction", a.rate_fraction);
    cfg.set("trials", a.trials);
    cfg.set("finite_m_variance", a.finite_m_variance);
    cfg.set(
        "transcript",
        a.transcript.as_ref().map(|p| p.display().to_string()),
    );
    cfg.set("transcript_message", a.transcript_message);
    let value = json!({
        "config": cfg,
        "rate": rate,
        "num_messages": num_messages,
        "monte_carlo": mc,
        "summary": summary,
    });
    write_json(a.output.out.as_deref(), &value)
}
