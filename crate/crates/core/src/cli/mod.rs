//! The `ucin` command-line runner.
//!
//! Every subcommand writes a CSV (`--out`) whose header names each column as
//! `name[unit]`, and a JSON sidecar next to it carrying the full config, the
//! seed, the tool version and a timestamp. CSV bodies depend only on the flags.

pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::optimizer::{DensitySearch, DEFAULT_MU_MAX, DEFAULT_RHO_CAP, DEFAULT_RHO_FLOOR};
use crate::params::NetworkConfig;
use crate::simulator::{PrecoderMode, RvqMode, SimOptions};
use commands::{CompareOptions, Engine, StrategyKind};
use output::{write_artifacts, Report, Stamp};

#[derive(Debug, Parser)]
#[command(name = "ucin", version, about = "User-centric interference nulling in Poisson small cell networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytical p_s against mu.
    AnalyticCurve {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Monte Carlo p_s against the strategy parameter (mu, N or cluster size).
    SimulateCurve {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, value_enum, default_value_t = StrategyArg::UserCentric)]
        strategy: StrategyArg,
    },
    /// Searches the mu maximizing p_s.
    OptimizeMu {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, value_enum, default_value_t = EngineArg::Analytic)]
        engine: EngineArg,
        #[arg(long, default_value_t = DEFAULT_MU_MAX)]
        mu_max: f64,
    },
    /// Tuned strategies against the BS-user density ratio rho.
    CompareStrategies {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        sim: SimArgs,
        /// Pins the fixed-number baseline's N instead of tuning it.
        #[arg(long)]
        n_requests: Option<usize>,
        /// Pins the clustering baseline's mean cluster size instead of tuning it.
        #[arg(long)]
        cluster_size: Option<f64>,
        #[arg(long, default_value_t = commands::DEFAULT_TUNING_REALIZATIONS)]
        tune_realizations: u64,
        #[arg(long, default_value_t = DEFAULT_MU_MAX)]
        mu_max: f64,
    },
    /// p_s against the number of RVQ feedback bits.
    FeedbackSweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, default_value_t = DEFAULT_MU_MAX)]
        mu_max: f64,
    },
    /// Minimal rho reaching a target p_s against the antenna count.
    DensityTradeoff {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value_t = 0.9)]
        target_ps: f64,
        #[arg(long, default_value_t = DEFAULT_MU_MAX)]
        mu_max: f64,
        #[arg(long, default_value_t = DEFAULT_RHO_FLOOR)]
        rho_floor: f64,
        #[arg(long, default_value_t = DEFAULT_RHO_CAP)]
        rho_cap: f64,
    },
    /// Empirical against Poisson pmf of requests received by the home BS.
    PmfCheck {
        #[command(flatten)]
        common: CommonArgs,
    },
}

/// Config file plus one override flag per field.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub lambda_b: Option<f64>,
    #[arg(long)]
    pub lambda_u: Option<f64>,
    #[arg(long)]
    pub m_antennas: Option<i64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// SIR threshold on the linear scale.
    #[arg(long, conflicts_with = "sinr_db")]
    pub sinr_threshold: Option<f64>,
    /// SIR threshold in dB.
    #[arg(long, allow_negative_numbers = true)]
    pub sinr_db: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, conflicts_with = "perfect_csi")]
    pub feedback_bits: Option<i64>,
    /// Drops any `feedback_bits` from the config file.
    #[arg(long)]
    pub perfect_csi: bool,
    #[arg(long)]
    pub window_side: Option<f64>,
    #[arg(long)]
    pub n_realizations: Option<i64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl ConfigArgs {
    /// Merges the overrides into the file's keys, then validates.
    pub fn resolve(&self) -> Result<NetworkConfig> {
        let mut table = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                text.parse::<toml::Table>().map_err(|e| Error::Parse(e.message().to_string()))?
            }
            None => toml::Table::new(),
        };
        let mut set = |key: &str, v: toml::Value| {
            table.insert(key.to_string(), v);
        };
        let float = |v: f64| toml::Value::Float(v);
        if let Some(v) = self.lambda_b {
            set("lambda_b", float(v));
        }
        if let Some(v) = self.lambda_u {
            set("lambda_u", float(v));
        }
        if let Some(v) = self.m_antennas {
            set("m_antennas", toml::Value::Integer(v));
        }
        if let Some(v) = self.alpha {
            set("alpha", float(v));
        }
        if let Some(v) = self.sinr_threshold {
            set("sinr_threshold", float(v));
        }
        if let Some(db) = self.sinr_db {
            set("sinr_threshold", float(10f64.powf(db / 10.0)));
        }
        if let Some(v) = self.mu {
            set("mu", float(v));
        }
        if let Some(v) = self.feedback_bits {
            set("feedback_bits", toml::Value::Integer(v));
        }
        if let Some(v) = self.window_side {
            set("window_side", float(v));
        }
        if let Some(v) = self.n_realizations {
            set("n_realizations", toml::Value::Integer(v));
        }
        if let Some(v) = self.seed {
            let repr = match i64::try_from(v) {
                Ok(i) => toml::Value::Integer(i),
                Err(_) => toml::Value::String(v.to_string()),
            };
            set("seed", repr);
        }
        if self.perfect_csi {
            table.remove("feedback_bits");
        }
        for key in ["lambda_b", "lambda_u", "m_antennas", "alpha", "sinr_threshold"] {
            if !table.contains_key(key) {
                return Err(Error::InvalidConfig(format!("missing {key}: set it in --config or with --{}", key.replace('_', "-"))));
            }
        }
        let text = toml::to_string(&table).map_err(|e| Error::Parse(e.to_string()))?;
        NetworkConfig::from_toml_str(&text)
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// CSV output path; the JSON sidecar gets the same stem.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, Default, Args)]
pub struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub sweep_from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sweep_to: Option<f64>,
    #[arg(long)]
    pub sweep_step: Option<f64>,
}

impl SweepArgs {
    fn grid(&self, default: (f64, f64, f64)) -> Result<Vec<f64>> {
        commands::sweep_grid(
            self.sweep_from.unwrap_or(default.0),
            self.sweep_to.unwrap_or(default.1),
            self.sweep_step.unwrap_or(default.2),
        )
    }

    fn integers(&self, default: (f64, f64, f64), what: &str) -> Result<Vec<u64>> {
        self.grid(default)?.into_iter().map(|x| commands::integral(x, what)).collect()
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SimArgs {
    #[arg(long, value_enum, default_value_t = PrecoderArg::Lazy)]
    pub precoders: PrecoderArg,
    #[arg(long, value_enum, default_value_t = RvqArg::ExactLaw)]
    pub rvq: RvqArg,
}

impl SimArgs {
    fn options(&self) -> SimOptions {
        SimOptions {
            precoders: match self.precoders {
                PrecoderArg::Lazy => PrecoderMode::Lazy,
                PrecoderArg::Full => PrecoderMode::Full,
            },
            rvq: match self.rvq {
                RvqArg::ExactLaw => RvqMode::ExactLaw,
                RvqArg::Codebook => RvqMode::Codebook,
            },
            window: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    UserCentric,
    NonCoordination,
    FixedNumber,
    RandomClustering,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Analytic,
    Simulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecoderArg {
    Lazy,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RvqArg {
    ExactLaw,
    Codebook,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::AnalyticCurve { .. } => "analytic-curve",
            Command::SimulateCurve { .. } => "simulate-curve",
            Command::OptimizeMu { .. } => "optimize-mu",
            Command::CompareStrategies { .. } => "compare-strategies",
            Command::FeedbackSweep { .. } => "feedback-sweep",
            Command::DensityTradeoff { .. } => "density-tradeoff",
            Command::PmfCheck { .. } => "pmf-check",
        }
    }

    fn common(&self) -> &CommonArgs {
        match self {
            Command::AnalyticCurve { common, .. }
            | Command::SimulateCurve { common, .. }
            | Command::OptimizeMu { common, .. }
            | Command::CompareStrategies { common, .. }
            | Command::FeedbackSweep { common, .. }
            | Command::DensityTradeoff { common, .. }
            | Command::PmfCheck { common } => common,
        }
    }

    /// Runs the computation for an already resolved config.
    pub fn execute(&self, config: &NetworkConfig) -> Result<Report> {
        match self {
            Command::AnalyticCurve { sweep, .. } => commands::analytic_curve(config, &sweep.grid((1.0, 3.0, 0.1))?),
            Command::SimulateCurve { sweep, sim, strategy, .. } => {
                let (kind, default) = match strategy {
                    StrategyArg::UserCentric => (StrategyKind::UserCentric, (1.0, 3.0, 0.1)),
                    StrategyArg::NonCoordination => (StrategyKind::NonCoordination, (1.0, 1.0, 1.0)),
                    StrategyArg::FixedNumber => (StrategyKind::FixedNumber, (0.0, 10.0, 1.0)),
                    StrategyArg::RandomClustering => (StrategyKind::RandomClustering, (1.0, 12.0, 1.0)),
                };
                commands::simulate_curve(config, kind, &sweep.grid(default)?, &sim.options())
            }
            Command::OptimizeMu { sim, engine, mu_max, .. } => {
                let engine = match engine {
                    EngineArg::Analytic => Engine::Analytic,
                    EngineArg::Simulated => Engine::Simulated,
                };
                commands::optimize_mu(config, engine, *mu_max, &sim.options())
            }
            Command::CompareStrategies { sweep, sim, n_requests, cluster_size, tune_realizations, mu_max, .. } => {
                let compare = CompareOptions {
                    tuning_realizations: *tune_realizations,
                    mu_max: *mu_max,
                    n_requests: *n_requests,
                    cluster_size: *cluster_size,
                };
                commands::compare_strategies(config, &sweep.grid((0.1, 1.0, 0.1))?, &compare, &sim.options())
            }
            Command::FeedbackSweep { sweep, sim, mu_max, .. } => {
                let bits = sweep.integers((2.0, 20.0, 2.0), "feedback_bits")?;
                commands::feedback_sweep(config, &bits, *mu_max, &sim.options())
            }
            Command::DensityTradeoff { sweep, target_ps, mu_max, rho_floor, rho_cap, .. } => {
                let antennas = sweep.integers((2.0, 12.0, 1.0), "m_antennas")?;
                let search = DensitySearch { rho_floor: *rho_floor, rho_cap: *rho_cap, mu_max: *mu_max };
                commands::density_tradeoff(config, &antennas, *target_ps, &search)
            }
            Command::PmfCheck { .. } => commands::pmf_check(config),
        }
    }
}

fn sidecar(command: &str, args: &[String], config: &NetworkConfig, csv_name: &str, report: &Report) -> serde_json::Value {
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    json!({
        "tool": "ucin",
        "command": command,
        "args": args,
        "stamp": Stamp::new(config.seed()),
        "timestamp_unix": timestamp,
        "config": config,
        "csv": csv_name,
        "columns": report.table.columns,
        "summary": report.summary,
        "warnings": report.warnings,
        "curves": report.curves,
    })
}

fn run_command(cli: &Cli, args: &[String]) -> Result<()> {
    let common = cli.command.common();
    let config = common.config.resolve()?;
    let report = cli.command.execute(&config)?;
    let csv_name = common.out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let side = sidecar(cli.command.name(), args, &config, &csv_name, &report);
    write_artifacts(&common.out, &report.table.to_csv(), &side)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if !report.summary.is_empty() {
        let line: Vec<String> = report.summary.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("{}", line.join(" "));
    }
    Ok(())
}

/// Exit status for an engine error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) | Error::Parse(_) | Error::Domain(_) => 2,
        Error::Io(_) => 3,
        _ => 1,
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match run_command(&cli, &argv) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace(['\n', '\r'], " ");
            eprintln!("error[{}]: {msg}", e.code());
            exit_code(&e)
        }
    }
}
