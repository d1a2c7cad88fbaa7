//! Command-line front end: scenario flags in, JSON records or CSV sweep
//! files out.

mod config;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};

use cipc_core::model::{convex_interval, outage_probability};
use cipc_core::montecarlo::{estimate, McConfig};
use cipc_core::optimizer::optimize_q;
use cipc_core::{Error as CoreError, SystemConfig};

use config::CfgArgs;
use sweep::{SweepSpec, SweepVariable};

/// Exit codes: 0 success, 2 usage, 3 domain, 4 infeasible, 5 I/O.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(CoreError),
    Io(std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(CoreError::Infeasible(_)) => 4,
            CliError::Core(_) => 3,
            CliError::Io(_) => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Core(e) => e.to_string(),
            CliError::Io(e) => format!("I/O error: {e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Parser)]
#[command(
    name = "cipc",
    version,
    about = "Outage analysis and optimization for truncated channel-inversion power control"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariableArg {
    /// Agreed receive power Q.
    Q,
    /// Maximum transmit power in dB.
    PmaxDb,
    /// Transmission rate in bits per channel use.
    Rate,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the outage probability and its factors at one Q.
    Outage {
        #[command(flatten)]
        cfg: CfgArgs,
        /// Agreed receive power.
        #[arg(long)]
        q: f64,
    },
    /// Minimize the outage probability over Q.
    Optimize {
        #[command(flatten)]
        cfg: CfgArgs,
        /// Tolerance on Q.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Sweep one variable over a grid and write a CSV file.
    Sweep {
        #[command(flatten)]
        cfg: CfgArgs,
        #[arg(long, value_enum)]
        variable: VariableArg,
        #[arg(long)]
        start: f64,
        #[arg(long)]
        stop: f64,
        #[arg(long)]
        points: usize,
        #[arg(long, value_enum, default_value = "linear")]
        scale: ScaleArg,
        /// Output CSV path; defaults into $CIPC_OUT_DIR.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Monte Carlo estimate of transmit and outage rates at one Q, with the
    /// closed-form comparison.
    Simulate {
        #[command(flatten)]
        cfg: CfgArgs,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        /// RNG seed; defaults to a clock-derived value, always printed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Preset: outage versus Q under R = 0.3, P_max = 10 dB.
    Fig2 {
        #[arg(long, default_value_t = 4)]
        nt: u32,
        #[arg(long = "T", default_value_t = 150)]
        blocklength: u32,
        #[arg(long, default_value_t = 400)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Preset: minimum outage versus P_max at N_t = 5, T = 150 for
    /// R in {0.1, 0.3, 0.5}.
    Fig3 {
        #[arg(long, default_value_t = 33)]
        points: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Preset: optimal Q versus P_max at N_t = 4, T = 200 for
    /// R in {0.1, 0.3, 0.5}.
    Fig4 {
        #[arg(long, default_value_t = 33)]
        points: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn out_dir() -> PathBuf {
    std::env::var_os("CIPC_OUT_DIR").map_or_else(|| PathBuf::from("."), PathBuf::from)
}

fn cmd_outage(cfg: &SystemConfig, q: f64) -> Result<(), CliError> {
    let breakdown = outage_probability(cfg, q)?;
    let mut record = serde_json::to_value(breakdown).expect("breakdown serializes");
    // Convex-interval membership is only defined for unit noise.
    let membership = if cfg.noise_var == 1.0 {
        let iv = convex_interval(cfg)?;
        serde_json::Value::Bool(iv.nonempty && q > iv.lo && q < iv.hi)
    } else {
        serde_json::Value::Null
    };
    record["in_convex_interval"] = membership;
    println!("{}", serde_json::to_string_pretty(&record).expect("json"));
    Ok(())
}

fn cmd_optimize(cfg: &SystemConfig, tol: f64) -> Result<(), CliError> {
    let res = optimize_q(cfg, tol)?;
    println!("{}", serde_json::to_string_pretty(&res).expect("json"));
    Ok(())
}

fn cmd_simulate(cfg: &SystemConfig, q: f64, trials: u64, seed: Option<u64>) -> Result<(), CliError> {
    let seed = seed.unwrap_or_else(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0)
    });
    let est = estimate(&McConfig { trials, seed, cfg: *cfg, q })?;
    let breakdown = outage_probability(cfg, q)?;

    println!("seed: {seed}");
    println!("trials: {trials}");
    println!(
        "{:<12} {:<24} {:<24} {:<24} {:<10}",
        "metric", "estimate", "closed_form", "std_err", "delta_se"
    );
    for (name, hat, closed, se) in [
        (
            "p_transmit",
            est.p_transmit_hat.value(),
            breakdown.pt.value(),
            est.std_err_pt,
        ),
        (
            "outage",
            est.outage_hat.value(),
            breakdown.outage.value(),
            est.std_err_outage,
        ),
    ] {
        let delta = if se > 0.0 {
            format!("{:.2}", (hat - closed).abs() / se)
        } else {
            eprintln!("warning: zero standard error for {name}; delta_se undefined");
            "n/a".to_string()
        };
        println!("{name:<12} {hat:<24.16e} {closed:<24.16e} {se:<24.16e} {delta:<10}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Outage { cfg, q } => cmd_outage(&cfg.resolve()?, q),
        Command::Optimize { cfg, tol } => cmd_optimize(&cfg.resolve()?, tol),
        Command::Sweep { cfg, variable, start, stop, points, scale, out, tol } => {
            let base_cfg = cfg.resolve()?;
            let spec = SweepSpec {
                variable: match variable {
                    VariableArg::Q => SweepVariable::Q,
                    VariableArg::PmaxDb => SweepVariable::PmaxDb,
                    VariableArg::Rate => SweepVariable::Rate,
                },
                start,
                stop,
                points,
                log_scale: matches!(scale, ScaleArg::Log),
                base_cfg,
                tol,
            };
            let path = out.unwrap_or_else(|| out_dir().join("sweep.csv"));
            sweep::run_sweep(&spec, &path)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Simulate { cfg, q, trials, seed } => {
            cmd_simulate(&cfg.resolve()?, q, trials, seed)
        }
        Command::Fig2 { nt, blocklength, points, out } => {
            let base_cfg = SystemConfig::with_unit_noise(nt, blocklength, 0.3, 10.0)?;
            let iv = convex_interval(&base_cfg)?;
            if !iv.nonempty {
                return Err(CliError::Core(CoreError::Infeasible(
                    "fig2 preset needs n_t >= 2".into(),
                )));
            }
            let spec = SweepSpec {
                variable: SweepVariable::Q,
                // The q axis is reconstructed as (q_rate, 1.2 * hi].
                start: base_cfg.q_rate() * (1.0 + 1e-6),
                stop: 1.2 * iv.hi,
                points,
                log_scale: true,
                base_cfg,
                tol: 1e-10,
            };
            let path = out.unwrap_or_else(|| out_dir().join(format!("fig2_nt{nt}_T{blocklength}.csv")));
            sweep::run_sweep(&spec, &path)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Fig3 { points, out_dir: dir } => run_pmax_preset(5, 150, points, dir, "fig3"),
        Command::Fig4 { points, out_dir: dir } => run_pmax_preset(4, 200, points, dir, "fig4"),
    }
}

fn run_pmax_preset(
    nt: u32,
    blocklength: u32,
    points: usize,
    dir: Option<PathBuf>,
    stem: &str,
) -> Result<(), CliError> {
    let dir = dir.unwrap_or_else(out_dir);
    for rate in [0.1, 0.3, 0.5] {
        let base_cfg = SystemConfig::with_unit_noise(nt, blocklength, rate, 1.0)?;
        let spec = SweepSpec {
            variable: SweepVariable::PmaxDb,
            start: 0.0,
            stop: 16.0,
            points,
            log_scale: false,
            base_cfg,
            tol: 1e-10,
        };
        let path = dir.join(format!("{stem}_r{rate}.csv"));
        sweep::run_sweep(&spec, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
