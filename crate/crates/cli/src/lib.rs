//! Command-line experiment runner for `qaoa-bo`: seeded BO runs, sweeps,
//! optimum oracles, landscape exports and theory calculators.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod theory_cmd;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use qaoa_bo::simulator::EstimatorMode;

pub use commands::{cmd_landscape, cmd_oracle, cmd_run, cmd_sweep};
pub use config::{ExperimentConfig, Overrides};
pub use error::{CliError, CliResult};
pub use theory_cmd::{cmd_theory, TheoryCmd};

#[derive(Debug, Parser)]
#[command(name = "qaoa-bo", version, about = "Bayesian optimization of QAOA MaxCut circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// BO runs over the configured seeds.
    Run(Common),
    /// BO runs over a grid of n, p, q and M.
    Sweep(Common),
    /// Grid-search optimum of the objective.
    Oracle(Common),
    /// Objective values on a full grid (p ≤ 2).
    Landscape {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = commands::DEFAULT_LANDSCAPE_RESOLUTION)]
        resolution: usize,
    },
    /// Closed-form bounds, printed as JSON.
    Theory {
        #[command(subcommand)]
        calc: TheoryCmd,
    },
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// TOML experiment file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// ring:N, regular:N:D:SEED or file:PATH
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub p: Option<usize>,
    /// Symmetric Pauli noise strength; 0 is noiseless.
    #[arg(long)]
    pub q: Option<f64>,
    /// `A..B` or a comma list.
    #[arg(long)]
    pub seeds: Option<String>,
    #[arg(long = "T")]
    pub steps: Option<usize>,
    #[arg(long = "T0")]
    pub initial: Option<usize>,
    #[arg(long = "M")]
    pub measurements: Option<u64>,
    #[arg(long, value_parser = parse_estimator)]
    pub estimator: Option<EstimatorMode>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// constant:C, sqrt-log:C or theorem1:V_HAT
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub length_scale: Option<f64>,
    #[arg(long)]
    pub grid_per_dim: Option<usize>,
    /// Golden-section refinement of each acquisition maximum.
    #[arg(long)]
    pub refine: bool,
    /// Fit raw objective values instead of values divided by |E|.
    #[arg(long)]
    pub no_normalize: bool,
    #[arg(long)]
    pub oracle_resolution: Option<usize>,
    /// Output directory; overrides the QAOA_BO_OUT variable and the file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_estimator(s: &str) -> Result<EstimatorMode, String> {
    match s {
        "gaussian" => Ok(EstimatorMode::Gaussian),
        "shots" => Ok(EstimatorMode::Shots),
        _ => Err(format!("unknown estimator {s:?}; use gaussian or shots")),
    }
}

impl Common {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            graph: self.graph.clone(),
            p: self.p,
            q: self.q,
            seeds: self.seeds.clone(),
            steps: self.steps,
            initial: self.initial,
            measurements: self.measurements,
            estimator: self.estimator,
            delta: self.delta,
            eta: self.eta.clone(),
            nu: self.nu,
            length_scale: self.length_scale,
            grid_per_dim: self.grid_per_dim,
            refine: self.refine,
            no_normalize: self.no_normalize,
            oracle_resolution: self.oracle_resolution,
            out: None,
        }
    }

    /// File values with flag overrides applied.
    pub fn resolve(&self) -> CliResult<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        cfg.apply(&self.overrides())?;
        Ok(cfg)
    }
}

/// Runs one parsed command, writing files and printing to stdout.
pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Run(c) => {
            let cfg = c.resolve()?;
            let outcome = cmd_run(&cfg)?;
            let dir = cfg.resolve_out_dir(c.out.as_deref());
            outcome.outputs.write_all(&dir)?;
            println!(
                "{}",
                serde_json::json!({
                    "out_dir": dir,
                    "f_star": outcome.oracle.f_star,
                    "median_best_f": outcome.summary.median_best_f,
                    "seeds": cfg.seeds.len(),
                })
            );
        }
        Command::Sweep(c) => {
            let cfg = c.resolve()?;
            let outcome = cmd_sweep(&cfg)?;
            let dir = cfg.resolve_out_dir(c.out.as_deref());
            outcome.outputs.write_all(&dir)?;
            println!("{}", serde_json::json!({ "out_dir": dir, "runs": outcome.runs.len() }));
        }
        Command::Oracle(c) => {
            let cfg = c.resolve()?;
            let (report, files) = cmd_oracle(&cfg)?;
            files.write_all(&cfg.resolve_out_dir(c.out.as_deref()))?;
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
        }
        Command::Landscape { common, resolution } => {
            let cfg = common.resolve()?;
            let (_, files) = cmd_landscape(&cfg, *resolution)?;
            let dir = cfg.resolve_out_dir(common.out.as_deref());
            files.write_all(&dir)?;
            println!("{}", serde_json::json!({ "out_dir": dir, "file": "landscape.csv" }));
        }
        Command::Theory { calc } => {
            println!("{}", cmd_theory(calc)?);
        }
    }
    Ok(())
}

/// Parses `args` and runs the command, returning the process exit code.
/// Usage errors exit with 1, like any other configuration error.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
