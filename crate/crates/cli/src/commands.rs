use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use serde_json::json;
use vancover::oracle::grid_min;
use vancover::{solve_bnb, solve_cover, RunResult, RunStatus, TestProblemId};

use crate::config::{Algorithm, FileConfig, Settings, SolverArgs, SolverSettings};
use crate::output::{self, csv_writer, fmt_f64, num};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BUDGET: i32 = 2;

/// Runs one configuration, optionally collecting the trace.
pub fn execute(settings: &Settings, record_trace: bool) -> Result<(RunResult, f64)> {
    let problem = settings.problem.problem();
    let start = Instant::now();
    let result = match &settings.solver {
        SolverSettings::Cover(cfg) => {
            let cfg = vancover::CoverConfig {
                record_trace,
                ..cfg.clone()
            };
            solve_cover(&problem, &cfg)?
        }
        SolverSettings::Bnb(cfg) => {
            let cfg = vancover::BnbConfig {
                record_trace,
                ..cfg.clone()
            };
            solve_bnb(&problem, &cfg)?
        }
    };
    Ok((result, start.elapsed().as_secs_f64()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn load_config(path: Option<&Path>) -> Result<FileConfig> {
    path.map_or_else(|| Ok(FileConfig::default()), FileConfig::load)
}

#[derive(Args, Debug)]
pub struct RunCmd {
    /// TOML file with default values for any of the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Per-iteration trace CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Result JSON; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn cmd_run(cmd: RunCmd) -> Result<i32> {
    let file = load_config(cmd.config.as_deref())?;
    let settings = Settings::resolve(&cmd.solver.or(file.solver))?;
    let trace_path = cmd.trace.or(file.trace);
    let output_path = cmd.output.or(file.output);

    let (result, wall) = execute(&settings, trace_path.is_some())?;

    if let (Some(path), Some(trace)) = (&trace_path, &result.trace) {
        let mut w = create(path)?;
        output::write_trace(&mut w, trace)?;
        w.flush()?;
    }
    let text = serde_json::to_string_pretty(&output::result_json(&settings, &result, wall))?;
    match &output_path {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{text}")?;
            w.flush()?;
        }
        None => println!("{text}"),
    }
    Ok(match result.status {
        RunStatus::Converged => EXIT_OK,
        RunStatus::BudgetExceeded => EXIT_BUDGET,
    })
}

#[derive(Args, Debug)]
pub struct SweepCmd {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Swept parameter: eta (cover) or gamma (bnb).
    #[arg(long)]
    pub param: String,
    /// Comma-separated parameter values.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub values: Vec<f64>,
    /// Sweep CSV; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Eta,
    Gamma,
}

impl std::str::FromStr for SweepParam {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eta" => Ok(Self::Eta),
            "gamma" => Ok(Self::Gamma),
            other => bail!("unknown sweep parameter '{other}' (expected eta or gamma)"),
        }
    }
}

/// Settings for each swept value, all validated up front.
pub fn sweep_settings(
    base: &SolverArgs,
    param: SweepParam,
    values: &[f64],
) -> Result<Vec<Settings>> {
    if values.is_empty() {
        bail!("--values must list at least one value");
    }
    let algorithm: Algorithm = match &base.algorithm {
        Some(a) => a.parse()?,
        None => bail!("missing --algorithm"),
    };
    match (param, algorithm) {
        (SweepParam::Eta, Algorithm::Cover) | (SweepParam::Gamma, Algorithm::Bnb) => {}
        (SweepParam::Eta, Algorithm::Bnb) => bail!("eta sweeps need algorithm cover"),
        (SweepParam::Gamma, Algorithm::Cover) => bail!("gamma sweeps need algorithm bnb"),
    }
    values
        .iter()
        .map(|&v| {
            let mut args = base.clone();
            match param {
                SweepParam::Eta => {
                    args.eta = Some(v);
                    args.eta_ratio = None;
                }
                SweepParam::Gamma => args.gamma = Some(v),
            }
            Settings::resolve(&args).with_context(|| format!("sweep value {v}"))
        })
        .collect()
}

pub fn cmd_sweep(cmd: SweepCmd) -> Result<i32> {
    let file = load_config(cmd.config.as_deref())?;
    let param: SweepParam = cmd.param.parse()?;
    let base = cmd.solver.or(file.solver);
    let settings = sweep_settings(&base, param, &cmd.values)?;
    let output_path = cmd.output.or(file.output);
    // Open the destination before any solver work.
    let sink: Box<dyn Write> = match &output_path {
        Some(path) => Box::new(create(path)?),
        None => Box::new(io::stdout().lock()),
    };

    let results: Vec<Result<RunResult>> = settings
        .par_iter()
        .map(|s| execute(s, false).map(|r| r.0))
        .collect();

    let mut w = csv_writer(sink);
    w.write_record(output::SWEEP_HEADER)?;
    for (v, r) in cmd.values.iter().zip(&results) {
        let row = match r {
            Ok(r) => [
                v.to_string(),
                fmt_f64(r.best_value),
                r.n_tot.to_string(),
                r.n_opt.to_string(),
                r.theta.map(fmt_f64).unwrap_or_default(),
                r.status.as_str().to_string(),
            ],
            Err(e) => [
                v.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                format!("error: {e}"),
            ],
        };
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

#[derive(Args, Debug)]
pub struct OracleCmd {
    #[arg(long)]
    pub problem: String,
    /// Lattice points per axis.
    #[arg(long, default_value_t = 4001)]
    pub resolution: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn cmd_oracle(cmd: OracleCmd) -> Result<i32> {
    let id: TestProblemId = cmd.problem.parse()?;
    let r = grid_min(&id.problem(), cmd.resolution)?;
    let value = json!({
        "problem": id.name(),
        "best_point": r.best_point.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "best_value": num(r.best_value),
        "grid_resolution": r.grid_resolution,
    });
    let text = serde_json::to_string_pretty(&value)?;
    match &cmd.output {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{text}")?;
            w.flush()?;
        }
        None => println!("{text}"),
    }
    Ok(EXIT_OK)
}
