//! Solver settings assembled from a config file and command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Deserialize;
use vancover::{BnbConfig, CoverConfig, CoveringNorm, TestProblemId, TraversalScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Cover,
    Bnb,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Cover => "cover",
            Self::Bnb => "bnb",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cover" => Ok(Self::Cover),
            "bnb" => Ok(Self::Bnb),
            other => bail!("unknown algorithm '{other}' (expected cover or bnb)"),
        }
    }
}

/// Solver flags shared by `run` and `sweep`. Every field is optional so that
/// values missing on the command line can come from `--config`.
#[derive(Args, Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverArgs {
    /// Test problem: f1, f2, f3 or f4.
    #[arg(long)]
    pub problem: Option<String>,
    /// cover or bnb.
    #[arg(long)]
    pub algorithm: Option<String>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Defaults to the problem's eta:eps ratio times eps.
    #[arg(long)]
    pub eta: Option<f64>,
    /// eta as a fraction of eps; ignored when --eta is given.
    #[arg(long)]
    pub eta_ratio: Option<f64>,
    /// Traversal scheme: 1a, 1b, 2a, 2b or recursive.
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Defaults to the problem's gamma (0.08 for f3, 0.01 otherwise).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Norm the modulus is valid in: max, euclidean or manhattan.
    #[arg(long)]
    pub norm: Option<String>,
    #[arg(long)]
    pub max_boxes: Option<u64>,
    #[arg(long)]
    pub max_iterations: Option<u64>,
    #[arg(long)]
    pub max_seconds: Option<f64>,
}

impl SolverArgs {
    /// Fills every unset field from `file`.
    pub fn or(self, file: SolverArgs) -> SolverArgs {
        SolverArgs {
            problem: self.problem.or(file.problem),
            algorithm: self.algorithm.or(file.algorithm),
            eps: self.eps.or(file.eps),
            eta: self.eta.or(file.eta),
            eta_ratio: self.eta_ratio.or(file.eta_ratio),
            scheme: self.scheme.or(file.scheme),
            beta: self.beta.or(file.beta),
            gamma: self.gamma.or(file.gamma),
            norm: self.norm.or(file.norm),
            max_boxes: self.max_boxes.or(file.max_boxes),
            max_iterations: self.max_iterations.or(file.max_iterations),
            max_seconds: self.max_seconds.or(file.max_seconds),
        }
    }
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    pub solver: SolverArgs,
    pub trace: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(text)?;
        let mut path = |key: &str| -> Result<Option<PathBuf>> {
            match table.remove(key) {
                None => Ok(None),
                Some(toml::Value::String(s)) => Ok(Some(PathBuf::from(s))),
                Some(other) => bail!("'{key}' must be a string, got {other}"),
            }
        };
        let trace = path("trace")?;
        let output = path("output")?;
        let solver = SolverArgs::deserialize(toml::Value::Table(table))?;
        Ok(FileConfig {
            solver,
            trace,
            output,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverSettings {
    Cover(CoverConfig),
    Bnb(BnbConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub problem: TestProblemId,
    pub solver: SolverSettings,
}

impl Settings {
    pub fn algorithm(&self) -> Algorithm {
        match self.solver {
            SolverSettings::Cover(_) => Algorithm::Cover,
            SolverSettings::Bnb(_) => Algorithm::Bnb,
        }
    }

    pub fn eps(&self) -> f64 {
        match &self.solver {
            SolverSettings::Cover(c) => c.eps,
            SolverSettings::Bnb(c) => c.eps,
        }
    }

    /// Validates the flag combination and fills problem-specific defaults.
    /// Nothing is evaluated here.
    pub fn resolve(args: &SolverArgs) -> Result<Settings> {
        let problem: TestProblemId = match &args.problem {
            Some(p) => p.parse()?,
            None => bail!("missing --problem"),
        };
        let algorithm: Algorithm = match &args.algorithm {
            Some(a) => a.parse()?,
            None => bail!("missing --algorithm"),
        };
        let Some(eps) = args.eps else {
            bail!("missing --eps")
        };
        if !(eps > 0.0 && eps.is_finite()) {
            bail!("eps must be positive, got {eps}");
        }
        let norm = args
            .norm
            .as_deref()
            .map(str::parse::<CoveringNorm>)
            .transpose()?;

        let misplaced = |flags: &[(&str, bool)]| -> Result<()> {
            let given: Vec<&str> = flags.iter().filter(|f| f.1).map(|f| f.0).collect();
            if given.is_empty() {
                Ok(())
            } else {
                bail!(
                    "{} not applicable to algorithm {}",
                    given.join(", "),
                    algorithm.name()
                )
            }
        };

        let solver = match algorithm {
            Algorithm::Cover => {
                misplaced(&[
                    ("--beta", args.beta.is_some()),
                    ("--gamma", args.gamma.is_some()),
                    ("--max-iterations", args.max_iterations.is_some()),
                ])?;
                let eta = match (args.eta, args.eta_ratio) {
                    (Some(eta), _) => eta,
                    (None, Some(ratio)) => ratio * eps,
                    (None, None) => problem.eta_ratio() * eps,
                };
                if !(eta > 0.0 && eta < eps) {
                    bail!("eta must lie in (0, eps), got {eta} with eps {eps}");
                }
                let scheme: TraversalScheme = match &args.scheme {
                    Some(s) => s.parse()?,
                    None => TraversalScheme::S1a,
                };
                if let Some(s) = args.max_seconds {
                    if s.is_nan() || s <= 0.0 {
                        bail!("max-seconds must be positive, got {s}");
                    }
                }
                if args.max_boxes == Some(0) {
                    bail!("max-boxes must be positive");
                }
                let mut cfg = CoverConfig::new(eps, eta, scheme);
                cfg.max_boxes = args.max_boxes;
                cfg.max_seconds = args.max_seconds;
                if let Some(n) = norm {
                    cfg.norm = n;
                }
                SolverSettings::Cover(cfg)
            }
            Algorithm::Bnb => {
                misplaced(&[
                    ("--eta", args.eta.is_some()),
                    ("--eta-ratio", args.eta_ratio.is_some()),
                    ("--scheme", args.scheme.is_some()),
                    ("--max-boxes", args.max_boxes.is_some()),
                    ("--max-seconds", args.max_seconds.is_some()),
                ])?;
                let gamma = args.gamma.unwrap_or_else(|| problem.default_gamma());
                if !(gamma > 0.0 && gamma <= 1.0) {
                    bail!("gamma must lie in (0, 1], got {gamma}");
                }
                let beta = args.beta.unwrap_or(BnbConfig::DEFAULT_BETA);
                if !(beta > 0.0 && beta <= 1.0) {
                    bail!("beta must lie in (0, 1], got {beta}");
                }
                if args.max_iterations == Some(0) {
                    bail!("max-iterations must be positive");
                }
                let mut cfg = BnbConfig::new(eps, gamma);
                cfg.beta = beta;
                if args.max_iterations.is_some() {
                    cfg.max_iterations = args.max_iterations;
                }
                if let Some(n) = norm {
                    cfg.norm = n;
                }
                SolverSettings::Bnb(cfg)
            }
        };
        Ok(Settings { problem, solver })
    }
}
