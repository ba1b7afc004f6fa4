//! Reference runs of both solvers on the four test problems, checked against
//! published values and the grid oracle.

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use rayon::prelude::*;
use vancover::oracle::{cell_diagonal, grid_min, verify_eps_optimal};
use vancover::{BnbConfig, CoverConfig, RunResult, RunStatus, TestProblemId, TraversalScheme};

use crate::config::{Settings, SolverSettings};
use crate::output::{csv_writer, fmt_f64};

pub const ORACLE_RESOLUTION: usize = 4001;
pub const EXIT_ROW_FAILED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Setting {
    Scheme(TraversalScheme),
    Gamma(f64),
}

/// One published result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub problem: TestProblemId,
    pub eps: f64,
    pub setting: Setting,
    /// `None` when no solution was reported within the iteration budget.
    pub value: Option<f64>,
    pub n_tot: Option<u64>,
    /// Measured box count must lie within a factor 2 of `n_tot`.
    pub check_n_tot: bool,
    /// Minutes-scale; only with `--extended`.
    pub extended: bool,
}

const fn cover(
    problem: TestProblemId,
    eps: f64,
    scheme: TraversalScheme,
    value: f64,
    n_tot: u64,
) -> ReferenceRow {
    ReferenceRow {
        problem,
        eps,
        setting: Setting::Scheme(scheme),
        value: Some(value),
        n_tot: Some(n_tot),
        check_n_tot: false,
        extended: eps < 0.5,
    }
}

const fn bnb(problem: TestProblemId, eps: f64, gamma: f64, value: f64, n_tot: u64) -> ReferenceRow {
    ReferenceRow {
        problem,
        eps,
        setting: Setting::Gamma(gamma),
        value: Some(value),
        n_tot: Some(n_tot),
        check_n_tot: false,
        extended: false,
    }
}

const fn checked(mut row: ReferenceRow) -> ReferenceRow {
    row.check_n_tot = true;
    row
}

const fn extended(mut row: ReferenceRow) -> ReferenceRow {
    row.extended = true;
    row
}

const fn unsolved(problem: TestProblemId, eps: f64, gamma: f64) -> ReferenceRow {
    ReferenceRow {
        problem,
        eps,
        setting: Setting::Gamma(gamma),
        value: None,
        n_tot: None,
        check_n_tot: false,
        extended: false,
    }
}

use TestProblemId::{F1, F2, F3, F4};
use TraversalScheme::{S1a, S1b, S2a, S2b};

pub const REFERENCE: &[ReferenceRow] = &[
    checked(cover(F1, 0.5, S1a, -9.6944, 603_993)),
    cover(F1, 0.5, S1b, -9.7829, 1_156_717),
    extended(cover(F1, 0.5, S2a, -9.8596, 105_214_288)),
    extended(cover(F1, 0.5, S2b, -9.8596, 102_526_635)),
    cover(F1, 0.1, S1a, -9.9363, 102_764_377),
    cover(F1, 0.1, S1b, -9.9130, 226_120_051),
    cover(F2, 0.5, S1a, -12.4467, 121_876),
    cover(F2, 0.5, S1b, -12.5738, 201_996),
    cover(F2, 0.5, S2a, -12.4072, 398_611),
    cover(F2, 0.5, S2b, -12.3823, 384_541),
    cover(F2, 0.1, S1a, -12.6490, 20_440_621),
    cover(F2, 0.1, S1b, -12.6491, 21_352_428),
    cover(F2, 0.1, S2a, -12.6415, 445_121_567),
    cover(F2, 0.1, S2b, -12.6705, 366_830_725),
    cover(F3, 0.5, S1a, -4.8605, 411),
    cover(F3, 0.5, S1b, -4.8577, 435),
    cover(F3, 0.5, S2a, -4.8534, 438),
    checked(cover(F3, 0.5, S2b, -4.8631, 361)),
    cover(F3, 0.1, S1a, -4.8646, 35_895),
    cover(F3, 0.1, S1b, -4.8646, 18_802),
    cover(F3, 0.1, S2a, -4.8646, 35_346),
    cover(F3, 0.1, S2b, -4.8646, 30_151),
    cover(F4, 0.5, S1a, -1.8904, 471),
    cover(F4, 0.5, S1b, -1.8899, 446),
    cover(F4, 0.5, S2a, -1.8897, 578),
    cover(F4, 0.5, S2b, -1.8877, 557),
    cover(F4, 0.1, S1a, -1.8904, 8_890),
    cover(F4, 0.1, S1b, -1.8820, 10_928),
    cover(F4, 0.1, S2a, -1.8904, 35_511),
    cover(F4, 0.1, S2b, -1.8904, 34_965),
    checked(bnb(F1, 0.5, 0.01, -9.7119, 427)),
    checked(bnb(F1, 0.5, 1.0, -9.7119, 725)),
    bnb(F1, 0.1, 0.01, -9.9415, 1_175),
    bnb(F1, 0.1, 1.0, -9.9415, 1_337),
    bnb(F2, 0.5, 0.01, -12.4428, 7_613),
    bnb(F2, 0.5, 1.0, -12.4301, 9_191),
    unsolved(F2, 0.1, 0.01),
    unsolved(F2, 0.1, 1.0),
    bnb(F3, 0.5, 0.08, -4.8638, 709),
    bnb(F3, 0.5, 1.0, -4.8638, 1_053),
    checked(bnb(F3, 0.1, 0.08, -4.8646, 17_865)),
    bnb(F3, 0.1, 1.0, -4.8646, 18_231),
    bnb(F4, 0.5, 0.01, -1.8127, 325),
    bnb(F4, 0.5, 1.0, -1.7217, 589),
    bnb(F4, 0.1, 0.01, -1.8172, 761),
    bnb(F4, 0.1, 1.0, -1.8045, 1_277),
];

impl ReferenceRow {
    pub fn settings(&self) -> Settings {
        let solver = match self.setting {
            Setting::Scheme(scheme) => SolverSettings::Cover(CoverConfig::new(
                self.eps,
                self.problem.eta_ratio() * self.eps,
                scheme,
            )),
            Setting::Gamma(gamma) => SolverSettings::Bnb(BnbConfig::new(self.eps, gamma)),
        };
        Settings {
            problem: self.problem,
            solver,
        }
    }

    pub fn label(&self) -> String {
        let setting = match self.setting {
            Setting::Scheme(s) => format!("cover/{}", s.name()),
            Setting::Gamma(g) => format!("bnb/gamma={g}"),
        };
        format!("{}/{}/eps={}", self.problem.name(), setting, self.eps)
    }
}

/// Oracle slack: one lattice cell diagonal times the modulus at `eta = eps`.
pub fn oracle_slack(id: TestProblemId, eps: f64, resolution: usize) -> Result<f64> {
    let p = id.problem();
    Ok(cell_diagonal(&p, resolution) * p.modulus().eval(eps)?)
}

pub fn within_factor_two(measured: u64, reference: u64) -> bool {
    let (m, r) = (measured as f64, reference as f64);
    m <= 2.0 * r && r <= 2.0 * m
}

#[derive(Debug)]
pub struct BenchOutcome {
    pub row: ReferenceRow,
    pub result: Result<RunResult>,
    pub oracle: f64,
    pub slack: f64,
    pub pass: bool,
}

pub fn judge(row: &ReferenceRow, result: &Result<RunResult>, oracle: f64, slack: f64) -> bool {
    let Ok(r) = result else { return false };
    match row.value {
        None => r.status == RunStatus::BudgetExceeded,
        Some(_) => {
            r.converged()
                && verify_eps_optimal(r.best_value, oracle, row.eps, slack)
                && (!row.check_n_tot || row.n_tot.is_some_and(|n| within_factor_two(r.n_tot, n)))
        }
    }
}

pub fn run_rows(rows: &[ReferenceRow], resolution: usize) -> Result<Vec<BenchOutcome>> {
    let mut oracles = HashMap::new();
    for row in rows {
        if let std::collections::hash_map::Entry::Vacant(e) = oracles.entry(row.problem) {
            e.insert(grid_min(&row.problem.problem(), resolution)?.best_value);
        }
    }
    rows.par_iter()
        .map(|row| {
            let slack = oracle_slack(row.problem, row.eps, resolution)?;
            let oracle = oracles[&row.problem];
            let result = crate::commands::execute(&row.settings(), false).map(|r| r.0);
            let pass = judge(row, &result, oracle, slack);
            Ok(BenchOutcome {
                row: *row,
                result,
                oracle,
                slack,
                pass,
            })
        })
        .collect()
}

#[derive(Args, Debug)]
pub struct BenchCmd {
    /// Include the minutes-scale corner-split rows.
    #[arg(long)]
    pub extended: bool,
    /// Also write the table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = ORACLE_RESOLUTION)]
    pub resolution: usize,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
}

pub fn cmd_bench(cmd: BenchCmd) -> Result<i32> {
    let mut csv = match &cmd.csv {
        Some(path) => {
            let f = std::fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            Some(csv_writer(std::io::BufWriter::new(f)))
        }
        None => None,
    };
    let rows: Vec<ReferenceRow> = REFERENCE
        .iter()
        .copied()
        .filter(|r| cmd.extended || !r.extended)
        .collect();
    let outcomes = run_rows(&rows, cmd.resolution)?;

    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "{:<28} {:>10} {:>10} {:>11} {:>11} {:>16} result",
        "row", "ref F", "F", "ref N_tot", "N_tot", "status"
    )?;
    if let Some(w) = csv.as_mut() {
        w.write_record([
            "row",
            "problem",
            "algorithm",
            "eps",
            "setting",
            "ref_F",
            "F",
            "ref_N_tot",
            "N_tot",
            "N_opt",
            "theta",
            "status",
            "oracle",
            "slack",
            "pass",
        ])?;
    }
    let mut failed = 0;
    for o in &outcomes {
        let (f, n_tot, n_opt, theta, status) = match &o.result {
            Ok(r) => (
                format!("{:.4}", r.best_value),
                r.n_tot.to_string(),
                r.n_opt.to_string(),
                r.theta.map(fmt_f64).unwrap_or_default(),
                r.status.as_str().to_string(),
            ),
            Err(e) => (
                "-".into(),
                "-".into(),
                "-".into(),
                String::new(),
                format!("error: {e}"),
            ),
        };
        let verdict = if o.pass { "pass" } else { "FAIL" };
        failed += usize::from(!o.pass);
        writeln!(
            out,
            "{:<28} {:>10} {:>10} {:>11} {:>11} {:>16} {}",
            o.row.label(),
            opt(o.row.value),
            f,
            opt(o.row.n_tot),
            n_tot,
            status,
            verdict
        )?;
        if let Some(w) = csv.as_mut() {
            let (algorithm, setting) = match o.row.setting {
                Setting::Scheme(s) => ("cover", s.name().to_string()),
                Setting::Gamma(g) => ("bnb", g.to_string()),
            };
            w.write_record([
                o.row.label(),
                o.row.problem.name().to_string(),
                algorithm.to_string(),
                o.row.eps.to_string(),
                setting,
                o.row.value.map(|v| v.to_string()).unwrap_or_default(),
                o.result
                    .as_ref()
                    .map(|r| fmt_f64(r.best_value))
                    .unwrap_or_default(),
                o.row.n_tot.map(|v| v.to_string()).unwrap_or_default(),
                n_tot,
                n_opt,
                theta,
                status,
                fmt_f64(o.oracle),
                fmt_f64(o.slack),
                o.pass.to_string(),
            ])?;
        }
    }
    if let Some(w) = csv.as_mut() {
        w.flush()?;
    }
    writeln!(
        out,
        "{} of {} rows passed",
        outcomes.len() - failed,
        outcomes.len()
    )?;
    Ok(if failed == 0 {
        crate::commands::EXIT_OK
    } else {
        EXIT_ROW_FAILED
    })
}
