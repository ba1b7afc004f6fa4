//! Best-first branch and bound with ball-based discarding.
//!
//! Boxes wait in a queue ordered by the objective value at their centers.
//! The box with the lowest center value is popped and the discard radius
//! `r_k = min(rho_k, r)` around its center is computed, `r` being the
//! half-diagonal of the domain. Then the first matching rule applies:
//!
//! 1. `r_k >= d_k / 2`: the ball covers the box, drop it.
//! 2. `r_k < gamma r`: bisect across a longest edge.
//! 3. otherwise: drop the largest centered box inside the ball and tile the
//!    rest with at most `2n` slabs.
//!
//! The volume of everything dropped is tracked as `mu`; the run ends when the
//! queue is empty, i.e. when `mu` reaches the domain volume.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::geometry::HyperRectangle;
use crate::result::{BnbTraceRow, RunResult, RunStatus, Trace};
use crate::vanderbei::{CoveringNorm, Problem, RadiusSolver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BnbOp {
    Discard,
    Bisect,
    CutAndSplit,
}

impl BnbOp {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Discard => "discard",
            Self::Bisect => "bisect",
            Self::CutAndSplit => "cut_and_split",
        }
    }
}

impl fmt::Display for BnbOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BnbOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "discard" => Ok(Self::Discard),
            "bisect" => Ok(Self::Bisect),
            "cut_and_split" => Ok(Self::CutAndSplit),
            _ => Err(invalid(format!("unknown operation '{s}'"))),
        }
    }
}

/// Picks the operation for a box with the given half-diagonal.
pub fn classify_step(r_k: f64, half_diag: f64, gamma_r: f64) -> BnbOp {
    if r_k >= half_diag {
        BnbOp::Discard
    } else if r_k < gamma_r {
        BnbOp::Bisect
    } else {
        BnbOp::CutAndSplit
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BnbConfig {
    pub eps: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `None` runs until the queue empties.
    pub max_iterations: Option<u64>,
    /// Norm the modulus is valid in. `Euclidean` uses it unchanged.
    pub norm: CoveringNorm,
    pub record_trace: bool,
}

impl BnbConfig {
    pub const DEFAULT_BETA: f64 = 0.99;
    pub const DEFAULT_MAX_ITERATIONS: u64 = 100_000;

    pub fn new(eps: f64, gamma: f64) -> Self {
        Self {
            eps,
            beta: Self::DEFAULT_BETA,
            gamma,
            max_iterations: Some(Self::DEFAULT_MAX_ITERATIONS),
            norm: CoveringNorm::Euclidean,
            record_trace: false,
        }
    }
}

/// Best value seen so far and where it was found.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub value: f64,
    pub point: Vec<f64>,
    /// 1-based creation index of the box whose center holds the record.
    pub index: u64,
}

/// Replaces the record on strict improvement; returns whether it did.
pub fn record_update(record: &mut Record, point: &[f64], value: f64, index: u64) -> bool {
    if value < record.value {
        record.value = value;
        record.point = point.to_vec();
        record.index = index;
        true
    } else {
        false
    }
}

#[derive(Debug)]
struct Entry {
    value: f64,
    seq: u64,
    b: HyperRectangle,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Reversed so that BinaryHeap pops the lowest value, oldest first.
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .value
            .total_cmp(&self.value)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Snapshot handed to a [`BnbObserver`] after each iteration.
pub struct BnbStep<'a> {
    pub k: u64,
    pub popped: &'a HyperRectangle,
    pub center_value: f64,
    /// Lowest center value still queued right after the pop.
    pub next_queued_value: Option<f64>,
    pub r_k: f64,
    pub op: BnbOp,
    /// The region dropped this iteration (the popped box or the inscribed box).
    pub removed: Option<&'a HyperRectangle>,
    pub record_value: f64,
    pub covered_volume: f64,
    queue: &'a BinaryHeap<Entry>,
}

impl BnbStep<'_> {
    /// Sum of queued box volumes, recomputed from scratch.
    pub fn queued_volume(&self) -> f64 {
        self.queue.iter().map(|e| e.b.volume()).sum()
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }
}

pub trait BnbObserver {
    fn on_step(&mut self, step: &BnbStep<'_>);
}

impl BnbObserver for () {
    fn on_step(&mut self, _: &BnbStep<'_>) {}
}

/// Branch-and-bound output beyond the common [`RunResult`].
#[derive(Debug, Clone, PartialEq)]
pub struct BnbSummary {
    pub result: RunResult,
    pub r1: f64,
    pub half_diagonal: f64,
    pub covered_volume: f64,
    pub domain_volume: f64,
    /// Largest `|mu + queued volume - vol(P)| / vol(P)` over all iterations,
    /// from the running sums.
    pub max_volume_drift: f64,
    pub bisections: u64,
    pub cuts: u64,
}

pub fn solve_bnb(problem: &Problem, cfg: &BnbConfig) -> Result<RunResult> {
    Ok(solve_bnb_observed(problem, cfg, &mut ())?.result)
}

pub fn solve_bnb_observed(
    problem: &Problem,
    cfg: &BnbConfig,
    observer: &mut dyn BnbObserver,
) -> Result<BnbSummary> {
    if !(cfg.gamma > 0.0 && cfg.gamma <= 1.0) {
        return Err(invalid(format!(
            "gamma must lie in (0, 1], got {}",
            cfg.gamma
        )));
    }
    if let Some(0) = cfg.max_iterations {
        return Err(invalid("max_iterations must be positive"));
    }
    let modulus = problem
        .modulus()
        .clone()
        .scaled(cfg.norm.ball_inflation(problem.dim()));
    let mut radius = RadiusSolver::new(modulus, cfg.eps, cfg.beta)?;

    let start_evals = problem.eval_count();
    let domain = problem.domain().clone();
    let domain_volume = domain.volume();
    let r = domain.half_diagonal();

    let x1 = domain.center();
    let f_x1 = problem.eval(&x1);
    let mut record = Record {
        value: f_x1,
        point: x1,
        index: 1,
    };
    let r1 = radius.solve(0.0)?.rho.min(r);
    if r1 < r && cfg.gamma <= r1 / r {
        return Err(invalid(format!(
            "gamma must exceed r1 / r = {} for this problem and eps",
            r1 / r
        )));
    }
    let gamma_r = cfg.gamma * r;

    let mut queue = BinaryHeap::new();
    let mut created: u64 = 1;
    queue.push(Entry {
        value: f_x1,
        seq: 0,
        b: domain,
    });
    let mut queued_volume = domain_volume;
    let mut covered = 0.0f64;
    let mut max_drift = 0.0f64;
    let (mut k, mut cuts, mut bisections) = (0u64, 0u64, 0u64);
    let mut trace = cfg.record_trace.then(Vec::new);
    let mut status = RunStatus::Converged;

    let mut push = |queue: &mut BinaryHeap<Entry>, record: &mut Record, b: HyperRectangle| {
        let c = b.center();
        let v = problem.eval(&c);
        created += 1;
        record_update(record, &c, v, created);
        queue.push(Entry {
            value: v,
            seq: created,
            b,
        });
    };

    while let Some(entry) = queue.pop() {
        if cfg.max_iterations.is_some_and(|m| k >= m) {
            queue.push(entry);
            status = RunStatus::BudgetExceeded;
            break;
        }
        k += 1;
        let next_queued_value = queue.peek().map(|e| e.value);
        let b = entry.b;
        queued_volume -= b.volume();

        let gap = (entry.value - record.value).max(0.0);
        let r_k = radius.solve(gap)?.rho.min(r);
        let op = classify_step(r_k, b.half_diagonal(), gamma_r);
        let mut inner = None;
        match op {
            BnbOp::Discard => covered += b.volume(),
            BnbOp::Bisect => {
                bisections += 1;
                let (lo, hi) = b.bisect_longest();
                for child in [lo, hi] {
                    queued_volume += child.volume();
                    push(&mut queue, &mut record, child);
                }
            }
            BnbOp::CutAndSplit => {
                cuts += 1;
                let s = b.inscribe_max_box(r_k)?;
                let h = b.centered_box(&s)?;
                covered += h.volume();
                for slab in b.slab_decompose(&h)? {
                    queued_volume += slab.volume();
                    push(&mut queue, &mut record, slab);
                }
                inner = Some(h);
            }
        }

        let drift = (covered + queued_volume - domain_volume).abs() / domain_volume;
        max_drift = max_drift.max(drift);
        if let Some(t) = trace.as_mut() {
            t.push(BnbTraceRow {
                k,
                r_k,
                op,
                record: record.value,
                covered_volume: covered,
            });
        }
        observer.on_step(&BnbStep {
            k,
            popped: &b,
            center_value: entry.value,
            next_queued_value,
            r_k,
            op,
            removed: match op {
                BnbOp::Discard => Some(&b),
                BnbOp::CutAndSplit => inner.as_ref(),
                BnbOp::Bisect => None,
            },
            record_value: record.value,
            covered_volume: covered,
            queue: &queue,
        });
    }

    if status == RunStatus::Converged && (covered - domain_volume).abs() > 1e-9 * domain_volume {
        return Err(Error::Internal(format!(
            "queue exhausted but covered volume {covered} differs from domain volume {domain_volume}"
        )));
    }

    let theta = match (cuts, bisections) {
        (0, 0) => 0.0,
        (_, 0) => f64::INFINITY,
        (c, b) => c as f64 / b as f64,
    };
    let result = RunResult {
        best_point: record.point,
        best_value: record.value,
        n_tot: created,
        n_opt: record.index,
        theta: Some(theta),
        status,
        iterations: k,
        evaluations: problem.eval_count() - start_evals,
        trace: trace.map(Trace::Bnb),
    };
    Ok(BnbSummary {
        result,
        r1,
        half_diagonal: r,
        covered_volume: covered,
        domain_volume,
        max_volume_drift: max_drift,
        bisections,
        cuts,
    })
}
