use crate::bnb::BnbOp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// The search finished: the returned point is eps-optimal.
    Converged,
    /// A box, iteration or time limit stopped the search early; the returned
    /// point is only the best seen so far.
    BudgetExceeded,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::BudgetExceeded => "budget_exceeded",
        }
    }
}

/// One iteration of the corner-split solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverTraceRow {
    pub k: u64,
    pub h_prime: f64,
    pub record: f64,
    pub pending_size: u64,
}

/// One iteration of branch and bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BnbTraceRow {
    pub k: u64,
    pub r_k: f64,
    pub op: BnbOp,
    pub record: f64,
    pub covered_volume: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Trace {
    Cover(Vec<CoverTraceRow>),
    Bnb(Vec<BnbTraceRow>),
}

impl Trace {
    pub fn len(&self) -> usize {
        match self {
            Self::Cover(rows) => rows.len(),
            Self::Bnb(rows) => rows.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    /// Boxes processed (corner split) or created (branch and bound).
    pub n_tot: u64,
    /// 1-based index of the box whose evaluation produced the final record;
    /// 0 when the initial evaluation was never beaten.
    pub n_opt: u64,
    /// Cut-and-split steps per bisection step; `None` for the corner-split
    /// solver. Infinite when only cut-and-split steps happened.
    pub theta: Option<f64>,
    pub status: RunStatus,
    pub iterations: u64,
    pub evaluations: u64,
    pub trace: Option<Trace>,
}

impl RunResult {
    pub fn converged(&self) -> bool {
        self.status == RunStatus::Converged
    }
}
