//! Sequential covering by corner splits.
//!
//! Each processed box is probed at `x = min(lower + h/2, upper)`. If the
//! probe does not beat the record `F`, the covered corner grows to
//! `h' = h + (f(x) - F) / L(eta)`; otherwise `F` drops to `f(x)` and
//! `h' = h`. The corner `[lower, lower + h']` is dropped and the rest of the
//! box is tiled by at most `n` children. The run ends when no boxes remain,
//! at which point the record is within `eps` of the global minimum.
//!
//! The order in which pending boxes are processed is set by
//! [`TraversalScheme`]; it changes the amount of work, not the guarantee.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{invalid, Error, Result};
use crate::geometry::HyperRectangle;
use crate::result::{CoverTraceRow, RunResult, RunStatus, Trace};
use crate::vanderbei::{base_step, CoveringNorm, Problem};

/// List discipline for the pending boxes. All variants take the next box from
/// the head of the list; they differ in where the children of a box go and
/// in which order.
///
/// | scheme | children order | inserted at | traversal |
/// |--------|----------------|-------------|-----------|
/// | `S1a`  | reversed       | head        | depth first |
/// | `S1b`  | as generated   | head        | depth first |
/// | `S2a`  | reversed       | tail        | breadth first |
/// | `S2b`  | as generated   | tail        | breadth first |
///
/// `Recursive` visits boxes in exactly the `S1b` order but generates each
/// child only when it is about to be processed, so no list is kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraversalScheme {
    S1a,
    S1b,
    S2a,
    S2b,
    Recursive,
}

impl TraversalScheme {
    pub const LISTS: [TraversalScheme; 4] = [Self::S1a, Self::S1b, Self::S2a, Self::S2b];

    pub fn name(self) -> &'static str {
        match self {
            Self::S1a => "1a",
            Self::S1b => "1b",
            Self::S2a => "2a",
            Self::S2b => "2b",
            Self::Recursive => "recursive",
        }
    }
}

impl fmt::Display for TraversalScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TraversalScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "1a" | "s1a" => Ok(Self::S1a),
            "1b" | "s1b" => Ok(Self::S1b),
            "2a" | "s2a" => Ok(Self::S2a),
            "2b" | "s2b" => Ok(Self::S2b),
            "recursive" | "rec" => Ok(Self::Recursive),
            _ => Err(invalid(format!("unknown traversal scheme '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverConfig {
    pub eps: f64,
    pub eta: f64,
    pub scheme: TraversalScheme,
    pub max_boxes: Option<u64>,
    pub max_seconds: Option<f64>,
    /// Norm the modulus is valid in. `Max` applies the step formulas as is.
    pub norm: CoveringNorm,
    pub record_trace: bool,
}

impl CoverConfig {
    pub fn new(eps: f64, eta: f64, scheme: TraversalScheme) -> Self {
        Self {
            eps,
            eta,
            scheme,
            max_boxes: None,
            max_seconds: None,
            norm: CoveringNorm::Max,
            record_trace: false,
        }
    }
}

/// Probe point `min(lower + h/2, upper)` of a box.
pub fn iterate_point(b: &HyperRectangle, h: f64) -> Vec<f64> {
    b.lower()
        .iter()
        .zip(b.upper())
        .map(|(&a, &u)| (a + 0.5 * h).min(u))
        .collect()
}

/// Step and record after probing a box: `(h', F)`.
///
/// Only a strictly worse value widens the step; a tie keeps `h` and
/// (re)sets the record to `value`.
pub fn adaptive_step(value: f64, record: f64, h: f64, l_eta: f64) -> (f64, f64) {
    if value > record {
        (h + (value - record) / l_eta, record)
    } else {
        (h, value)
    }
}

/// Hook called once per processed box, in processing order.
pub trait CoverObserver {
    fn on_visit(&mut self, k: u64, b: &HyperRectangle, probe: &[f64], value: f64, h_prime: f64);
}

impl CoverObserver for () {
    fn on_visit(&mut self, _: u64, _: &HyperRectangle, _: &[f64], _: f64, _: f64) {}
}

pub fn solve_cover(problem: &Problem, cfg: &CoverConfig) -> Result<RunResult> {
    solve_cover_observed(problem, cfg, &mut ())
}

pub fn solve_cover_observed(
    problem: &Problem,
    cfg: &CoverConfig,
    observer: &mut dyn CoverObserver,
) -> Result<RunResult> {
    if let Some(0) = cfg.max_boxes {
        return Err(invalid("max_boxes must be positive"));
    }
    if let Some(s) = cfg.max_seconds {
        if !(s > 0.0) {
            return Err(invalid("max_seconds must be positive"));
        }
    }
    let modulus = problem
        .modulus()
        .clone()
        .scaled(cfg.norm.cube_inflation(problem.dim()));
    let h = base_step(cfg.eps, cfg.eta, &modulus)?;
    let l_eta = modulus.eval(cfg.eta)?;

    let start_evals = problem.eval_count();
    let domain = problem.domain();
    let corner = domain.lower().to_vec();
    let record = problem.eval(&corner);

    let mut run = CoverRun {
        problem,
        h,
        l_eta,
        record,
        record_point: corner,
        n_opt: 0,
        k: 0,
        trace: cfg.record_trace.then(Vec::new),
        observer,
        deadline: cfg.max_seconds.map(|s| (Instant::now(), s)),
        max_boxes: cfg.max_boxes,
    };

    let finished = match cfg.scheme {
        TraversalScheme::Recursive => run.run_recursive(domain.clone())?,
        scheme => run.run_list(domain.clone(), scheme)?,
    };

    Ok(RunResult {
        best_point: run.record_point,
        best_value: run.record,
        n_tot: run.k,
        n_opt: run.n_opt,
        theta: None,
        status: if finished {
            RunStatus::Converged
        } else {
            RunStatus::BudgetExceeded
        },
        iterations: run.k,
        evaluations: problem.eval_count() - start_evals,
        trace: run.trace.map(Trace::Cover),
    })
}

struct CoverRun<'a> {
    problem: &'a Problem,
    h: f64,
    l_eta: f64,
    record: f64,
    record_point: Vec<f64>,
    n_opt: u64,
    /// Boxes processed so far.
    k: u64,
    trace: Option<Vec<CoverTraceRow>>,
    observer: &'a mut dyn CoverObserver,
    deadline: Option<(Instant, f64)>,
    max_boxes: Option<u64>,
}

impl CoverRun<'_> {
    fn out_of_budget(&self) -> bool {
        if let Some(max) = self.max_boxes {
            if self.k >= max {
                return true;
            }
        }
        if let Some((start, secs)) = self.deadline {
            if self.k.is_multiple_of(1024) && start.elapsed().as_secs_f64() >= secs {
                return true;
            }
        }
        false
    }

    /// Probes `b`, updates the record and returns `h'`.
    fn visit(&mut self, b: &HyperRectangle) -> f64 {
        let x = iterate_point(b, self.h);
        let value = self.problem.eval(&x);
        let (h_prime, record) = adaptive_step(value, self.record, self.h, self.l_eta);
        self.observer.on_visit(self.k, b, &x, value, h_prime);
        self.k += 1;
        if value < self.record {
            self.n_opt = self.k;
            self.record_point = x;
        }
        self.record = record;
        h_prime
    }

    fn log(&mut self, h_prime: f64, pending: u64) {
        if let Some(trace) = self.trace.as_mut() {
            trace.push(CoverTraceRow {
                k: self.k - 1,
                h_prime,
                record: self.record,
                pending_size: pending,
            });
        }
    }

    fn run_list(&mut self, domain: HyperRectangle, scheme: TraversalScheme) -> Result<bool> {
        let mut pending = VecDeque::from([domain]);
        while let Some(b) = pending.pop_front() {
            if self.out_of_budget() {
                return Ok(false);
            }
            let h_prime = self.visit(&b);
            let children = b.corner_split(h_prime)?;
            match scheme {
                TraversalScheme::S1a => children.into_iter().for_each(|c| pending.push_front(c)),
                TraversalScheme::S1b => children
                    .into_iter()
                    .rev()
                    .for_each(|c| pending.push_front(c)),
                TraversalScheme::S2a => children
                    .into_iter()
                    .rev()
                    .for_each(|c| pending.push_back(c)),
                TraversalScheme::S2b => children.into_iter().for_each(|c| pending.push_back(c)),
                TraversalScheme::Recursive => unreachable!(),
            }
            self.log(h_prime, pending.len() as u64);
        }
        Ok(true)
    }

    /// Depth-first descent that creates each child right before processing
    /// it. The explicit frame stack stands in for the call stack.
    fn run_recursive(&mut self, domain: HyperRectangle) -> Result<bool> {
        struct Frame {
            b: HyperRectangle,
            h_prime: f64,
            next_axis: usize,
        }

        if self.out_of_budget() {
            return Ok(false);
        }
        let h_prime = self.visit(&domain);
        let mut pending = domain.corner_child_count(h_prime) as u64;
        self.log(h_prime, pending);
        let mut stack = vec![Frame {
            b: domain,
            h_prime,
            next_axis: 0,
        }];

        while let Some(top) = stack.last_mut() {
            let n = top.b.dim();
            let mut child = None;
            while top.next_axis < n && child.is_none() {
                child = top.b.corner_child(top.next_axis, top.h_prime);
                top.next_axis += 1;
            }
            let Some(child) = child else {
                stack.pop();
                continue;
            };
            if self.out_of_budget() {
                return Ok(false);
            }
            pending -= 1;
            let h_prime = self.visit(&child);
            pending += child.corner_child_count(h_prime) as u64;
            self.log(h_prime, pending);
            stack.push(Frame {
                b: child,
                h_prime,
                next_axis: 0,
            });
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfns::TestProblemId;
    use crate::vanderbei::VanderbeiModulus;
    use approx::assert_relative_eq;

    fn rect(lo: &[f64], hi: &[f64]) -> HyperRectangle {
        HyperRectangle::new(lo.to_vec(), hi.to_vec()).unwrap()
    }

    #[test]
    fn iterate_point_examples() {
        assert_eq!(
            iterate_point(&rect(&[0.0, 0.0], &[10.0, 10.0]), 2.0),
            vec![1.0, 1.0]
        );
        assert_eq!(
            iterate_point(&rect(&[0.0, 0.0], &[0.5, 10.0]), 2.0),
            vec![0.5, 1.0]
        );
        let x = iterate_point(&rect(&[-2.0, -2.0], &[12.0, 12.0]), 0.0036);
        assert_relative_eq!(x[0], -1.9982, epsilon = 1e-15);
        assert_relative_eq!(x[1], -1.9982, epsilon = 1e-15);
    }

    #[test]
    fn adaptive_step_examples() {
        let l = 12.5 / 0.45;
        let (hp, rec) = adaptive_step(-9.0, -10.0, 0.0036, l);
        assert_relative_eq!(hp, 0.0396, epsilon = 1e-15);
        assert_eq!(rec, -10.0);
        assert_eq!(adaptive_step(-10.0, -9.0, 0.0036, l), (0.0036, -10.0));
        assert_eq!(adaptive_step(-9.0, -9.0, 0.0036, l), (0.0036, -9.0));
    }

    fn flat_unit_interval() -> Problem {
        Problem::new(
            "zero",
            |_| 0.0,
            VanderbeiModulus::constant(1.0),
            rect(&[0.0], &[1.0]),
        )
    }

    #[test]
    fn constant_function_hand_trace() {
        for scheme in [
            TraversalScheme::S1a,
            TraversalScheme::S1b,
            TraversalScheme::S2a,
            TraversalScheme::S2b,
            TraversalScheme::Recursive,
        ] {
            let p = flat_unit_interval();
            let res = solve_cover(&p, &CoverConfig::new(0.5, 0.25, scheme)).unwrap();
            assert_eq!(res.best_value, 0.0);
            assert_eq!(res.n_tot, 2, "{scheme}");
            assert_eq!(res.evaluations, 3);
            assert!(res.converged());
        }
    }

    #[test]
    fn rejects_bad_eta() {
        let p = flat_unit_interval();
        assert!(solve_cover(&p, &CoverConfig::new(0.5, 0.5, TraversalScheme::S1a)).is_err());
        assert!(solve_cover(&p, &CoverConfig::new(0.5, 0.0, TraversalScheme::S1a)).is_err());
        assert!(solve_cover(&p, &CoverConfig::new(-0.5, 0.1, TraversalScheme::S1a)).is_err());
    }

    #[test]
    fn box_budget_reports_status() {
        let p = TestProblemId::F3.problem();
        let mut cfg = CoverConfig::new(0.5, 0.25, TraversalScheme::S2b);
        cfg.max_boxes = Some(10);
        let res = solve_cover(&p, &cfg).unwrap();
        assert_eq!(res.status, RunStatus::BudgetExceeded);
        assert_eq!(res.n_tot, 10);
        for scheme in [TraversalScheme::Recursive, TraversalScheme::S1a] {
            cfg.scheme = scheme;
            assert_eq!(solve_cover(&p, &cfg).unwrap().n_tot, 10);
        }
    }

    #[derive(Default)]
    struct Visits(Vec<(Vec<f64>, Vec<f64>)>);

    impl CoverObserver for Visits {
        fn on_visit(&mut self, _: u64, b: &HyperRectangle, _: &[f64], _: f64, _: f64) {
            self.0.push((b.lower().to_vec(), b.upper().to_vec()));
        }
    }

    #[test]
    fn recursive_matches_s1b_order() {
        for id in [TestProblemId::F3, TestProblemId::F4] {
            let p = id.problem();
            let mut cfg = CoverConfig::new(0.5, 0.25, TraversalScheme::S1b);
            cfg.record_trace = true;
            let mut list = Visits::default();
            let a = solve_cover_observed(&p, &cfg, &mut list).unwrap();
            cfg.scheme = TraversalScheme::Recursive;
            let mut rec = Visits::default();
            let b = solve_cover_observed(&p, &cfg, &mut rec).unwrap();
            assert_eq!(list.0, rec.0);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn record_is_running_minimum_and_children_advance() {
        struct Check {
            h: f64,
            best: f64,
            last_record: f64,
        }
        impl CoverObserver for Check {
            fn on_visit(&mut self, _: u64, b: &HyperRectangle, x: &[f64], v: f64, hp: f64) {
                assert!(hp >= self.h);
                assert!(b.contains_point(x));
                for c in b.corner_split(hp).unwrap() {
                    assert!(b.contains_box(&c));
                    let advanced =
                        (0..b.dim()).any(|i| c.lower()[i] - b.lower()[i] >= hp * (1.0 - 1e-12));
                    assert!(advanced);
                }
                let before = self.best;
                self.best = self.best.min(v);
                assert!(self.best <= before);
                self.last_record = self.best;
            }
        }
        let p = TestProblemId::F4.problem();
        let cfg = CoverConfig::new(0.5, 0.25, TraversalScheme::S1a);
        let h = base_step(0.5, 0.25, p.modulus()).unwrap();
        let f_a = TestProblemId::F4.evaluate(p.domain().lower()).unwrap();
        let mut check = Check {
            h,
            best: f_a,
            last_record: f_a,
        };
        let res = solve_cover_observed(&p, &cfg, &mut check).unwrap();
        assert_eq!(res.best_value, check.last_record);
        assert_eq!(
            TestProblemId::F4.evaluate(&res.best_point).unwrap(),
            res.best_value
        );
    }

    #[test]
    fn trace_record_non_increasing() {
        let p = TestProblemId::F3.problem();
        let mut cfg = CoverConfig::new(0.5, 0.25, TraversalScheme::S2b);
        cfg.record_trace = true;
        let res = solve_cover(&p, &cfg).unwrap();
        let Some(Trace::Cover(rows)) = res.trace else {
            panic!("no trace")
        };
        assert_eq!(rows.len() as u64, res.n_tot);
        assert!(rows.windows(2).all(|w| w[1].record <= w[0].record));
        assert_eq!(rows.last().unwrap().pending_size, 0);
    }

    #[test]
    fn euclidean_norm_shrinks_steps() {
        let p = TestProblemId::F3.problem();
        let mut cfg = CoverConfig::new(0.5, 0.25, TraversalScheme::S2b);
        let loose = solve_cover(&p, &cfg).unwrap();
        cfg.norm = CoveringNorm::Manhattan;
        let tight = solve_cover(&p, &cfg).unwrap();
        assert!(tight.n_tot > loose.n_tot);
    }
}
