//! Brute-force lattice minimization, used to check solver output.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::vanderbei::Problem;

/// Total lattice points a single oracle run may evaluate.
pub const MAX_POINTS: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub grid_resolution: usize,
}

/// Minimum of the objective over a uniform `resolution^n` lattice that
/// includes the domain bounds, plus the domain center and the origin (when
/// inside the domain).
///
/// Rows of the lattice are evaluated in parallel; ties are resolved towards
/// the lexicographically smallest point, so the result does not depend on
/// the worker count.
pub fn grid_min(problem: &Problem, resolution: usize) -> Result<OracleResult> {
    if resolution < 2 {
        return Err(invalid(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let domain = problem.domain();
    let n = domain.dim();
    let total = (resolution as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if total > MAX_POINTS {
        return Err(invalid(format!(
            "{resolution}^{n} lattice points exceed the limit of {MAX_POINTS}"
        )));
    }

    let coord = |axis: usize, i: usize| -> f64 {
        if i + 1 == resolution {
            domain.upper()[axis]
        } else {
            let t = i as f64 / (resolution - 1) as f64;
            domain.lower()[axis] + t * domain.width(axis)
        }
    };

    // Parallel over the first axis; each worker walks the remaining axes.
    let inner_count = (total / resolution as u128) as usize;
    let best = (0..resolution)
        .into_par_iter()
        .map(|i0| {
            let mut best: Option<(f64, Vec<f64>)> = None;
            let mut x = vec![0.0; n];
            x[0] = coord(0, i0);
            for flat in 0..inner_count {
                let mut rem = flat;
                for axis in (1..n).rev() {
                    x[axis] = coord(axis, rem % resolution);
                    rem /= resolution;
                }
                let v = problem.eval(&x);
                best = pick(best, v, &x);
            }
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, other) | (other, None) => other,
                (Some((va, xa)), Some((vb, xb))) => pick(Some((va, xa)), vb, &xb),
            },
        );

    let mut best = best;
    let center = domain.center();
    let v = problem.eval(&center);
    best = pick(best, v, &center);
    let origin = vec![0.0; n];
    if domain.contains_point(&origin) {
        let v = problem.eval(&origin);
        best = pick(best, v, &origin);
    }

    let (best_value, best_point) = best.expect("lattice has at least one point");
    Ok(OracleResult {
        best_point,
        best_value,
        grid_resolution: resolution,
    })
}

fn pick(best: Option<(f64, Vec<f64>)>, v: f64, x: &[f64]) -> Option<(f64, Vec<f64>)> {
    match best {
        None => Some((v, x.to_vec())),
        Some((bv, bx)) => {
            let better = v < bv || (v == bv && lex_less(x, &bx));
            if better {
                Some((v, x.to_vec()))
            } else {
                Some((bv, bx))
            }
        }
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    a.iter()
        .zip(b)
        .find(|(x, y)| x != y)
        .is_some_and(|(x, y)| x < y)
}

/// Whether `found` lies in `[oracle - slack, oracle + eps + slack]`.
pub fn verify_eps_optimal(found: f64, oracle: f64, eps: f64, slack: f64) -> bool {
    oracle - slack <= found && found <= oracle + eps + slack
}

/// Lattice cell diagonal, the spacing between neighboring oracle points.
pub fn cell_diagonal(problem: &Problem, resolution: usize) -> f64 {
    let d = problem.domain();
    (0..d.dim())
        .map(|i| (d.width(i) / (resolution - 1) as f64).powi(2))
        .sum::<f64>()
        .sqrt()
}
