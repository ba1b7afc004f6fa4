//! JSON results and CSV traces.
//!
//! Floats are written with 17 significant digits so that repeated runs can be
//! compared byte for byte.

use std::io::Write;
use std::str::FromStr;

use anyhow::Result;
use serde_json::{json, Map, Number, Value};
use vancover::{RunResult, Trace};

use crate::config::{Settings, SolverSettings};

/// Fixed-precision decimal form; non-finite values become `inf`, `-inf` or `nan`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&fmt_f64(x)).expect("formatted float is a JSON number"))
    } else {
        Value::String(fmt_f64(x))
    }
}

fn point(x: &[f64]) -> Value {
    Value::Array(x.iter().map(|&v| num(v)).collect())
}

pub fn params_json(settings: &Settings) -> Value {
    let mut m = Map::new();
    match &settings.solver {
        SolverSettings::Cover(c) => {
            m.insert("eps".into(), num(c.eps));
            m.insert("eta".into(), num(c.eta));
            m.insert("scheme".into(), c.scheme.name().into());
            m.insert("norm".into(), c.norm.name().into());
            m.insert("max_boxes".into(), c.max_boxes.into());
            m.insert("max_seconds".into(), c.max_seconds.map_or(Value::Null, num));
        }
        SolverSettings::Bnb(c) => {
            m.insert("eps".into(), num(c.eps));
            m.insert("beta".into(), num(c.beta));
            m.insert("gamma".into(), num(c.gamma));
            m.insert("norm".into(), c.norm.name().into());
            m.insert("max_iterations".into(), c.max_iterations.into());
        }
    }
    Value::Object(m)
}

pub fn result_json(settings: &Settings, result: &RunResult, wall_time_s: f64) -> Value {
    json!({
        "problem": settings.problem.name(),
        "algorithm": settings.algorithm().name(),
        "params": params_json(settings),
        "F": num(result.best_value),
        "x": point(&result.best_point),
        "N_tot": result.n_tot,
        "N_opt": result.n_opt,
        "theta": result.theta.map_or(Value::Null, num),
        "status": result.status.as_str(),
        "wall_time_s": num(wall_time_s),
    })
}

pub const COVER_TRACE_HEADER: [&str; 4] = ["k", "h_prime", "F_k", "pending_size"];
pub const BNB_TRACE_HEADER: [&str; 5] = ["k", "r_k", "op", "F_k", "mu_k"];
pub const SWEEP_HEADER: [&str; 6] = ["value", "F", "N_tot", "N_opt", "theta", "status"];

pub fn write_trace<W: Write>(out: W, trace: &Trace) -> Result<()> {
    let mut w = csv_writer(out);
    match trace {
        Trace::Cover(rows) => {
            w.write_record(COVER_TRACE_HEADER)?;
            for r in rows {
                w.write_record([
                    r.k.to_string(),
                    fmt_f64(r.h_prime),
                    fmt_f64(r.record),
                    r.pending_size.to_string(),
                ])?;
            }
        }
        Trace::Bnb(rows) => {
            w.write_record(BNB_TRACE_HEADER)?;
            for r in rows {
                w.write_record([
                    r.k.to_string(),
                    fmt_f64(r.r_k),
                    r.op.as_str().to_string(),
                    fmt_f64(r.record),
                    fmt_f64(r.covered_volume),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}
