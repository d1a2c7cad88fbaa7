//! Grid sweeps over q, P_max (dB), or rate, written as CSV.
//!
//! Schema: `x,eps,pt,outage,q_star,outage_star`. The optimizer columns are
//! filled for P_max and rate sweeps; q sweeps evaluate the model directly
//! and leave them empty. Floats carry 17 significant digits; rows that hit
//! an infeasible optimization are marked `infeasible`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use cipc_core::model::outage_probability;
use cipc_core::optimizer::optimize_q;
use cipc_core::{Error as CoreError, SystemConfig};

use crate::CliError;

#[derive(Clone, Copy)]
pub enum SweepVariable {
    Q,
    PmaxDb,
    Rate,
}

pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub log_scale: bool,
    pub base_cfg: SystemConfig,
    pub tol: f64,
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn grid(spec: &SweepSpec) -> Result<Vec<f64>, CliError> {
    if !(spec.start < spec.stop) {
        return Err(CliError::Usage(format!(
            "sweep start must be below stop, got [{}, {}]",
            spec.start, spec.stop
        )));
    }
    if spec.points < 2 {
        return Err(CliError::Usage("sweep needs at least 2 points".into()));
    }
    if spec.log_scale && spec.start <= 0.0 {
        return Err(CliError::Usage("log scale requires a positive start".into()));
    }
    let n = spec.points;
    Ok((0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            if spec.log_scale {
                spec.start * (spec.stop / spec.start).powf(f)
            } else {
                spec.start + (spec.stop - spec.start) * f
            }
        })
        .collect())
}

fn row_for_config(cfg: &SystemConfig, x: f64, tol: f64) -> Result<String, CliError> {
    match optimize_q(cfg, tol) {
        Ok(res) => {
            let b = outage_probability(cfg, res.q_star)?;
            Ok(format!(
                "{},{},{},{},{},{}",
                fmt(x),
                fmt(b.eps.value()),
                fmt(b.pt.value()),
                fmt(b.outage.value()),
                fmt(res.q_star),
                fmt(res.outage_star.value())
            ))
        }
        Err(CoreError::Infeasible(_)) => Ok(format!("{},,,,infeasible,infeasible", fmt(x))),
        Err(e) => Err(e.into()),
    }
}

pub fn run_sweep(spec: &SweepSpec, out_path: &Path) -> Result<(), CliError> {
    let xs = grid(spec)?;
    let mut rows = Vec::with_capacity(xs.len());
    for &x in &xs {
        let row = match spec.variable {
            SweepVariable::Q => {
                let b = outage_probability(&spec.base_cfg, x)?;
                format!(
                    "{},{},{},{},,",
                    fmt(x),
                    fmt(b.eps.value()),
                    fmt(b.pt.value()),
                    fmt(b.outage.value())
                )
            }
            SweepVariable::PmaxDb => {
                let mut cfg = spec.base_cfg;
                cfg.p_max = 10f64.powf(x / 10.0);
                row_for_config(&cfg, x, spec.tol)?
            }
            SweepVariable::Rate => {
                let mut cfg = spec.base_cfg;
                cfg.rate = x;
                row_for_config(&cfg, x, spec.tol)?
            }
        };
        rows.push(row);
    }

    let mut w = BufWriter::new(File::create(out_path)?);
    w.write_all(b"x,eps,pt,outage,q_star,outage_star\n")?;
    for row in rows {
        w.write_all(row.as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}
