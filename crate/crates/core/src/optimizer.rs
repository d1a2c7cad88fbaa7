//! Minimization of the outage probability over the agreed receive power.
//!
//! On a nonempty certified-convex interval the outage is unimodal, so a
//! golden-section search converges without derivatives and is robust to the
//! flat plateaus where the decoding error underflows. A cheap grid probe of
//! `[q_rate, Q0]` guards against a minimizer below the certified interval,
//! and a logarithmic grid search covers configurations with an empty
//! interval.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{convex_interval, outage_probability, ConvexInterval, SystemConfig};
use crate::specfun::Probability;

/// Default tolerance on the argument `q`.
pub const DEFAULT_TOL: f64 = 1e-10;

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2
const FALLBACK_GRID_POINTS: usize = 10_000;
const PROBE_GRID_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Golden-section search on the certified-convex interval.
    CertifiedConvex,
    /// Logarithmic grid search when the interval is empty.
    GridFallback,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OptimizationResult {
    /// Minimizing receive power.
    pub q_star: f64,
    /// Outage at `q_star`.
    pub outage_star: Probability,
    /// The certified interval for the configuration.
    pub interval: ConvexInterval,
    pub method: Method,
    /// Number of outage evaluations spent.
    pub evaluations: usize,
    /// Final bracket width (golden section) or grid step (fallback).
    pub bracket_width: f64,
}

fn outage_value(cfg: &SystemConfig, q: f64) -> f64 {
    outage_probability(cfg, q)
        .expect("search ranges stay within q > 0")
        .outage
        .value()
}

/// Golden-section minimization on `[a, b]`, shrinking the bracket by the
/// golden ratio each iteration until its width is at most `tol`.
fn golden_section(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tol: f64,
    evals: &mut usize,
) -> (f64, f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    *evals += 2;
    // The bracket cannot shrink below the float spacing of its endpoints;
    // widen the stopping width accordingly so huge intervals still terminate.
    while b - a > tol + 4.0 * f64::EPSILON * b.abs() {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        *evals += 1;
    }
    let (x, fx) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    (x, fx, b - a)
}

/// Solves `min_q P_eps(q)` subject to the rate constraint for a unit-noise
/// configuration. `tol` is a tolerance on `q`, not on the outage.
pub fn optimize_q(cfg: &SystemConfig, tol: f64) -> Result<OptimizationResult> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let interval = convex_interval(cfg)?;
    let f = |q: f64| outage_value(cfg, q);
    let mut evals = 0usize;

    if interval.nonempty {
        // The interval is open at hi; back off by a relative epsilon.
        let hi_eval = interval.hi * (1.0 - 1e-12);
        let (mut q_star, mut best, bracket_width) =
            golden_section(f, interval.lo, hi_eval, tol, &mut evals);

        // Lemma coverage stops at Q0; probe [q_rate, Q0] in case the global
        // minimum sits below the certified interval.
        if interval.q_rate < interval.q0 {
            let lo = interval.q_rate.max(1e-300);
            let step = (interval.q0 - lo) / (PROBE_GRID_POINTS as f64 - 1.0);
            for i in 0..PROBE_GRID_POINTS {
                let q = lo + step * i as f64;
                if q <= 0.0 {
                    continue;
                }
                let v = f(q);
                evals += 1;
                if v < best {
                    best = v;
                    q_star = q;
                }
            }
        }

        return Ok(OptimizationResult {
            q_star,
            outage_star: outage_probability(cfg, q_star)?.outage,
            interval,
            method: Method::CertifiedConvex,
            evaluations: evals,
            bracket_width,
        });
    }

    // Empty certified interval: logarithmic grid.
    let lo = interval.q_rate;
    let hi = (10.0 * interval.q_rate).max(100.0 * cfg.p_max);
    if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
        return Err(Error::Infeasible(format!(
            "no searchable q range for n_t={} (grid [{lo}, {hi}])",
            cfg.n_t
        )));
    }
    let ratio = (hi / lo).ln() / (FALLBACK_GRID_POINTS as f64 - 1.0);
    let mut q_star = lo;
    let mut best = f64::INFINITY;
    for i in 0..FALLBACK_GRID_POINTS {
        let q = lo * (ratio * i as f64).exp();
        let v = f(q);
        evals += 1;
        if v < best {
            best = v;
            q_star = q;
        }
    }
    Ok(OptimizationResult {
        q_star,
        outage_star: outage_probability(cfg, q_star)?.outage,
        interval,
        method: Method::GridFallback,
        evaluations: evals,
        bracket_width: q_star * (ratio.exp() - 1.0),
    })
}

/// Elementwise [`optimize_q`] over a batch of configurations. Elements are
/// evaluated concurrently; results come back in input order. A failing
/// element reports its index.
pub fn sweep_optimal(cfgs: &[SystemConfig], tol: f64) -> Result<Vec<OptimizationResult>> {
    if cfgs.is_empty() {
        return Err(Error::Domain("sweep_optimal requires a nonempty list".into()));
    }
    cfgs.par_iter()
        .enumerate()
        .map(|(i, cfg)| {
            optimize_q(cfg, tol).map_err(|e| match e {
                Error::Domain(m) => Error::Domain(format!("index {i}: {m}")),
                Error::UnsupportedConfig(m) => {
                    Error::UnsupportedConfig(format!("index {i}: {m}"))
                }
                Error::Infeasible(m) => Error::Infeasible(format!("index {i}: {m}")),
            })
        })
        .collect()
}
