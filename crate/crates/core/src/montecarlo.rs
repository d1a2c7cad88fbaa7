//! Channel-level Monte Carlo cross-check of the closed-form outage.
//!
//! Each trial draws a Rayleigh MISO channel gain, applies the truncated
//! power-control rule, and (when transmitting) draws the decode outcome as
//! Bernoulli with the fixed-SNR decoding error probability. Per-trial RNG
//! streams are derived from `(seed, trial index)`, so the estimate is
//! bit-identical regardless of how trials are sharded across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{decoding_error, SystemConfig};
use crate::specfun::Probability;

/// One simulation request.
#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub cfg: SystemConfig,
    /// Agreed receive power under test.
    pub q: f64,
}

/// Empirical transmit and outage rates with binomial standard errors.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct McEstimate {
    pub p_transmit_hat: Probability,
    pub outage_hat: Probability,
    pub std_err_pt: f64,
    pub std_err_outage: f64,
    pub trials: u64,
    pub seed: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Independent RNG stream for one trial, a pure function of (seed, trial).
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(trial)))
}

/// Draws `||h||^2` for an `n_t`-antenna Rayleigh channel: the sum of `n_t`
/// unit-mean exponentials, i.e. Gamma(n_t, 1). Each antenna's `|h_i|^2` is
/// exponential; the phases never enter because the beamformer cancels them.
pub fn sample_channel_gain(n_t: u32, rng: &mut impl Rng) -> f64 {
    (0..n_t).map(|_| rng.sample::<f64, _>(Exp1)).sum()
}

/// The truncated power-control rule: invert the channel when the gain clears
/// the threshold `q / p_max` (boundary included), stay silent otherwise.
/// When transmitting, `power * gain == q` and `power <= p_max`.
pub fn apply_truncated_cipc(cfg: &SystemConfig, q: f64, gain: f64) -> (bool, f64) {
    let threshold = q / cfg.p_max;
    if gain >= threshold {
        (true, q / gain)
    } else {
        (false, 0.0)
    }
}

/// Runs the simulation and reports empirical transmit and outage rates.
///
/// Reproducible from `(seed, trials)`; trials are sharded across threads
/// with the counts combined exactly, so thread count never changes the
/// result.
pub fn estimate(mc: &McConfig) -> Result<McEstimate> {
    if mc.trials < 1 {
        return Err(Error::Domain("trials must be >= 1".into()));
    }
    let eps = decoding_error(&mc.cfg, mc.q)?.value();
    let n_t = mc.cfg.n_t;
    let cfg = mc.cfg;
    let q = mc.q;
    let seed = mc.seed;

    let (tx_count, outage_count) = (0..mc.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let gain = sample_channel_gain(n_t, &mut rng);
            let (transmit, _power) = apply_truncated_cipc(&cfg, q, gain);
            if transmit {
                let u: f64 = rng.random();
                (1u64, u64::from(u < eps))
            } else {
                (0u64, 1u64)
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));

    let n = mc.trials as f64;
    let p_hat = tx_count as f64 / n;
    let o_hat = outage_count as f64 / n;
    Ok(McEstimate {
        p_transmit_hat: Probability::new(p_hat)?,
        outage_hat: Probability::new(o_hat)?,
        std_err_pt: (p_hat * (1.0 - p_hat) / n).sqrt(),
        std_err_outage: (o_hat * (1.0 - o_hat) / n).sqrt(),
        trials: mc.trials,
        seed: mc.seed,
    })
}
