//! Analytic outage model for truncated CIPC under finite blocklength.
//!
//! All operations are pure functions of the system configuration and the
//! agreed receive power `q`. The derivative and convexity operations are
//! stated for unit noise variance only and reject other configurations
//! rather than extrapolating the formulas.

use serde::Serialize;
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::specfun::{gamma_factorial, gaussian_q, lower_gamma_regularized, Probability};

/// One link scenario: antennas, blocklength, rate, peak power, noise power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemConfig {
    /// Transmit antenna count.
    pub n_t: u32,
    /// Blocklength in channel uses.
    pub blocklength: u32,
    /// Transmission rate in bits per channel use.
    pub rate: f64,
    /// Maximum transmit power, linear.
    pub p_max: f64,
    /// Noise variance at the receiver.
    pub noise_var: f64,
}

impl SystemConfig {
    pub fn new(n_t: u32, blocklength: u32, rate: f64, p_max: f64, noise_var: f64) -> Result<Self> {
        if n_t < 1 {
            return Err(Error::Domain("n_t must be >= 1".into()));
        }
        if blocklength < 1 {
            return Err(Error::Domain("blocklength must be >= 1".into()));
        }
        if !(rate > 0.0) || !rate.is_finite() {
            return Err(Error::Domain(format!("rate must be positive, got {rate}")));
        }
        if !(p_max > 0.0) || !p_max.is_finite() {
            return Err(Error::Domain(format!("p_max must be positive, got {p_max}")));
        }
        if !(noise_var > 0.0) || !noise_var.is_finite() {
            return Err(Error::Domain(format!(
                "noise_var must be positive, got {noise_var}"
            )));
        }
        Ok(Self { n_t, blocklength, rate, p_max, noise_var })
    }

    /// Configuration with the default unit noise variance.
    pub fn with_unit_noise(n_t: u32, blocklength: u32, rate: f64, p_max: f64) -> Result<Self> {
        Self::new(n_t, blocklength, rate, p_max, 1.0)
    }

    /// Smallest `q` satisfying the rate constraint
    /// `rate <= log2(1 + q / noise_var)`, i.e. `noise_var * (2^rate - 1)`.
    pub fn q_rate(&self) -> f64 {
        self.noise_var * (self.rate.exp2() - 1.0)
    }

    /// SNR at the receiver for agreed power `q`.
    pub fn snr(&self, q: f64) -> f64 {
        q / self.noise_var
    }

    fn require_unit_noise(&self, what: &str) -> Result<()> {
        if self.noise_var != 1.0 {
            return Err(Error::UnsupportedConfig(format!(
                "{what} is only defined for noise_var = 1 (got {})",
                self.noise_var
            )));
        }
        Ok(())
    }
}

/// Full evaluation of the outage probability at one `q`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OutageBreakdown {
    /// Agreed receive power.
    pub q: f64,
    /// SNR `q / noise_var`.
    pub snr: f64,
    /// Finite-blocklength decoding error probability.
    pub eps: Probability,
    /// Probability that the transmit power is nonzero.
    pub pt: Probability,
    /// Overall outage `eps * pt + (1 - pt)`.
    pub outage: Probability,
    /// Whether `rate <= log2(1 + snr)`.
    pub rate_feasible: bool,
    /// Set when `eps` underflowed below the representable range and was
    /// clamped to 0.
    pub eps_underflowed: bool,
}

/// Interval of `q` on which the outage is certified convex.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvexInterval {
    /// Root of `ln(1+q) / ((1+q)^2 - 1) = 1/3`.
    pub q0: f64,
    /// Rate-constraint bound `noise_var * (2^rate - 1)`.
    pub q_rate: f64,
    /// `max(q0, q_rate)`.
    pub lo: f64,
    /// `p_max * (n_t - 1)`.
    pub hi: f64,
    /// `lo < hi`.
    pub nonempty: bool,
}

/// Normal-approximation argument `A(q)` and the underflow-aware decoding
/// error. Valid for any noise variance.
fn normal_arg(cfg: &SystemConfig, q: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!(
            "decoding error requires q > 0, got {q}"
        )));
    }
    let gamma = cfg.snr(q);
    let x = 1.0 + gamma;
    // sqrt(1 - 1/x^2) via gamma*(gamma+2)/x^2 to keep precision near gamma=0.
    let disp = (gamma * (gamma + 2.0)).sqrt() / x;
    Ok(f64::from(cfg.blocklength).sqrt() * (x.ln() - cfg.rate * LN_2) / disp)
}

pub(crate) fn decoding_error_flagged(cfg: &SystemConfig, q: f64) -> Result<(Probability, bool)> {
    let a = normal_arg(cfg, q)?;
    let eps = gaussian_q(a)?;
    let underflowed = a > 0.0 && eps.value() == 0.0;
    Ok((eps, underflowed))
}

/// Decoding error probability `eps(q)` in the finite blocklength regime.
///
/// Total in `q > 0`: for rate-infeasible `q` the value exceeds 1/2 rather
/// than erroring, so sweeps may cross the feasibility boundary.
pub fn decoding_error(cfg: &SystemConfig, q: f64) -> Result<Probability> {
    Ok(decoding_error_flagged(cfg, q)?.0)
}

/// Probability `q / gain <= p_max` of the channel gain clearing the
/// truncation threshold, `1 - P(n_t, q / p_max)`.
pub fn transmit_probability(cfg: &SystemConfig, q: f64) -> Result<Probability> {
    Ok(truncation_probability(cfg, q)?.complement())
}

/// Complement `1 - p_t(q) = P(n_t, q / p_max)`, kept separate so tiny
/// truncation probabilities retain full relative precision.
pub(crate) fn truncation_probability(cfg: &SystemConfig, q: f64) -> Result<Probability> {
    if !(q >= 0.0) {
        return Err(Error::Domain(format!(
            "transmit probability requires q >= 0, got {q}"
        )));
    }
    lower_gamma_regularized(cfg.n_t, q / cfg.p_max)
}

/// Overall transmission outage probability and its factors at one `q`.
pub fn outage_probability(cfg: &SystemConfig, q: f64) -> Result<OutageBreakdown> {
    let (eps, eps_underflowed) = decoding_error_flagged(cfg, q)?;
    let p_trunc = truncation_probability(cfg, q)?;
    let e = eps.value();
    let p = p_trunc.value();
    // eps*pt + (1 - pt) assembled as eps + (1-eps)*(1-pt) so the result keeps
    // relative precision when both factors are tiny.
    let outage = Probability::new((e + (1.0 - e) * p).clamp(0.0, 1.0))?;
    let snr = cfg.snr(q);
    Ok(OutageBreakdown {
        q,
        snr,
        eps,
        pt: p_trunc.complement(),
        outage,
        rate_feasible: cfg.rate <= (1.0 + snr).log2(),
        eps_underflowed,
    })
}

/// `A(q)`, the argument of the Q-function in the decoding error, under unit
/// noise variance.
pub fn a_of_q(cfg: &SystemConfig, q: f64) -> Result<f64> {
    cfg.require_unit_noise("a_of_q")?;
    normal_arg(cfg, q)
}

/// First derivative of `A(q)`:
/// `sqrt(T) [1 - (ln(1+q) - R ln 2) / ((1+q)^2 - 1)] / sqrt((1+q)^2 - 1)`.
pub fn da_dq(cfg: &SystemConfig, q: f64) -> Result<f64> {
    cfg.require_unit_noise("da_dq")?;
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("da_dq requires q > 0, got {q}")));
    }
    let x = 1.0 + q;
    let m = q * (q + 2.0); // (1+q)^2 - 1
    let l = x.ln() - cfg.rate * LN_2;
    Ok(f64::from(cfg.blocklength).sqrt() * (1.0 - l / m) / m.sqrt())
}

/// Second derivative of `A(q)`, the four-term bracket scaled by
/// `sqrt(T) / (1+q)`.
pub fn d2a_dq2(cfg: &SystemConfig, q: f64) -> Result<f64> {
    cfg.require_unit_noise("d2a_dq2")?;
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("d2a_dq2 requires q > 0, got {q}")));
    }
    let x = 1.0 + q;
    let m = q * (q + 2.0);
    let s = m.sqrt();
    let l = x.ln() - cfg.rate * LN_2;
    let bracket = 3.0 * l / (s * s * s * s * s) + 3.0 * l / (s * s * s)
        - 2.0 / (s * s * s)
        - 1.0 / s;
    Ok(f64::from(cfg.blocklength).sqrt() / x * bracket)
}

/// First derivative of the transmit probability,
/// `-e^{-q/p_max} (q/p_max)^{n_t-1} / (p_max Γ(n_t))`; strictly negative.
pub fn d_pt_dq(cfg: &SystemConfig, q: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("d_pt_dq requires q > 0, got {q}")));
    }
    let u = q / cfg.p_max;
    let g = gamma_factorial(cfg.n_t)?;
    Ok(-(-u).exp() * u.powi(cfg.n_t as i32 - 1) / (cfg.p_max * g))
}

/// Second derivative of the transmit probability; changes sign at
/// `q = p_max * (n_t - 1)`.
pub fn d2_pt_dq2(cfg: &SystemConfig, q: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::Domain(format!("d2_pt_dq2 requires q > 0, got {q}")));
    }
    let u = q / cfg.p_max;
    let g = gamma_factorial(cfg.n_t)?;
    let knee = u - f64::from(cfg.n_t - 1);
    Ok((-u).exp() * u.powi(cfg.n_t as i32 - 2) * knee / (cfg.p_max * cfg.p_max * g))
}

/// First derivative of the decoding error,
/// `-(1/sqrt(2π)) exp(-A^2/2) dA/dq`; negative everywhere.
pub fn d_eps_dq(cfg: &SystemConfig, q: f64) -> Result<f64> {
    let a = a_of_q(cfg, q)?;
    let da = da_dq(cfg, q)?;
    Ok(-(-0.5 * a * a).exp() / (2.0 * PI).sqrt() * da)
}

/// Second derivative of the decoding error,
/// `φ(A) [A (dA/dq)^2 - d2A/dq2]`; positive for `q > Q0` with `A(q) > 0`.
pub fn d2_eps_dq2(cfg: &SystemConfig, q: f64) -> Result<f64> {
    let a = a_of_q(cfg, q)?;
    let da = da_dq(cfg, q)?;
    let d2a = d2a_dq2(cfg, q)?;
    let phi = (-0.5 * a * a).exp() / (2.0 * PI).sqrt();
    Ok(phi * (a * da * da - d2a))
}

/// `G(x) = ln(x) / (x^2 - 1)` for `x > 1`; strictly decreasing from 1/2
/// toward 0.
pub fn g_aux(x: f64) -> Result<f64> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("g_aux requires x > 1, got {x}")));
    }
    let q = x - 1.0;
    Ok(x.ln() / (q * (q + 2.0)))
}

/// Root `Q0` of `G(1 + q) = 1/3`, the lower edge of the certified convexity
/// interval. Bisection on `[1e-6, 2]` followed by Newton polishing.
pub fn solve_q0() -> f64 {
    // h(q) = 3 ln(1+q) - ((1+q)^2 - 1); positive below the root (G > 1/3),
    // negative above, single sign change since G is strictly decreasing.
    let h = |q: f64| 3.0 * (1.0 + q).ln() - q * (q + 2.0);
    let mut lo = 1e-6;
    let mut hi = 2.0;
    debug_assert!(h(lo) > 0.0 && h(hi) < 0.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut q = 0.5 * (lo + hi);
    for _ in 0..3 {
        let x = 1.0 + q;
        let dh = 3.0 / x - 2.0 * x;
        q -= h(q) / dh;
    }
    q
}

/// The Lemma-certified convexity interval
/// `(max(Q0, q_rate), p_max * (n_t - 1))` for a unit-noise configuration.
pub fn convex_interval(cfg: &SystemConfig) -> Result<ConvexInterval> {
    cfg.require_unit_noise("convex_interval")?;
    let q0 = solve_q0();
    let q_rate = cfg.q_rate();
    let lo = q0.max(q_rate);
    let hi = cfg.p_max * f64::from(cfg.n_t - 1);
    Ok(ConvexInterval { q0, q_rate, lo, hi, nonempty: lo < hi })
}

/// Transmit probability at the knee `q = p_max * (n_t - 1)`, which cancels
/// `p_max` and leaves `1 - P(n_t, n_t - 1)`.
pub fn pt_at_knee(n_t: u32) -> Result<Probability> {
    if n_t < 2 {
        return Err(Error::Domain(format!("pt_at_knee requires n_t >= 2, got {n_t}")));
    }
    Ok(lower_gamma_regularized(n_t, f64::from(n_t - 1))?.complement())
}
