//! Outage analysis for truncated channel-inversion power control (CIPC) in
//! the finite blocklength regime.
//!
//! A transmitter with `n_t` antennas inverts the Rayleigh MISO channel so the
//! receiver sees a constant power `Q`, skipping transmission whenever the
//! required power would exceed `p_max`. The crate provides:
//!
//! - [`model`]: the closed-form outage probability, its factors, and the
//!   analytic derivatives that certify convexity of the outage in `Q` on
//!   `(Q0, p_max * (n_t - 1))`;
//! - [`optimizer`]: minimization of the outage over `Q` under the rate
//!   constraint, golden-section on the certified interval with a grid
//!   fallback elsewhere;
//! - [`montecarlo`]: a reproducible channel-level simulator used as a
//!   stochastic cross-check of the closed form;
//! - [`specfun`]: the scalar special functions the rest builds on.

pub mod error;
pub mod model;
pub mod montecarlo;
pub mod optimizer;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{ConvexInterval, OutageBreakdown, SystemConfig};
pub use montecarlo::{McConfig, McEstimate};
pub use optimizer::{Method, OptimizationResult};
pub use specfun::Probability;
