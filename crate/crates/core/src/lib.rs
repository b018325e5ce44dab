//! Monte Carlo laboratory for fractional Brownian motion.
//!
//! The crate samples FBM exactly (FFT circulant embedding, with a dense
//! Cholesky oracle for cross-validation) and estimates the statistics whose
//! decay rates are governed by the Hurst index:
//!
//! - survival probabilities `P(X_t ≤ f(t), t ≤ T)` under constant and
//!   log-power moving boundaries, with survival-exponent fits,
//! - moments of the steady-state currents `J_N` and `J_T` (reciprocals of
//!   exponential sums/integrals of the path),
//! - small-value probabilities of extremal path functionals on `[0, 1]`
//!   (argmax location, last zero, time spent positive) and the Laplace
//!   transform of the running maximum,
//!
//! together with the closed-form Brownian oracles (reflection principle,
//! arcsine laws) used to validate all of the above at `H = 1/2`.

pub mod boundaries;
pub mod current;
pub mod error;
pub mod estimators;
pub mod functionals;
pub mod numerics;
pub mod persistence;
pub mod sampler;

pub use error::{Error, Result};
