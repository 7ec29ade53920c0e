//! Probability primitives: normal and scaled chi-squared laws, kernel
//! density estimation, seeded random streams and quadrature.
//!
//! All densities are evaluated in log space; callers combine them by
//! subtracting log densities and exponentiating the difference.

mod chisq;
mod kde;
mod ks;
mod normal;
mod quad;
mod rng;

pub use chisq::ScaledChiSq1;
pub use kde::Kde1D;
pub use ks::{ks_critical_value, ks_statistic, ks_two_sample, ks_two_sample_critical_value};
pub use normal::{BivariateNormalLaw, NormalLaw};
pub use quad::simpson;
pub use rng::RngStream;

pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;
