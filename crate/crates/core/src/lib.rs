//! Exact and score-based likelihood-ratio models for source inference.
//!
//! The crate provides:
//!
//! - [`stats`]: normal and scaled (non)central chi-squared laws, kernel
//!   density estimation and seeded random streams, all in log space;
//! - [`generative`]: the common-source and specific-source generative models
//!   together with hierarchical samplers;
//! - [`lr`]: exact likelihood ratios for both scenarios and for the
//!   two-suspect problem;
//! - [`slr`]: the family of score-based likelihood-ratio models for the
//!   squared-difference score, plus a tail-probability ratio;
//! - [`empirical`]: thought-experiment score sampling and KDE-based
//!   empirical score ratios;
//! - [`experiments`]: seeded simulation harnesses, the incoherence search,
//!   the projection demonstration and CSV serialization.

pub mod empirical;
pub mod error;
pub mod experiments;
pub mod generative;
pub mod lr;
pub mod slr;
pub mod stats;

pub use error::{Error, Result};
pub use experiments::{Comparison, ConfigRun, ExperimentConfig, ExperimentRecord};
pub use generative::{
    CommonSourceParams, EvidencePair, Hypothesis, ModelParams, Scenario, SourceLabel,
    SpecificSourceParams, TwoSuspectHypothesis, TwoSuspectParams,
};
pub use lr::{LrResult, ModelTag};
pub use slr::{Anchoring, ScoreFunction, SlrContext};
pub use stats::{BivariateNormalLaw, Kde1D, NormalLaw, RngStream, ScaledChiSq1};
