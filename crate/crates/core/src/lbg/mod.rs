//! The Latent Bernoulli-Gauss mixture.
//!
//! A document `d = (m_1, ..., m_n)` of non-negative word weights is drawn
//! from one of `k` topics. Each word is either a keyword of the document
//! (its weight follows a topic-specific Gaussian) or not (it follows a
//! single topic-unspecific "cross" Gaussian); keyword selection is a
//! Bernoulli draw with per-topic probabilities `p_si`.

pub(crate) mod density;
mod em;
mod fit;
mod keywords;
mod params;
mod posterior;

pub use density::log_density_given_topic;
pub use em::{
    e_step, e_step_with_loglik, estimate_cross_gaussians, m_step, observed_loglik, MStepReport,
    DEGENERATE_MASS,
};
pub use fit::{fit, FitConfig, FitResult, FitTrace, IterationRecord, StopReason, TraceEvent};
pub use keywords::{
    claim1_residual, claim1_sides, expected_keywords, stopping_residual, update_indicators,
    update_q, IndicatorMatrix,
};
pub use params::{ModelParams, DEFAULT_PROB_CLAMP, DEFAULT_VARIANCE_FLOOR};
pub use posterior::PosteriorMatrix;
