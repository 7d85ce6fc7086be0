//! Rating prediction with the observed-indicator variant of the mixture.

mod eval;
mod model;
mod ratings;

pub use eval::{
    baseline_evaluate, baseline_mean_predict, cf_evaluate, error_metrics, evaluate_with, leave_one_out,
    metrics_table, BaselinePredictor, CfMetrics, HoldoutCase,
};
pub use model::{cf_fit, cf_predict, CfConfig, CfFit, CfModel};
pub use ratings::{load_udata, two_population_ratings, RatingsMatrix};
