//! Clustering evaluation, feature selection, per-class classification and
//! a k-means baseline.

mod accuracy;
mod features;
mod hungarian;
mod kmeans;
mod supervised;

pub use accuracy::{cluster_accuracy, LabelMapping};
pub use features::{max_keyword_probability, select_features, FeatureSet, DEFAULT_DELTA};
pub use hungarian::{hungarian, Assignment};
pub use kmeans::{kmeans, kmeans_dense, KMeansResult};
pub use supervised::{class_priors, supervised_classify, supervised_fit, sweep_topics};
