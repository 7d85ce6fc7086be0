use crate::lbg::ModelParams;

/// Default keyword-probability threshold for feature selection.
pub const DEFAULT_DELTA: f64 = 0.5;

/// Words kept by [`select_features`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    /// Kept word indices, ascending.
    pub kept: Vec<usize>,
    pub delta: f64,
}

/// Keeps word `i` iff some topic has `p_si >= delta`; a word that is not a
/// likely keyword of any topic is dropped.
pub fn select_features(params: &ModelParams, delta: f64) -> FeatureSet {
    let kept = (0..params.n)
        .filter(|&i| (0..params.k).any(|s| params.p[s * params.n + i] >= delta))
        .collect();
    FeatureSet { kept, delta }
}

/// `max_s p_si` per word.
pub fn max_keyword_probability(params: &ModelParams) -> Vec<f64> {
    (0..params.n)
        .map(|i| {
            (0..params.k)
                .map(|s| params.p[s * params.n + i])
                .fold(0.0, f64::max)
        })
        .collect()
}
