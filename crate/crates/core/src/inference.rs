//! Scoring novel documents against a frozen model.

use crate::error::{Error, Result};
use crate::lbg::{log_density_given_topic, ModelParams};
use crate::matrix::DocRow;
use crate::numeric::{argmax, normalize_log_weights, round_half_up};

#[derive(Debug, Clone, PartialEq)]
pub struct InferenceResult {
    /// Estimated keyword indices, ascending.
    pub keywords: Vec<usize>,
    /// Posterior over topics.
    pub mu: Vec<f64>,
    /// `ln Pr(d)`.
    pub log_prob: f64,
    /// Most probable topic, lowest index on ties.
    pub map_topic: usize,
}

fn check_doc(doc: DocRow<'_>, params: &ModelParams) -> Result<()> {
    if doc.n() != params.n {
        return Err(Error::DimensionMismatch {
            what: "code-book size",
            expected: params.n,
            found: doc.n(),
        });
    }
    if doc.nnz() == 0 {
        return Err(Error::EmptyDocument { doc: 0 });
    }
    Ok(())
}

/// Two-step keyword estimate for a document the model has not seen.
///
/// First every topic scores the document with its own top-`q_s`
/// indicator set, giving a provisional posterior `μ̂`. The result is then
/// the top `round(Σ_s μ̂_s q_s)` entries (clamped to `1..=nnz`).
pub fn estimate_indicator_novel(doc: DocRow<'_>, params: &ModelParams) -> Result<Vec<usize>> {
    check_doc(doc, params)?;
    let mut weights = Vec::with_capacity(params.k);
    for s in 0..params.k {
        let xs = doc.top_indices(params.q[s]);
        weights.push(params.lambda[s].ln() + log_density_given_topic(doc, &xs, s, params)?);
    }
    normalize_log_weights(&mut weights);
    let g: f64 = weights.iter().zip(&params.q).map(|(w, &q)| w * q as f64).sum();
    let g = (round_half_up(g).max(0.0) as usize).clamp(1, doc.nnz());
    Ok(doc.top_indices(g))
}

/// Posterior, log-probability and MAP topic of a novel document.
pub fn infer(doc: DocRow<'_>, params: &ModelParams) -> Result<InferenceResult> {
    let keywords = estimate_indicator_novel(doc, params)?;
    let mut mu = Vec::with_capacity(params.k);
    for s in 0..params.k {
        mu.push(params.lambda[s].ln() + log_density_given_topic(doc, &keywords, s, params)?);
    }
    let log_prob = normalize_log_weights(&mut mu);
    let map_topic = argmax(&mu);
    Ok(InferenceResult {
        keywords,
        mu,
        log_prob,
        map_topic,
    })
}

/// CSV with columns `doc_id,map_topic,log_prob,mu_1..mu_k`; ids and topics
/// are 1-based.
pub fn results_to_csv(results: &[InferenceResult], k: usize) -> String {
    use std::fmt::Write as _;
    let mut out = String::from("doc_id,map_topic,log_prob");
    for s in 1..=k {
        let _ = write!(out, ",mu_{s}");
    }
    out.push('\n');
    for (j, r) in results.iter().enumerate() {
        let _ = write!(out, "{},{},{}", j + 1, r.map_topic + 1, r.log_prob);
        for m in &r.mu {
            let _ = write!(out, ",{m}");
        }
        out.push('\n');
    }
    out
}
