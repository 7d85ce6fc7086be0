//! One model per class, classification by the most probable class.

use crate::error::{Error, Result};
use crate::inference::infer;
use crate::lbg::{fit, FitConfig, ModelParams};
use crate::matrix::{DocRow, DocumentMatrix};
use crate::numeric::argmax;

/// Fits an independent model to the documents of each class.
/// `labels` are 0-based; `configs[l]` configures class `l`.
pub fn supervised_fit(
    docs: &DocumentMatrix,
    labels: &[usize],
    configs: &[FitConfig],
) -> Result<Vec<ModelParams>> {
    if labels.len() != docs.m() {
        return Err(Error::DimensionMismatch {
            what: "label count",
            expected: docs.m(),
            found: labels.len(),
        });
    }
    let h = configs.len();
    let mut members = vec![Vec::new(); h];
    for (j, &l) in labels.iter().enumerate() {
        if l >= h {
            return Err(Error::LabelOutOfRange { label: l, k: h });
        }
        members[l].push(j);
    }
    members
        .iter()
        .zip(configs)
        .map(|(rows, config)| {
            if rows.len() < config.k.max(1) {
                return Err(Error::TooFewDocuments {
                    needed: config.k.max(1),
                    found: rows.len(),
                });
            }
            Ok(fit(&docs.select_rows(rows)?, config)?.params)
        })
        .collect()
}

/// Empirical class frequencies of 0-based labels.
pub fn class_priors(labels: &[usize], h: usize) -> Vec<f64> {
    let mut counts = vec![0.0; h];
    for &l in labels {
        if l < h {
            counts[l] += 1.0;
        }
    }
    let total: f64 = counts.iter().sum();
    counts.iter().map(|c| c / total).collect()
}

/// `argmax_l [ln prior_l + ln Pr(d | model_l)]`, uniform priors when none
/// are given, lowest class index on ties.
pub fn supervised_classify(
    doc: DocRow<'_>,
    models: &[ModelParams],
    priors: Option<&[f64]>,
) -> Result<usize> {
    if let Some(pr) = priors {
        if pr.len() != models.len() {
            return Err(Error::DimensionMismatch {
                what: "prior count",
                expected: models.len(),
                found: pr.len(),
            });
        }
    }
    let scores = models
        .iter()
        .enumerate()
        .map(|(l, model)| {
            let prior = priors.map_or(0.0, |p| p[l].ln());
            Ok(prior + infer(doc, model)?.log_prob)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(argmax(&scores))
}

/// Held-out log-likelihood of a model fitted with each candidate topic
/// count; a helper for choosing `k` per class.
pub fn sweep_topics(
    train: &DocumentMatrix,
    held_out: &DocumentMatrix,
    ks: &[usize],
    base: &FitConfig,
) -> Result<Vec<(usize, f64)>> {
    ks.iter()
        .map(|&k| {
            let config = FitConfig { k, ..base.clone() };
            let params = fit(train, &config)?.params;
            let ll = held_out
                .rows()
                .map(|d| infer(d, &params).map(|r| r.log_prob))
                .sum::<Result<f64>>()?;
            Ok((k, ll))
        })
        .collect()
}
