//! Mixture of unigrams: one topic per document, one word die per topic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{DocRow, DocumentMatrix};
use crate::numeric::{argmax, normalize_log_weights};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MouModel {
    pub k: usize,
    pub n: usize,
    pub lambda: Vec<f64>,
    /// `k x n` row-major; each row is a distribution over words.
    pub beta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MouConfig {
    pub k: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Relative change of the objective below which EM stops.
    pub tol: f64,
    /// Pseudo-count added to every word of every topic.
    pub alpha: f64,
}

impl MouConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            seed,
            max_iters: 200,
            tol: 1e-8,
            alpha: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MouFit {
    pub model: MouModel,
    /// Observed-data log-likelihood after each E-step, without the
    /// multinomial coefficients.
    pub loglik: Vec<f64>,
    /// `loglik + alpha * Σ ln beta`, the quantity EM with smoothing ascends.
    pub objective: Vec<f64>,
    pub converged: bool,
}

impl MouModel {
    pub fn beta_row(&self, s: usize) -> &[f64] {
        &self.beta[s * self.n..(s + 1) * self.n]
    }

    /// `ln λ_s + Σ_i m_i ln β_si` for every topic.
    pub fn joint_log_weights(&self, doc: DocRow<'_>) -> Result<Vec<f64>> {
        if doc.n() != self.n {
            return Err(Error::DimensionMismatch {
                what: "document width",
                expected: self.n,
                found: doc.n(),
            });
        }
        Ok((0..self.k)
            .map(|s| {
                let beta = self.beta_row(s);
                self.lambda[s].ln() + doc.iter().map(|(i, v)| v * beta[i].ln()).sum::<f64>()
            })
            .collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda.len() != self.k {
            return Err(Error::DimensionMismatch {
                what: "lambda length",
                expected: self.k,
                found: self.lambda.len(),
            });
        }
        if self.beta.len() != self.k * self.n {
            return Err(Error::DimensionMismatch {
                what: "beta length",
                expected: self.k * self.n,
                found: self.beta.len(),
            });
        }
        if self.beta.iter().chain(&self.lambda).any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidInput("model probabilities must be finite and non-negative".into()));
        }
        Ok(())
    }
}

/// Posterior over topics and its argmax (lowest index on ties).
pub fn mou_classify(doc: DocRow<'_>, model: &MouModel) -> Result<(usize, Vec<f64>)> {
    let mut w = model.joint_log_weights(doc)?;
    normalize_log_weights(&mut w);
    Ok((argmax(&w), w))
}

/// Fits the mixture by EM on integer counts, starting from seeded random
/// soft responsibilities.
pub fn mou_fit(docs: &DocumentMatrix, config: &MouConfig) -> Result<MouFit> {
    if config.k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    if !(config.alpha >= 0.0) {
        return Err(Error::InvalidConfig("smoothing must be non-negative".into()));
    }
    for (j, row) in docs.rows().enumerate() {
        if let Some((i, v)) = row.iter().find(|(_, v)| v.fract() != 0.0) {
            return Err(Error::NonIntegerCount { doc: j, word: i, value: v });
        }
    }
    let (m, n, k) = (docs.m(), docs.n(), config.k);
    if k > m {
        return Err(Error::TooFewDocuments { needed: k, found: m });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut resp: Vec<Vec<f64>> = (0..m)
        .map(|_| {
            let mut r: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let total: f64 = r.iter().sum();
            r.iter_mut().for_each(|v| *v /= total);
            r
        })
        .collect();
    let mut model = MouModel {
        k,
        n,
        lambda: vec![1.0 / k as f64; k],
        beta: vec![1.0 / n as f64; k * n],
    };
    m_step(docs, &resp, &mut model, config.alpha);

    let mut loglik = Vec::new();
    let mut objective: Vec<f64> = Vec::new();
    let mut converged = false;
    for _ in 0..config.max_iters {
        let mut ll = 0.0;
        for (j, row) in docs.rows().enumerate() {
            let mut w = model.joint_log_weights(row)?;
            ll += normalize_log_weights(&mut w);
            resp[j] = w;
        }
        let obj = ll + config.alpha * model.beta.iter().map(|b| b.ln()).sum::<f64>();
        let done = objective
            .last()
            .is_some_and(|&prev| (obj - prev).abs() <= config.tol * prev.abs().max(1e-300));
        loglik.push(ll);
        objective.push(obj);
        if done {
            converged = true;
            break;
        }
        m_step(docs, &resp, &mut model, config.alpha);
    }
    Ok(MouFit {
        model,
        loglik,
        objective,
        converged,
    })
}

fn m_step(docs: &DocumentMatrix, resp: &[Vec<f64>], model: &mut MouModel, alpha: f64) {
    let (m, n) = (docs.m(), docs.n());
    for s in 0..model.k {
        let mass: f64 = resp.iter().map(|r| r[s]).sum();
        model.lambda[s] = mass / m as f64;
        let mut counts = vec![alpha; n];
        for (j, row) in docs.rows().enumerate() {
            for (i, v) in row.iter() {
                counts[i] += resp[j][s] * v;
            }
        }
        let total: f64 = counts.iter().sum();
        let beta = &mut model.beta[s * n..(s + 1) * n];
        if total > 0.0 {
            beta.iter_mut().zip(&counts).for_each(|(b, c)| *b = c / total);
        } else {
            beta.iter_mut().for_each(|b| *b = 1.0 / n as f64);
        }
    }
    let total: f64 = model.lambda.iter().sum();
    model.lambda.iter_mut().for_each(|l| *l /= total);
}
