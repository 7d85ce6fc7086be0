//! The alternating fit: EM over `(λ, θ)` interleaved with re-estimation of
//! the keyword counts `q` and the indicator matrix.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lbg::em::{e_step, e_step_with_loglik, estimate_cross_gaussians, m_step};
use crate::lbg::keywords::{stopping_residual, update_indicators, update_q};
use crate::lbg::params::{DEFAULT_PROB_CLAMP, DEFAULT_VARIANCE_FLOOR};
use crate::lbg::{IndicatorMatrix, ModelParams, PosteriorMatrix};
use crate::matrix::DocumentMatrix;
use crate::numeric::round_half_up;
use crate::seeding::{assign_nearest, farthest_first};

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    /// Number of topics.
    pub k: usize,
    pub max_iters: usize,
    /// Stop once `Σ_s (q_s - Σ_i p_si)² < epsilon`.
    pub epsilon: f64,
    pub seed: u64,
    pub variance_floor: f64,
    pub prob_clamp: f64,
    /// Initial keyword count per topic; defaults to `max(1, round(0.1 n))`.
    pub q_init: Option<usize>,
    /// Also stop once `q` has stayed unchanged for this many iterations.
    pub stable_iters: usize,
}

impl FitConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            max_iters: 200,
            epsilon: 1.0,
            seed: 0,
            variance_floor: DEFAULT_VARIANCE_FLOOR,
            prob_clamp: DEFAULT_PROB_CLAMP,
            q_init: None,
            stable_iters: 3,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.k == 0 {
            return bad("k must be at least 1");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        if !(self.variance_floor > 0.0) {
            return bad("variance_floor must be positive");
        }
        if !(self.prob_clamp > 0.0 && self.prob_clamp < 0.5) {
            return bad("prob_clamp must lie in (0, 0.5)");
        }
        if self.q_init == Some(0) {
            return bad("q_init must be at least 1");
        }
        Ok(())
    }
}

/// Why the fit loop ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The keyword-count residual dropped below `epsilon`.
    Residual,
    /// `q` stopped changing.
    StableQ,
    MaxIters,
}

impl StopReason {
    pub fn converged(self) -> bool {
        !matches!(self, StopReason::MaxIters)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    /// Observed-data log-likelihood at the start of the iteration.
    pub loglik: f64,
    /// Stopping residual after the iteration's updates.
    pub residual: f64,
    pub q: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceEvent {
    /// A topic lost all posterior mass and was restarted from a document.
    Reseeded { iter: usize, topic: usize, doc: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitTrace {
    pub records: Vec<IterationRecord>,
    pub events: Vec<TraceEvent>,
    pub stop: StopReason,
}

impl FitTrace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    /// Columns `iter,loglik,residual,q_1..q_k`.
    pub fn to_csv(&self) -> String {
        let k = self.records.first().map_or(0, |r| r.q.len());
        let mut out = String::from("iter,loglik,residual");
        for s in 1..=k {
            let _ = write!(out, ",q_{s}");
        }
        out.push('\n');
        for r in &self.records {
            let _ = write!(out, "{},{},{}", r.iter, r.loglik, r.residual);
            for q in &r.q {
                let _ = write!(out, ",{q}");
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub params: ModelParams,
    /// Responsibilities under the returned parameters and indicators.
    pub posterior: PosteriorMatrix,
    pub indicators: IndicatorMatrix,
    pub trace: FitTrace,
}

/// Fits a `k`-topic model to `docs`.
///
/// Starts from a farthest-first partition of the rows, then repeats
/// E-step, M-step, cross-Gaussian update, keyword-count update and
/// indicator update until the keyword-count residual drops below
/// `epsilon`, `q` stays put for `stable_iters` iterations, or `max_iters`
/// is reached. A closing E-step computes the returned posterior from the
/// final parameters and indicators. Deterministic for a fixed seed.
pub fn fit(docs: &DocumentMatrix, config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    let (m, n, k) = (docs.m(), docs.n(), config.k);
    if m < k {
        return Err(Error::TooFewDocuments { needed: k, found: m });
    }
    let (mut params, mut x) = initialize(docs, config)?;

    let mut records = Vec::new();
    let mut events = Vec::new();
    let mut stable = 0;
    let mut stop = StopReason::MaxIters;
    for iter in 1..=config.max_iters {
        let (mu, doc_ll) = e_step_with_loglik(docs, &x, &params)?;
        let loglik: f64 = doc_ll.iter().sum();
        let report = m_step(docs, &x, &mu, &mut params, config.variance_floor)?;
        let (cc, cv) = estimate_cross_gaussians(docs, &x, config.variance_floor)?;
        params.cross_c = cc;
        params.cross_sigma2 = cv;
        if !report.degenerate.is_empty() {
            for (topic, doc) in reseed(docs, &mut params, &report.degenerate, &doc_ll) {
                log::warn!("iteration {iter}: topic {topic} collapsed, reseeded from document {doc}");
                events.push(TraceEvent::Reseeded { iter, topic, doc });
            }
        }
        let q = update_q(&params.p, &params.q, n);
        x = update_indicators(docs, &mu, &q)?;
        let residual = stopping_residual(&q, &params.p);
        stable = if q == params.q { stable + 1 } else { 0 };
        params.q = q;
        records.push(IterationRecord {
            iter,
            loglik,
            residual,
            q: params.q.clone(),
        });
        if residual < config.epsilon {
            stop = StopReason::Residual;
            break;
        }
        if stable >= config.stable_iters {
            stop = StopReason::StableQ;
            break;
        }
    }
    let posterior = e_step(docs, &x, &params)?;
    Ok(FitResult {
        params,
        posterior,
        indicators: x,
        trace: FitTrace {
            records,
            events,
            stop,
        },
    })
}

/// Uniform `λ`, `p = 0.5`, `q = q_init`, indicators from the top
/// `q_init` entries of each row, and `c`, `σ²` from the per-column moments
/// of each cluster of a farthest-first partition.
fn initialize(docs: &DocumentMatrix, config: &FitConfig) -> Result<(ModelParams, IndicatorMatrix)> {
    let (n, k) = (docs.n(), config.k);
    let q0 = config
        .q_init
        .unwrap_or_else(|| round_half_up(0.1 * n as f64) as usize)
        .clamp(1, n);
    let x = IndicatorMatrix::top_entries(docs, |_| q0);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let seeds = farthest_first(docs, k, &mut rng);
    let points: Vec<Vec<f64>> = seeds.iter().map(|&j| docs.row(j).to_dense()).collect();
    let labels = assign_nearest(docs, &points);

    let mut params = ModelParams::uniform(k, n, q0);
    params.prob_clamp = config.prob_clamp;
    let (cc, cv) = estimate_cross_gaussians(docs, &x, config.variance_floor)?;
    params.cross_c = cc;
    params.cross_sigma2 = cv;
    for s in 0..k {
        let members: Vec<usize> = (0..docs.m()).filter(|&j| labels[j] == s).collect();
        let (mean, var) = docs.select_rows(&members)?.column_moments();
        for i in 0..n {
            params.c[s * n + i] = mean[i];
            params.sigma2[s * n + i] = var[i].max(config.variance_floor);
        }
    }
    Ok((params, x))
}

/// Restarts each collapsed topic from the worst-explained document not yet
/// used, giving it weight `1/m`. Returns `(topic, document)` pairs.
fn reseed(
    docs: &DocumentMatrix,
    params: &mut ModelParams,
    topics: &[usize],
    doc_ll: &[f64],
) -> Vec<(usize, usize)> {
    let (m, n) = (docs.m(), params.n);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| doc_ll[a].total_cmp(&doc_ll[b]).then(a.cmp(&b)));
    let mut out = Vec::with_capacity(topics.len());
    for (&s, &j) in topics.iter().zip(order.iter().cycle()) {
        let row = docs.row(j).to_dense();
        for i in 0..n {
            let a = s * n + i;
            params.c[a] = row[i];
            params.sigma2[a] = params.cross_sigma2[i];
            params.p[a] = 0.5;
        }
        params.lambda[s] = 1.0 / m as f64;
        out.push((s, j));
    }
    let total: f64 = params.lambda.iter().sum();
    params.lambda.iter_mut().for_each(|l| *l /= total);
    out
}
