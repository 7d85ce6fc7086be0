//! Brute-force reference evaluations and random small instances.
//!
//! Every oracle multiplies probabilities and densities directly in linear
//! space and takes a single logarithm at the end, so it shares no code path
//! with the log-space implementations it checks.

#![allow(dead_code)]

use std::f64::consts::PI;

use lbg::cf::CfModel;
use lbg::lbg::{IndicatorMatrix, ModelParams};
use lbg::DocumentMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn normal_pdf(x: f64, mean: f64, var: f64) -> f64 {
    (-(x - mean) * (x - mean) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

fn clamp(p: f64, eps: f64) -> f64 {
    p.max(eps).min(1.0 - eps)
}

/// `Pr(d | y = s, x)` as a plain product over all `n` words.
pub fn density(doc: &[f64], keyword: &[bool], s: usize, params: &ModelParams) -> f64 {
    let n = params.n;
    let mut prod = 1.0;
    for i in 0..n {
        let a = s * n + i;
        let p = clamp(params.p[a], params.prob_clamp);
        prod *= if keyword[i] {
            p * normal_pdf(doc[i], params.c[a], params.sigma2[a])
        } else {
            (1.0 - p) * normal_pdf(doc[i], params.cross_c[i], params.cross_sigma2[i])
        };
    }
    prod
}

pub fn log_density(doc: &[f64], keyword: &[bool], s: usize, params: &ModelParams) -> f64 {
    density(doc, keyword, s, params).ln()
}

/// `μ[j][s]`, normalized by an explicit sum over topics.
pub fn posterior(docs: &[Vec<f64>], keywords: &[Vec<bool>], params: &ModelParams) -> Vec<Vec<f64>> {
    docs.iter()
        .zip(keywords)
        .map(|(d, x)| {
            let joint: Vec<f64> = (0..params.k)
                .map(|s| params.lambda[s] * density(d, x, s, params))
                .collect();
            let z: f64 = joint.iter().sum();
            joint.iter().map(|v| v / z).collect()
        })
        .collect()
}

/// `‖b - U Uᵀ q‖₂` with `U` built as an explicit `k x m` matrix.
pub fn claim1_residual(mu: &[Vec<f64>], q: &[usize], p: &[f64]) -> f64 {
    let k = q.len();
    let n = p.len() / k;
    let m = mu.len();
    let u: Vec<Vec<f64>> = (0..k).map(|s| (0..m).map(|j| mu[j][s]).collect()).collect();
    let mut uut = vec![vec![0.0; k]; k];
    for s in 0..k {
        for t in 0..k {
            uut[s][t] = (0..m).map(|j| u[s][j] * u[t][j]).sum();
        }
    }
    let mut sq = 0.0;
    for s in 0..k {
        let b = u[s].iter().sum::<f64>() * p[s * n..(s + 1) * n].iter().sum::<f64>();
        let rhs: f64 = (0..k).map(|t| uut[s][t] * q[t] as f64).sum();
        sq += (b - rhs) * (b - rhs);
    }
    sq.sqrt()
}

/// Rating distribution `Pr(r_item = t | observed, item rated)` for
/// `t = 1..=r_max`, as a joint product marginalized over components.
pub fn cf_distribution(model: &CfModel, ratings: &[(usize, u8)], item: usize) -> Vec<f64> {
    let n = model.items;
    let joint: Vec<f64> = (1..=model.r_max)
        .map(|t| {
            (0..model.k)
                .map(|s| {
                    let mut prod = model.lambda[s];
                    for i in 0..n {
                        let a = s * n + i;
                        let p = clamp(model.p[a], model.prob_clamp);
                        if let Some(&(_, r)) = ratings.iter().find(|&&(ri, _)| ri == i) {
                            prod *= p * normal_pdf(r as f64, model.c[a], model.sigma2[a]);
                        } else if i == item {
                            prod *= p * normal_pdf(t as f64, model.c[a], model.sigma2[a]);
                        } else {
                            prod *= 1.0 - p;
                        }
                    }
                    prod
                })
                .sum()
        })
        .collect();
    let z: f64 = joint.iter().sum();
    joint.iter().map(|v| v / z).collect()
}

/// `|a - b| ≤ tol · max(|a|, |b|)`.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Brute-force minimum over all permutations of `0..k`.
pub fn min_assignment_cost(cost: &[Vec<f64>]) -> f64 {
    fn go(cost: &[Vec<f64>], row: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
        if row == cost.len() {
            *best = best.min(acc);
            return;
        }
        for c in 0..cost.len() {
            if !used[c] {
                used[c] = true;
                go(cost, row + 1, used, acc + cost[row][c], best);
                used[c] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(cost, 0, &mut vec![false; cost.len()], 0.0, &mut best);
    best
}

/// A small random model, corpus and indicator matrix.
pub struct Instance {
    pub params: ModelParams,
    pub dense: Vec<Vec<f64>>,
    pub docs: DocumentMatrix,
    pub keywords: Vec<Vec<bool>>,
    pub x: IndicatorMatrix,
}

pub fn random_params(rng: &mut impl Rng, k: usize, n: usize) -> ModelParams {
    let mut params = ModelParams::uniform(k, n, 1);
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..1.0)).collect();
    let z: f64 = raw.iter().sum();
    params.lambda = raw.iter().map(|v| v / z).collect();
    params.q = (0..k).map(|_| rng.gen_range(1..=n)).collect();
    for a in 0..k * n {
        params.p[a] = rng.gen_range(0.05..0.95);
        params.c[a] = rng.gen_range(0.0..5.0);
        params.sigma2[a] = rng.gen_range(0.5..3.0);
    }
    for i in 0..n {
        params.cross_c[i] = rng.gen_range(0.0..2.0);
        params.cross_sigma2[i] = rng.gen_range(0.5..3.0);
    }
    params
}

/// Random `m x n` corpus with non-negative entries and at least one keyword
/// per document chosen among its non-zero entries.
pub fn random_instance(seed: u64, k: usize, n: usize, m: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = random_params(&mut rng, k, n);
    let mut dense = Vec::with_capacity(m);
    let mut keywords = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let mut d: Vec<f64> = (0..n)
            .map(|_| if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0..6) as f64 })
            .collect();
        let lead = rng.gen_range(0..n);
        if d[lead] == 0.0 {
            d[lead] = 1.0;
        }
        let mut support: Vec<usize> = (0..n).filter(|&i| d[i] > 0.0).collect();
        support.shuffle(&mut rng);
        let g = rng.gen_range(1..=support.len());
        let mut kw: Vec<usize> = support[..g].to_vec();
        kw.sort_unstable();
        let mut flags = vec![false; n];
        for &i in &kw {
            flags[i] = true;
        }
        dense.push(d);
        keywords.push(flags);
        rows.push(kw);
    }
    let docs = DocumentMatrix::from_dense(&dense).expect("valid corpus");
    let x = IndicatorMatrix::from_rows(n, rows).expect("valid indicators");
    Instance {
        params,
        dense,
        docs,
        keywords,
        x,
    }
}

/// A random rating model with `items` items.
pub fn random_cf_model(seed: u64, k: usize, items: usize, r_max: u8) -> CfModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.2..1.0)).collect();
    let z: f64 = raw.iter().sum();
    CfModel {
        k,
        items,
        r_max,
        lambda: raw.iter().map(|v| v / z).collect(),
        p: (0..k * items).map(|_| rng.gen_range(0.05..0.95)).collect(),
        c: (0..k * items).map(|_| rng.gen_range(1.0..r_max as f64)).collect(),
        sigma2: (0..k * items).map(|_| rng.gen_range(0.3..2.0)).collect(),
        prob_clamp: lbg::lbg::DEFAULT_PROB_CLAMP,
    }
}

/// A random set of distinct (item, rating) pairs that excludes `target`.
pub fn random_ratings(rng: &mut impl Rng, items: usize, r_max: u8, target: usize) -> Vec<(usize, u8)> {
    let mut pool: Vec<usize> = (0..items).filter(|&i| i != target).collect();
    pool.shuffle(rng);
    let count = rng.gen_range(1..=pool.len());
    pool[..count]
        .iter()
        .map(|&i| (i, rng.gen_range(1..=r_max)))
        .collect()
}
