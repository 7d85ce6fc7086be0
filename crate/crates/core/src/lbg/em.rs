//! Expectation and maximization steps at a fixed indicator matrix.

use crate::error::{Error, Result};
use crate::lbg::density::DensityCache;
use crate::lbg::{IndicatorMatrix, ModelParams, PosteriorMatrix};
use crate::matrix::DocumentMatrix;
use crate::numeric::normalize_log_weights;

/// Topics whose total responsibility falls below this are reported as
/// degenerate by [`m_step`].
pub const DEGENERATE_MASS: f64 = 1e-12;

/// What an [`m_step`] could not update.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MStepReport {
    /// Topics with `Σ_j μ_sj < DEGENERATE_MASS`; their `p`, `c` and `σ²`
    /// rows were left untouched.
    pub degenerate: Vec<usize>,
}

fn check_inputs(docs: &DocumentMatrix, x: &IndicatorMatrix, params: &ModelParams) -> Result<()> {
    params.check_width(docs.n())?;
    x.check_shape(docs)
}

/// Posterior responsibilities `μ_sj ∝ λ_s Pr(d_j | y = s, x_j, θ)`.
pub fn e_step(
    docs: &DocumentMatrix,
    x: &IndicatorMatrix,
    params: &ModelParams,
) -> Result<PosteriorMatrix> {
    e_step_with_loglik(docs, x, params).map(|(mu, _)| mu)
}

/// [`e_step`] plus each document's observed-data log-likelihood
/// `ln Σ_s λ_s Pr(d_j | y = s, x_j, θ)`.
pub fn e_step_with_loglik(
    docs: &DocumentMatrix,
    x: &IndicatorMatrix,
    params: &ModelParams,
) -> Result<(PosteriorMatrix, Vec<f64>)> {
    check_inputs(docs, x, params)?;
    let k = params.k;
    let cache = DensityCache::new(params);
    let ln_lambda: Vec<f64> = params.lambda.iter().map(|l| l.ln()).collect();
    let mut values = Vec::with_capacity(k * docs.m());
    let mut loglik = Vec::with_capacity(docs.m());
    let mut col = vec![0.0; k];
    for (j, row) in docs.rows().enumerate() {
        for (s, w) in col.iter_mut().enumerate() {
            *w = ln_lambda[s] + cache.log_density(row, x.row(j), s);
        }
        loglik.push(normalize_log_weights(&mut col));
        values.extend_from_slice(&col);
    }
    Ok((PosteriorMatrix::from_raw(k, values), loglik))
}

/// `Σ_j ln Σ_s λ_s Pr(d_j | y = s, x_j, θ)`.
pub fn observed_loglik(
    docs: &DocumentMatrix,
    x: &IndicatorMatrix,
    params: &ModelParams,
) -> Result<f64> {
    Ok(e_step_with_loglik(docs, x, params)?.1.iter().sum())
}

/// Closed-form maximization of the expected complete-data log-likelihood.
///
/// Updates `lambda`, `p`, `c` and `sigma2` in place. Where a topic puts no
/// posterior weight on any keyword occurrence of word `i`, `c_si` and
/// `σ²_si` keep their previous values (they do not enter the likelihood).
pub fn m_step(
    docs: &DocumentMatrix,
    x: &IndicatorMatrix,
    mu: &PosteriorMatrix,
    params: &mut ModelParams,
    variance_floor: f64,
) -> Result<MStepReport> {
    check_inputs(docs, x, params)?;
    if mu.m() != docs.m() || mu.k() != params.k {
        return Err(Error::DimensionMismatch {
            what: "posterior shape",
            expected: params.k * docs.m(),
            found: mu.k() * mu.m(),
        });
    }
    let (k, n, m) = (params.k, params.n, docs.m());
    let mass: Vec<f64> = (0..k).map(|s| mu.topic_mass(s)).collect();
    let mut weight = vec![0.0; k * n];
    let mut sum = vec![0.0; k * n];
    for (j, row) in docs.rows().enumerate() {
        let post = mu.column(j);
        for &i in x.row(j) {
            let v = row.get(i);
            for s in 0..k {
                weight[s * n + i] += post[s];
                sum[s * n + i] += post[s] * v;
            }
        }
    }
    let mut mean = vec![0.0; k * n];
    for a in 0..k * n {
        if weight[a] > 0.0 {
            mean[a] = sum[a] / weight[a];
        }
    }
    let mut sq = vec![0.0; k * n];
    for (j, row) in docs.rows().enumerate() {
        let post = mu.column(j);
        for &i in x.row(j) {
            let v = row.get(i);
            for s in 0..k {
                sq[s * n + i] += post[s] * (v - mean[s * n + i]).powi(2);
            }
        }
    }

    let mut report = MStepReport::default();
    for s in 0..k {
        params.lambda[s] = mass[s] / m as f64;
        if mass[s] < DEGENERATE_MASS {
            report.degenerate.push(s);
            continue;
        }
        for i in 0..n {
            let a = s * n + i;
            params.p[a] = (weight[a] / mass[s]).min(1.0);
            if weight[a] > 0.0 {
                params.c[a] = mean[a];
                params.sigma2[a] = (sq[a] / weight[a]).max(variance_floor);
            }
        }
    }
    Ok(report)
}

/// Mean and population variance of each word over documents where it is
/// not a keyword (zeros included). Words that are keywords everywhere fall
/// back to the whole column. Variances are floored.
pub fn estimate_cross_gaussians(
    docs: &DocumentMatrix,
    x: &IndicatorMatrix,
    variance_floor: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    x.check_shape(docs)?;
    let (m, n) = (docs.m(), docs.n());
    let mut keyword_docs = vec![0usize; n];
    let mut sum = vec![0.0; n];
    for (j, row) in docs.rows().enumerate() {
        let kws = x.row(j);
        for &i in kws {
            keyword_docs[i] += 1;
        }
        for (i, v) in row.iter() {
            if kws.binary_search(&i).is_err() {
                sum[i] += v;
            }
        }
    }
    let count: Vec<usize> = keyword_docs.iter().map(|&kd| m - kd).collect();
    let mean: Vec<f64> = (0..n)
        .map(|i| if count[i] > 0 { sum[i] / count[i] as f64 } else { 0.0 })
        .collect();
    let mut ss = vec![0.0; n];
    let mut nonzero = vec![0usize; n];
    for (j, row) in docs.rows().enumerate() {
        let kws = x.row(j);
        for (i, v) in row.iter() {
            if kws.binary_search(&i).is_err() {
                ss[i] += (v - mean[i]).powi(2);
                nonzero[i] += 1;
            }
        }
    }
    let (col_mean, col_var) = docs.column_moments();
    let mut cross_c = Vec::with_capacity(n);
    let mut cross_var = Vec::with_capacity(n);
    for i in 0..n {
        if count[i] == 0 {
            cross_c.push(col_mean[i]);
            cross_var.push(col_var[i].max(variance_floor));
        } else {
            let zeros = (count[i] - nonzero[i]) as f64;
            let var = (ss[i] + zeros * mean[i] * mean[i]) / count[i] as f64;
            cross_c.push(mean[i]);
            cross_var.push(var.max(variance_floor));
        }
    }
    Ok((cross_c, cross_var))
}
