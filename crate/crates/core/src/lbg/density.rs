//! Conditional document density under a single topic.

use crate::error::{Error, Result};
use crate::lbg::ModelParams;
use crate::matrix::DocRow;
use crate::numeric::ln_normal;

/// `ln Pr(d | y = s, x, θ)`.
///
/// Keywords (`x_i = 1`) contribute `ln p_si + ln N(m_i; c_si, σ²_si)`; every
/// other word contributes `ln(1 - p_si) + ln N(m_i; c_i, σ²_i)`. `keywords`
/// lists the indices with `x_i = 1` in ascending order.
pub fn log_density_given_topic(
    doc: DocRow<'_>,
    keywords: &[usize],
    s: usize,
    params: &ModelParams,
) -> Result<f64> {
    params.check_width(doc.n())?;
    check_topic(s, params)?;
    check_keywords(keywords, params.n)?;
    let mut total = 0.0;
    let mut kw = keywords.iter().peekable();
    let mut entries = doc.iter().peekable();
    for i in 0..params.n {
        let m = match entries.peek() {
            Some(&(col, v)) if col == i => {
                entries.next();
                v
            }
            _ => 0.0,
        };
        let is_kw = kw.next_if(|&&k| k == i).is_some();
        total += word_term(params, s, i, m, is_kw);
    }
    Ok(total)
}

#[inline]
fn word_term(params: &ModelParams, s: usize, i: usize, m: f64, keyword: bool) -> f64 {
    let p = params.clamped_p(s, i);
    let at = params.at(s, i);
    if keyword {
        p.ln() + ln_normal(m, params.c[at], params.sigma2[at])
    } else {
        (1.0 - p).ln() + ln_normal(m, params.cross_c[i], params.cross_sigma2[i])
    }
}

pub(crate) fn check_topic(s: usize, params: &ModelParams) -> Result<()> {
    if s >= params.k {
        return Err(Error::DimensionMismatch {
            what: "topic index bound",
            expected: params.k,
            found: s + 1,
        });
    }
    Ok(())
}

pub(crate) fn check_keywords(keywords: &[usize], n: usize) -> Result<()> {
    if keywords.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("keyword indices must be strictly ascending".into()));
    }
    if let Some(&last) = keywords.last() {
        if last >= n {
            return Err(Error::DimensionMismatch {
                what: "keyword index bound",
                expected: n,
                found: last + 1,
            });
        }
    }
    Ok(())
}

/// Precomputed per-topic totals for a document of all zeros without
/// keywords, so that a sparse document costs `O(nnz)` per topic.
pub(crate) struct DensityCache<'a> {
    params: &'a ModelParams,
    base: Vec<f64>,
    cross_at_zero: Vec<f64>,
}

impl<'a> DensityCache<'a> {
    pub(crate) fn new(params: &'a ModelParams) -> Self {
        let n = params.n;
        let cross_at_zero: Vec<f64> = (0..n)
            .map(|i| ln_normal(0.0, params.cross_c[i], params.cross_sigma2[i]))
            .collect();
        let base = (0..params.k)
            .map(|s| {
                (0..n)
                    .map(|i| (1.0 - params.clamped_p(s, i)).ln() + cross_at_zero[i])
                    .sum()
            })
            .collect();
        Self {
            params,
            base,
            cross_at_zero,
        }
    }

    /// Same value as [`log_density_given_topic`] up to summation order.
    pub(crate) fn log_density(&self, doc: DocRow<'_>, keywords: &[usize], s: usize) -> f64 {
        let params = self.params;
        let mut total = self.base[s];
        let mut kw = keywords.iter().peekable();
        let mut adjust = |i: usize, m: f64, is_kw: bool| {
            if m == 0.0 && !is_kw {
                return;
            }
            let p = params.clamped_p(s, i);
            total += word_term(params, s, i, m, is_kw) - (1.0 - p).ln() - self.cross_at_zero[i];
        };
        for (i, m) in doc.iter() {
            while let Some(&&k) = kw.peek() {
                if k < i {
                    adjust(k, 0.0, true);
                    kw.next();
                } else {
                    break;
                }
            }
            let is_kw = kw.next_if(|&&k| k == i).is_some();
            adjust(i, m, is_kw);
        }
        for &k in kw {
            adjust(k, 0.0, true);
        }
        total
    }
}
