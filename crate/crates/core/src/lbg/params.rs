use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default clamp applied to keyword probabilities before taking logs.
pub const DEFAULT_PROB_CLAMP: f64 = 1e-6;
/// Default lower bound on every fitted variance.
pub const DEFAULT_VARIANCE_FLOOR: f64 = 1e-6;

/// Parameters of a fitted Latent Bernoulli-Gauss model.
///
/// Per-topic tables (`p`, `c`, `sigma2`) are `k x n`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub k: usize,
    pub n: usize,
    /// Mixture weights, summing to one.
    pub lambda: Vec<f64>,
    /// Keyword counts per topic, each in `1..=n`.
    pub q: Vec<usize>,
    /// Probability that word `i` is a keyword of topic `s`.
    pub p: Vec<f64>,
    /// Topic-specific keyword means.
    pub c: Vec<f64>,
    /// Topic-specific keyword variances.
    pub sigma2: Vec<f64>,
    /// Topic-unspecific ("cross") means, one per word.
    pub cross_c: Vec<f64>,
    pub cross_sigma2: Vec<f64>,
    /// `p` is clamped to `[prob_clamp, 1 - prob_clamp]` inside logarithms.
    pub prob_clamp: f64,
}

impl ModelParams {
    /// Uniform weights, `p = 0.5`, unit variances and zero means.
    pub fn uniform(k: usize, n: usize, q: usize) -> Self {
        Self {
            k,
            n,
            lambda: vec![1.0 / k as f64; k],
            q: vec![q.clamp(1, n.max(1)); k],
            p: vec![0.5; k * n],
            c: vec![0.0; k * n],
            sigma2: vec![1.0; k * n],
            cross_c: vec![0.0; n],
            cross_sigma2: vec![1.0; n],
            prob_clamp: DEFAULT_PROB_CLAMP,
        }
    }

    pub fn p_row(&self, s: usize) -> &[f64] {
        &self.p[s * self.n..(s + 1) * self.n]
    }

    pub fn c_row(&self, s: usize) -> &[f64] {
        &self.c[s * self.n..(s + 1) * self.n]
    }

    pub fn sigma2_row(&self, s: usize) -> &[f64] {
        &self.sigma2[s * self.n..(s + 1) * self.n]
    }

    #[inline]
    pub(crate) fn at(&self, s: usize, i: usize) -> usize {
        s * self.n + i
    }

    /// `p_si` clamped into the open interval used for logs.
    #[inline]
    pub fn clamped_p(&self, s: usize, i: usize) -> f64 {
        self.p[self.at(s, i)].clamp(self.prob_clamp, 1.0 - self.prob_clamp)
    }

    /// Checks shapes and the documented invariants.
    pub fn validate(&self) -> Result<()> {
        let (k, n) = (self.k, self.n);
        if k == 0 || n == 0 {
            return Err(Error::InvalidInput("model needs k >= 1 and n >= 1".into()));
        }
        for (what, len, want) in [
            ("lambda length", self.lambda.len(), k),
            ("q length", self.q.len(), k),
            ("p length", self.p.len(), k * n),
            ("c length", self.c.len(), k * n),
            ("sigma2 length", self.sigma2.len(), k * n),
            ("cross_c length", self.cross_c.len(), n),
            ("cross_sigma2 length", self.cross_sigma2.len(), n),
        ] {
            if len != want {
                return Err(Error::DimensionMismatch {
                    what,
                    expected: want,
                    found: len,
                });
            }
        }
        let sum: f64 = self.lambda.iter().sum();
        if self.lambda.iter().any(|&l| !(l >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "mixture weights must be non-negative and sum to 1 (sum = {sum})"
            )));
        }
        if self.p.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidInput("keyword probabilities must lie in [0, 1]".into()));
        }
        if self
            .sigma2
            .iter()
            .chain(&self.cross_sigma2)
            .any(|&v| !(v > 0.0) || !v.is_finite())
        {
            return Err(Error::InvalidInput("variances must be positive and finite".into()));
        }
        if self.c.iter().chain(&self.cross_c).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("means must be finite".into()));
        }
        if self.q.iter().any(|&q| q < 1 || q > n) {
            return Err(Error::InvalidInput(format!("keyword counts must lie in 1..={n}")));
        }
        if !(self.prob_clamp > 0.0 && self.prob_clamp < 0.5) {
            return Err(Error::InvalidInput("prob_clamp must lie in (0, 0.5)".into()));
        }
        Ok(())
    }

    pub(crate) fn check_width(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::DimensionMismatch {
                what: "code-book size",
                expected: self.n,
                found: n,
            });
        }
        Ok(())
    }
}
