use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cf::RatingsMatrix;
use crate::error::{Error, Result};
use crate::lbg::{DEFAULT_PROB_CLAMP, DEFAULT_VARIANCE_FLOOR};
use crate::numeric::{argmax, ln_normal, normalize_log_weights};

/// Mixture over user rating profiles. Per component `s` and item `i`,
/// `p[s][i]` is the probability the item is rated at all and
/// `N(c[s][i], sigma2[s][i])` the density of its rating when it is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfModel {
    pub k: usize,
    pub items: usize,
    pub r_max: u8,
    pub lambda: Vec<f64>,
    /// `k x items`, row-major.
    pub p: Vec<f64>,
    pub c: Vec<f64>,
    pub sigma2: Vec<f64>,
    pub prob_clamp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfConfig {
    pub k: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Stop once the relative log-likelihood change drops below this.
    pub tol: f64,
    pub variance_floor: f64,
    pub prob_clamp: f64,
}

impl CfConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            seed,
            max_iters: 200,
            tol: 1e-6,
            variance_floor: DEFAULT_VARIANCE_FLOOR,
            prob_clamp: DEFAULT_PROB_CLAMP,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        if !(self.variance_floor > 0.0) {
            return Err(Error::InvalidConfig("variance floor must be positive".into()));
        }
        if !(self.prob_clamp > 0.0 && self.prob_clamp < 0.5) {
            return Err(Error::InvalidConfig("probability clamp must lie in (0, 0.5)".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidConfig("tolerance must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfFit {
    pub model: CfModel,
    /// Log-likelihood after each E-step.
    pub loglik: Vec<f64>,
    pub converged: bool,
}

impl CfModel {
    fn at(&self, s: usize, i: usize) -> usize {
        s * self.items + i
    }

    fn clamped_p(&self, s: usize, i: usize) -> f64 {
        self.p[self.at(s, i)].clamp(self.prob_clamp, 1.0 - self.prob_clamp)
    }

    /// `ln Pr(ratings | y = s)` for every component, with `extra` items
    /// treated as rated but with unknown value (a factor `p` and no
    /// Gaussian). `ratings` must be sorted by item.
    fn component_log_densities(&self, ratings: &[(usize, u8)], extra: Option<usize>) -> Vec<f64> {
        (0..self.k)
            .map(|s| {
                let mut acc = 0.0;
                let mut next = 0;
                for i in 0..self.items {
                    let p = self.clamped_p(s, i);
                    if next < ratings.len() && ratings[next].0 == i {
                        let ix = self.at(s, i);
                        acc += p.ln() + ln_normal(ratings[next].1 as f64, self.c[ix], self.sigma2[ix]);
                        next += 1;
                    } else if extra == Some(i) {
                        acc += p.ln();
                    } else {
                        acc += (1.0 - p).ln();
                    }
                }
                acc
            })
            .collect()
    }

    /// Posterior over components for one user's observed ratings.
    pub fn posterior(&self, ratings: &[(usize, u8)]) -> Result<Vec<f64>> {
        let sorted = self.check_ratings(ratings)?;
        let mut w = self.component_log_densities(&sorted, None);
        w.iter_mut()
            .zip(&self.lambda)
            .for_each(|(w, l)| *w += l.ln());
        normalize_log_weights(&mut w);
        Ok(w)
    }

    fn check_ratings(&self, ratings: &[(usize, u8)]) -> Result<Vec<(usize, u8)>> {
        let mut sorted = ratings.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidInput(format!("item {} rated twice", w[0].0)));
            }
        }
        for &(i, r) in &sorted {
            if i >= self.items {
                return Err(Error::DimensionMismatch {
                    what: "item index",
                    expected: self.items,
                    found: i,
                });
            }
            if r < 1 || r > self.r_max {
                return Err(Error::InvalidInput(format!("rating {r} outside 1..={}", self.r_max)));
            }
        }
        Ok(sorted)
    }
}

/// Fits the rating mixture by EM from a seeded random soft assignment.
pub fn cf_fit(train: &RatingsMatrix, config: &CfConfig) -> Result<CfFit> {
    config.validate()?;
    let (m, n, k) = (train.users(), train.items(), config.k);
    if train.nnz() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    if k > m {
        return Err(Error::TooFewDocuments { needed: k, found: m });
    }

    let (g_mean, g_var, g_density) = global_stats(train, config.variance_floor);
    let mut model = CfModel {
        k,
        items: n,
        r_max: train.r_max(),
        lambda: vec![1.0 / k as f64; k],
        p: vec![g_density; k * n],
        c: vec![g_mean; k * n],
        sigma2: vec![g_var; k * n],
        prob_clamp: config.prob_clamp,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut resp: Vec<Vec<f64>> = (0..m)
        .map(|_| {
            let mut r: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let total: f64 = r.iter().sum();
            r.iter_mut().for_each(|v| *v /= total);
            r
        })
        .collect();
    m_step(train, &resp, &mut model, config.variance_floor);

    let mut loglik = Vec::new();
    let mut converged = false;
    for _ in 0..config.max_iters {
        let ll = e_step(train, &model, &mut resp);
        let done = loglik
            .last()
            .is_some_and(|&prev: &f64| (ll - prev).abs() <= config.tol * prev.abs().max(1e-300));
        loglik.push(ll);
        if done {
            converged = true;
            break;
        }
        m_step(train, &resp, &mut model, config.variance_floor);
    }
    log::debug!("cf_fit: {} iterations, converged={converged}", loglik.len());
    Ok(CfFit {
        model,
        loglik,
        converged,
    })
}

fn global_stats(train: &RatingsMatrix, floor: f64) -> (f64, f64, f64) {
    let all: Vec<f64> = (0..train.users())
        .flat_map(|u| train.user(u).iter().map(|&(_, r)| r as f64))
        .collect();
    let mean = all.iter().sum::<f64>() / all.len() as f64;
    let var = all.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / all.len() as f64;
    let density = all.len() as f64 / (train.users() * train.items()) as f64;
    (mean, var.max(floor), density)
}

fn e_step(train: &RatingsMatrix, model: &CfModel, resp: &mut [Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for (u, r) in resp.iter_mut().enumerate() {
        let mut w = model.component_log_densities(train.user(u), None);
        w.iter_mut()
            .zip(&model.lambda)
            .for_each(|(w, l)| *w += l.ln());
        total += normalize_log_weights(&mut w);
        *r = w;
    }
    total
}

fn m_step(train: &RatingsMatrix, resp: &[Vec<f64>], model: &mut CfModel, floor: f64) {
    let (m, n) = (train.users(), train.items());
    let mut rated = vec![false; n];
    for u in 0..m {
        train.user(u).iter().for_each(|&(i, _)| rated[i] = true);
    }
    for s in 0..model.k {
        let mass: f64 = resp.iter().map(|r| r[s]).sum();
        model.lambda[s] = mass / m as f64;
        if mass < 1e-12 {
            continue;
        }
        let mut weight = vec![0.0; n];
        let mut sum = vec![0.0; n];
        for (u, r) in resp.iter().enumerate() {
            for &(i, v) in train.user(u) {
                weight[i] += r[s];
                sum[i] += r[s] * v as f64;
            }
        }
        let mut sq = vec![0.0; n];
        for (u, r) in resp.iter().enumerate() {
            for &(i, v) in train.user(u) {
                if weight[i] > 0.0 {
                    let d = v as f64 - sum[i] / weight[i];
                    sq[i] += r[s] * d * d;
                }
            }
        }
        for i in 0..n {
            let ix = s * n + i;
            if rated[i] {
                model.p[ix] = weight[i] / mass;
            }
            if weight[i] > 0.0 {
                model.c[ix] = sum[i] / weight[i];
                model.sigma2[ix] = (sq[i] / weight[i]).max(floor);
            }
        }
    }
    let total: f64 = model.lambda.iter().sum();
    model.lambda.iter_mut().for_each(|l| *l /= total);
}

/// Forced prediction of `item` for a user with the given observed ratings.
///
/// The component posterior conditions on the observed ratings and on the
/// fact that `item` is rated. Returns the most probable rating (lowest on
/// ties) and the normalized distribution over `1..=r_max`.
pub fn cf_predict(model: &CfModel, ratings: &[(usize, u8)], item: usize) -> Result<(u8, Vec<f64>)> {
    if item >= model.items {
        return Err(Error::DimensionMismatch {
            what: "item index",
            expected: model.items,
            found: item,
        });
    }
    let sorted = model.check_ratings(ratings)?;
    if sorted.is_empty() {
        return Err(Error::NoObservedRatings);
    }
    if sorted.iter().any(|&(i, _)| i == item) {
        return Err(Error::InvalidInput(format!(
            "target item {item} is among the conditioning ratings"
        )));
    }
    let mut post = model.component_log_densities(&sorted, Some(item));
    post.iter_mut()
        .zip(&model.lambda)
        .for_each(|(w, l)| *w += l.ln());
    normalize_log_weights(&mut post);

    let mut dist: Vec<f64> = (1..=model.r_max)
        .map(|t| {
            let terms: Vec<f64> = (0..model.k)
                .map(|s| {
                    let ix = model.at(s, item);
                    post[s].ln() + ln_normal(t as f64, model.c[ix], model.sigma2[ix])
                })
                .collect();
            crate::numeric::log_sum_exp(&terms)
        })
        .collect();
    normalize_log_weights(&mut dist);
    Ok((argmax(&dist) as u8 + 1, dist))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(c: f64, sigma2: f64) -> CfModel {
        CfModel {
            k: 1,
            items: 2,
            r_max: 5,
            lambda: vec![1.0],
            p: vec![0.5, 0.5],
            c: vec![3.0, c],
            sigma2: vec![1.0, sigma2],
            prob_clamp: DEFAULT_PROB_CLAMP,
        }
    }

    #[test]
    fn peak_at_nearest_integer() {
        let (t, dist) = cf_predict(&single(3.2, 1.0), &[(0, 4)], 1).unwrap();
        assert_eq!(t, 3);
        assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_way_tie_goes_low() {
        let (t, dist) = cf_predict(&single(3.5, 0.7), &[(0, 4)], 1).unwrap();
        assert!((dist[2] - dist[3]).abs() < 1e-15);
        assert_eq!(t, 3);
    }

    #[test]
    fn no_ratings_is_an_error() {
        assert!(matches!(
            cf_predict(&single(3.0, 1.0), &[], 1),
            Err(Error::NoObservedRatings)
        ));
    }

    #[test]
    fn single_component_means_are_item_averages() {
        let r = RatingsMatrix::new(3, 3, 5, vec![(0, 0, 4), (1, 0, 5), (2, 0, 3), (0, 1, 1), (2, 2, 2)])
            .unwrap();
        let fit = cf_fit(&r, &CfConfig::new(1, 0)).unwrap();
        assert!((fit.model.c[0] - 4.0).abs() < 1e-10);
        assert!((fit.model.c[1] - 1.0).abs() < 1e-10);
        assert!((fit.model.c[2] - 2.0).abs() < 1e-10);
        assert_eq!(fit.model.lambda, vec![1.0]);
        assert!((fit.model.p[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unrated_item_gets_global_statistics() {
        let r = RatingsMatrix::new(2, 2, 5, vec![(0, 0, 2), (1, 0, 4)]).unwrap();
        let fit = cf_fit(&r, &CfConfig::new(1, 0)).unwrap();
        assert_eq!(fit.model.c[1], 3.0);
        assert_eq!(fit.model.sigma2[1], 1.0);
    }

    #[test]
    fn too_many_components() {
        let r = RatingsMatrix::new(1, 1, 5, vec![(0, 0, 2)]).unwrap();
        assert!(matches!(
            cf_fit(&r, &CfConfig::new(2, 0)),
            Err(Error::TooFewDocuments { .. })
        ));
    }
}
