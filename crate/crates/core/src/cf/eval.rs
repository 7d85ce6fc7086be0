use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cf::{cf_predict, CfModel, RatingsMatrix};
use crate::error::{Error, Result};
use crate::numeric::round_half_up;

/// Per-item mean rating predictor.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselinePredictor {
    item_means: Vec<Option<f64>>,
    global_mean: f64,
    r_max: u8,
}

impl BaselinePredictor {
    /// Item mean rounded half up onto the rating grid; the global training
    /// mean for items without training ratings.
    pub fn predict(&self, item: usize) -> u8 {
        let mean = self
            .item_means
            .get(item)
            .copied()
            .flatten()
            .unwrap_or(self.global_mean);
        round_half_up(mean).clamp(1.0, self.r_max as f64) as u8
    }

    pub fn item_mean(&self, item: usize) -> Option<f64> {
        self.item_means.get(item).copied().flatten()
    }

    pub fn global_mean(&self) -> f64 {
        self.global_mean
    }
}

pub fn baseline_mean_predict(train: &RatingsMatrix) -> Result<BaselinePredictor> {
    if train.nnz() == 0 {
        return Err(Error::EmptyTrainingSet);
    }
    let mut sum = vec![0.0; train.items()];
    let mut count = vec![0usize; train.items()];
    for u in 0..train.users() {
        for &(i, r) in train.user(u) {
            sum[i] += r as f64;
            count[i] += 1;
        }
    }
    let global_mean = sum.iter().sum::<f64>() / count.iter().sum::<usize>() as f64;
    Ok(BaselinePredictor {
        item_means: sum
            .iter()
            .zip(&count)
            .map(|(&s, &c)| (c > 0).then(|| s / c as f64))
            .collect(),
        global_mean,
        r_max: train.r_max(),
    })
}

/// One suppressed rating per test user.
#[derive(Debug, Clone, PartialEq)]
pub struct HoldoutCase {
    pub user: usize,
    pub item: usize,
    pub rating: u8,
    /// The user's other ratings, sorted by item.
    pub rest: Vec<(usize, u8)>,
}

/// Picks one rating per user uniformly at random, each user drawing from
/// its own ChaCha8 stream. Users with fewer than two ratings are skipped;
/// the second value is their count.
pub fn leave_one_out(test: &RatingsMatrix, seed: u64) -> (Vec<HoldoutCase>, usize) {
    let mut cases = Vec::new();
    let mut skipped = 0;
    for u in 0..test.users() {
        let row = test.user(u);
        if row.len() < 2 {
            skipped += 1;
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u as u64);
        let pick = rng.gen_range(0..row.len());
        let (item, rating) = row[pick];
        let rest = row
            .iter()
            .enumerate()
            .filter(|&(ix, _)| ix != pick)
            .map(|(_, &e)| e)
            .collect();
        cases.push(HoldoutCase {
            user: u,
            item,
            rating,
            rest,
        });
    }
    if skipped > 0 {
        log::info!("leave-one-out: skipped {skipped} users with fewer than 2 ratings");
    }
    (cases, skipped)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfMetrics {
    pub mae: f64,
    pub rmse: f64,
    pub cases: usize,
    pub skipped: usize,
}

/// MAE and RMSE (square root of the mean squared error) of
/// `(predicted, actual)` pairs.
pub fn error_metrics(pairs: &[(u8, u8)]) -> (f64, f64) {
    if pairs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = pairs.len() as f64;
    let (abs, sq) = pairs.iter().fold((0.0, 0.0), |(a, s), &(p, t)| {
        let d = p as f64 - t as f64;
        (a + d.abs(), s + d * d)
    });
    (abs / n, (sq / n).sqrt())
}

/// Scores any predictor on the leave-one-out cases of `test`.
pub fn evaluate_with<F>(test: &RatingsMatrix, seed: u64, mut predict: F) -> Result<CfMetrics>
where
    F: FnMut(&HoldoutCase) -> Result<u8>,
{
    let (cases, skipped) = leave_one_out(test, seed);
    let pairs = cases
        .iter()
        .map(|c| Ok((predict(c)?, c.rating)))
        .collect::<Result<Vec<_>>>()?;
    let (mae, rmse) = error_metrics(&pairs);
    Ok(CfMetrics {
        mae,
        rmse,
        cases: pairs.len(),
        skipped,
    })
}

/// Forced-prediction evaluation of a fitted model.
pub fn cf_evaluate(model: &CfModel, test: &RatingsMatrix, seed: u64) -> Result<CfMetrics> {
    evaluate_with(test, seed, |c| Ok(cf_predict(model, &c.rest, c.item)?.0))
}

/// Same protocol, item-mean baseline.
pub fn baseline_evaluate(baseline: &BaselinePredictor, test: &RatingsMatrix, seed: u64) -> Result<CfMetrics> {
    evaluate_with(test, seed, |c| Ok(baseline.predict(c.item)))
}

/// Plain-text `Method / MAE / RMSE` table.
pub fn metrics_table(rows: &[(&str, CfMetrics)]) -> String {
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(6);
    let mut out = format!("{:<width$}  {:>6}  {:>6}\n", "Method", "MAE", "RMSE");
    for (name, m) in rows {
        let _ = writeln!(out, "{name:<width$}  {:>6.3}  {:>6.3}", m.mae, m.rmse);
    }
    out
}
