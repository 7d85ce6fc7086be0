//! Small numerical helpers shared by the mixture models.

/// `ln(2π)`.
pub const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Stable `ln Σ exp(x)`. Returns `-inf` for an empty slice or when every
/// term is `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// Turns log-weights into probabilities in place and returns their
/// log-sum-exp. A vector of all `-inf` becomes uniform.
pub fn normalize_log_weights(weights: &mut [f64]) -> f64 {
    let lse = log_sum_exp(weights);
    if !lse.is_finite() {
        let u = 1.0 / weights.len() as f64;
        weights.iter_mut().for_each(|w| *w = u);
        return lse;
    }
    weights.iter_mut().for_each(|w| *w = (*w - lse).exp());
    lse
}

/// Log density of `N(mean, var)` at `x`.
#[inline]
pub fn ln_normal(x: f64, mean: f64, var: f64) -> f64 {
    let d = x - mean;
    -0.5 * (LN_2PI + var.ln()) - d * d / (2.0 * var)
}

/// Round half up (`2.5 -> 3`, `-0.5 -> 0`).
#[inline]
pub fn round_half_up(x: f64) -> f64 {
    (x + 0.5).floor()
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}
