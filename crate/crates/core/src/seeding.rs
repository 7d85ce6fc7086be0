//! Farthest-first traversal used to seed both the mixture fit and k-means.

use rand::Rng;

use crate::matrix::{DocRow, DocumentMatrix};

/// Squared Euclidean distance between a sparse row and a dense point whose
/// squared norm is `point_sq`.
pub(crate) fn sq_dist(row: DocRow<'_>, point: &[f64], point_sq: f64) -> f64 {
    let dot: f64 = row.iter().map(|(i, v)| v * point[i]).sum();
    (row.squared_norm() - 2.0 * dot + point_sq).max(0.0)
}

/// Picks `k` distinct rows: the first uniformly at random, each next one the
/// row farthest from every row chosen so far (lowest index on ties).
pub fn farthest_first<R: Rng>(docs: &DocumentMatrix, k: usize, rng: &mut R) -> Vec<usize> {
    let m = docs.m();
    let k = k.min(m);
    if k == 0 {
        return Vec::new();
    }
    let mut chosen = vec![rng.gen_range(0..m)];
    let mut nearest = vec![f64::INFINITY; m];
    let mut taken = vec![false; m];
    taken[chosen[0]] = true;
    while chosen.len() < k {
        let last = docs.row(*chosen.last().unwrap()).to_dense();
        let last_sq: f64 = last.iter().map(|v| v * v).sum();
        let mut best: Option<usize> = None;
        for j in 0..m {
            let d = sq_dist(docs.row(j), &last, last_sq);
            if d < nearest[j] {
                nearest[j] = d;
            }
            if !taken[j] && best.map_or(true, |b| nearest[j] > nearest[b]) {
                best = Some(j);
            }
        }
        let b = best.expect("k <= m leaves an untaken row");
        taken[b] = true;
        chosen.push(b);
    }
    chosen
}

/// Index of the nearest dense point for every row (lowest index on ties).
pub fn assign_nearest(docs: &DocumentMatrix, points: &[Vec<f64>]) -> Vec<usize> {
    let norms: Vec<f64> = points.iter().map(|p| p.iter().map(|v| v * v).sum()).collect();
    docs.rows()
        .map(|row| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (s, (p, &sq)) in points.iter().zip(&norms).enumerate() {
                let d = sq_dist(row, p, sq);
                if d < best_d {
                    best = s;
                    best_d = d;
                }
            }
            best
        })
        .collect()
}
