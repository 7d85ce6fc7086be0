use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::DocumentMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    pub iterations: usize,
}

const MAX_ITERS: usize = 300;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (s, c) in centroids.iter().enumerate() {
        let d = sq_dist(point, c);
        if d < best_d {
            best = s;
            best_d = d;
        }
    }
    best
}

/// Lloyd's algorithm with farthest-first seeding. A cluster that empties
/// keeps its previous centroid. Deterministic for a fixed seed.
pub fn kmeans_dense(points: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansResult> {
    let m = points.len();
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".into()));
    }
    if m < k {
        return Err(Error::TooFewDocuments { needed: k, found: m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = vec![points[rng.gen_range(0..m)].clone()];
    let mut closest: Vec<f64> = points.iter().map(|p| sq_dist(p, &centroids[0])).collect();
    let mut taken = vec![false; m];
    while centroids.len() < k {
        let pick = (0..m)
            .filter(|&j| !taken[j])
            .fold(None, |best: Option<usize>, j| match best {
                Some(b) if closest[b] >= closest[j] => Some(b),
                _ => Some(j),
            })
            .expect("m >= k");
        taken[pick] = true;
        let c = points[pick].clone();
        for (d, p) in closest.iter_mut().zip(points) {
            *d = d.min(sq_dist(p, &c));
        }
        centroids.push(c);
    }

    let dim = points.first().map_or(0, Vec::len);
    let mut labels: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
    let mut iterations = 0;
    while iterations < MAX_ITERS {
        iterations += 1;
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&labels) {
            counts[l] += 1;
            for (acc, v) in sums[l].iter_mut().zip(p) {
                *acc += v;
            }
        }
        for s in 0..k {
            if counts[s] > 0 {
                centroids[s] = sums[s].iter().map(|v| v / counts[s] as f64).collect();
            }
        }
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
        if next == labels {
            break;
        }
        labels = next;
    }
    Ok(KMeansResult {
        labels,
        centroids,
        iterations,
    })
}

/// K-means on document rows, optionally restricted to a column subset
/// (for instance the output of
/// [`select_features`](crate::applications::select_features)).
pub fn kmeans(
    docs: &DocumentMatrix,
    k: usize,
    seed: u64,
    columns: Option<&[usize]>,
) -> Result<KMeansResult> {
    let points: Vec<Vec<f64>> = match columns {
        None => docs.rows().map(|r| r.to_dense()).collect(),
        Some(cols) => {
            if let Some(&bad) = cols.iter().find(|&&i| i >= docs.n()) {
                return Err(Error::DimensionMismatch {
                    what: "column index bound",
                    expected: docs.n(),
                    found: bad + 1,
                });
            }
            docs.rows()
                .map(|r| cols.iter().map(|&i| r.get(i)).collect())
                .collect()
        }
    };
    kmeans_dense(&points, k, seed)
}
