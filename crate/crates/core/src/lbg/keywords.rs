//! Keyword indicators and the keyword-count fixed point.

use crate::error::{Error, Result};
use crate::lbg::PosteriorMatrix;
use crate::matrix::DocumentMatrix;
use crate::numeric::round_half_up;

/// Binary `m x n` keyword indicators, stored as the sorted keyword indices
/// of each document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorMatrix {
    n: usize,
    offsets: Vec<usize>,
    cols: Vec<usize>,
}

impl IndicatorMatrix {
    /// Rows must be strictly ascending and in range. Nothing forces
    /// keywords onto non-zero entries here; [`update_indicators`] does.
    pub fn from_rows<R, I>(n: usize, rows: R) -> Result<Self>
    where
        R: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        let mut offsets = vec![0];
        let mut cols = Vec::new();
        for row in rows {
            let start = cols.len();
            cols.extend(row);
            crate::lbg::density::check_keywords(&cols[start..], n)?;
            offsets.push(cols.len());
        }
        Ok(Self { n, offsets, cols })
    }

    /// Keywords are the `g(j)` largest entries of each row (capped to the
    /// row's support, at least one).
    pub fn top_entries(docs: &DocumentMatrix, mut g: impl FnMut(usize) -> usize) -> Self {
        let mut offsets = Vec::with_capacity(docs.m() + 1);
        offsets.push(0);
        let mut cols = Vec::new();
        for (j, row) in docs.rows().enumerate() {
            let want = g(j).clamp(1, row.nnz());
            cols.extend(row.top_indices(want));
            offsets.push(cols.len());
        }
        Self {
            n: docs.n(),
            offsets,
            cols,
        }
    }

    pub fn m(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, j: usize) -> &[usize] {
        &self.cols[self.offsets[j]..self.offsets[j + 1]]
    }

    pub fn get(&self, j: usize, i: usize) -> bool {
        self.row(j).binary_search(&i).is_ok()
    }

    pub fn row_count(&self, j: usize) -> usize {
        self.offsets[j + 1] - self.offsets[j]
    }

    pub(crate) fn check_shape(&self, docs: &DocumentMatrix) -> Result<()> {
        if self.m() != docs.m() {
            return Err(Error::DimensionMismatch {
                what: "indicator rows",
                expected: docs.m(),
                found: self.m(),
            });
        }
        if self.n != docs.n() {
            return Err(Error::DimensionMismatch {
                what: "indicator columns",
                expected: docs.n(),
                found: self.n,
            });
        }
        Ok(())
    }
}

/// Reduced keyword-count update: `q_s ← |{i : p_si ≥ q_s / n}|`, clamped to
/// `1..=n`. `p` is `k x n`, row-major.
pub fn update_q(p: &[f64], q_prev: &[usize], n: usize) -> Vec<usize> {
    q_prev
        .iter()
        .enumerate()
        .map(|(s, &q)| {
            let threshold = q as f64 / n as f64;
            let count = p[s * n..(s + 1) * n].iter().filter(|&&v| v >= threshold).count();
            count.clamp(1, n)
        })
        .collect()
}

/// Expected keyword count of document `j`: `round(Σ_s μ_sj q_s)`,
/// half rounded up, before clamping to the document support.
pub fn expected_keywords(mu: &PosteriorMatrix, q: &[usize], j: usize) -> usize {
    let g: f64 = mu.column(j).iter().zip(q).map(|(m, &q)| m * q as f64).sum();
    round_half_up(g).max(0.0) as usize
}

/// Marks the `g_j` largest entries of every document as keywords.
pub fn update_indicators(
    docs: &DocumentMatrix,
    mu: &PosteriorMatrix,
    q: &[usize],
) -> Result<IndicatorMatrix> {
    if mu.m() != docs.m() {
        return Err(Error::DimensionMismatch {
            what: "posterior columns",
            expected: docs.m(),
            found: mu.m(),
        });
    }
    if q.len() != mu.k() {
        return Err(Error::DimensionMismatch {
            what: "keyword-count length",
            expected: mu.k(),
            found: q.len(),
        });
    }
    Ok(IndicatorMatrix::top_entries(docs, |j| expected_keywords(mu, q, j)))
}

/// `Σ_s (q_s - Σ_i p_si)²`.
pub fn stopping_residual(q: &[usize], p: &[f64]) -> f64 {
    if q.is_empty() {
        return 0.0;
    }
    let n = p.len() / q.len();
    q.iter()
        .enumerate()
        .map(|(s, &qs)| {
            let row: f64 = p[s * n..(s + 1) * n].iter().sum();
            (qs as f64 - row).powi(2)
        })
        .sum()
}

/// Both sides of the posterior keyword-count identity: `b` with
/// `b_s = (Σ_j μ_sj)(Σ_i p_si)` and `U Uᵀ q` with `U_sj = μ_sj`.
pub fn claim1_sides(mu: &PosteriorMatrix, q: &[usize], p: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let k = mu.k();
    let n = if k == 0 { 0 } else { p.len() / k };
    let b = (0..k)
        .map(|s| mu.topic_mass(s) * p[s * n..(s + 1) * n].iter().sum::<f64>())
        .collect();
    let mut uuq = vec![0.0; k];
    for j in 0..mu.m() {
        let col = mu.column(j);
        let g: f64 = col.iter().zip(q).map(|(m, &q)| m * q as f64).sum();
        for (acc, m) in uuq.iter_mut().zip(col) {
            *acc += m * g;
        }
    }
    (b, uuq)
}

/// `‖b - U Uᵀ q‖₂`; a diagnostic of how far the keyword counts are from the
/// posterior identity.
pub fn claim1_residual(mu: &PosteriorMatrix, q: &[usize], p: &[f64]) -> f64 {
    let (b, uuq) = claim1_sides(mu, q, p);
    b.iter()
        .zip(&uuq)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}
