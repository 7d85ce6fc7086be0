use crate::error::{Error, Result};
use crate::numeric::argmax;

/// Topic responsibilities `μ_sj`, `k x m`, each column summing to one.
/// Stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorMatrix {
    k: usize,
    values: Vec<f64>,
}

impl PosteriorMatrix {
    pub(crate) fn from_raw(k: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len() % k, 0);
        Self { k, values }
    }

    /// Columns must have length `k`, non-negative entries and unit sum
    /// (within `1e-9`).
    pub fn from_columns(k: usize, columns: Vec<Vec<f64>>) -> Result<Self> {
        let mut values = Vec::with_capacity(k * columns.len());
        for (j, col) in columns.into_iter().enumerate() {
            if col.len() != k {
                return Err(Error::DimensionMismatch {
                    what: "posterior column length",
                    expected: k,
                    found: col.len(),
                });
            }
            let sum: f64 = col.iter().sum();
            if col.iter().any(|&v| !(v >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidInput(format!(
                    "posterior column {j} is not a probability vector"
                )));
            }
            values.extend(col);
        }
        Ok(Self { k, values })
    }

    /// One-hot columns from hard topic assignments.
    pub fn from_assignments(k: usize, topics: &[usize]) -> Result<Self> {
        let mut values = vec![0.0; k * topics.len()];
        for (j, &s) in topics.iter().enumerate() {
            if s >= k {
                return Err(Error::LabelOutOfRange { label: s, k });
            }
            values[j * k + s] = 1.0;
        }
        Ok(Self { k, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.values.len() / self.k
    }

    pub fn get(&self, s: usize, j: usize) -> f64 {
        self.values[j * self.k + s]
    }

    /// Posterior of document `j` over topics.
    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.k..(j + 1) * self.k]
    }

    /// `Σ_j μ_sj`.
    pub fn topic_mass(&self, s: usize) -> f64 {
        self.values.iter().skip(s).step_by(self.k).sum()
    }

    /// MAP topic per document, lowest index on ties.
    pub fn hard_assignments(&self) -> Vec<usize> {
        self.values.chunks(self.k).map(argmax).collect()
    }
}
