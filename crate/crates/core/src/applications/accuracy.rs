use std::fmt::Write as _;

use crate::applications::hungarian;
use crate::error::{Error, Result};

/// Best one-to-one mapping from cluster labels to class labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMapping {
    /// `perm[cluster]` is the class the cluster is mapped to.
    pub perm: Vec<usize>,
    /// Fraction of items whose mapped cluster equals their class.
    pub accuracy: f64,
    /// `confusion[cluster][class]` counts.
    pub confusion: Vec<Vec<usize>>,
}

/// Zero-one accuracy of a clustering under the agreement-maximizing
/// bijection between cluster and class labels (both 0-based, `< k`).
pub fn cluster_accuracy(pred: &[usize], truth: &[usize], k: usize) -> Result<LabelMapping> {
    if pred.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            what: "label vector length",
            expected: truth.len(),
            found: pred.len(),
        });
    }
    if pred.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut confusion = vec![vec![0usize; k]; k];
    for (&p, &t) in pred.iter().zip(truth) {
        for label in [p, t] {
            if label >= k {
                return Err(Error::LabelOutOfRange { label, k });
            }
        }
        confusion[p][t] += 1;
    }
    let cost: Vec<Vec<f64>> = confusion
        .iter()
        .map(|row| row.iter().map(|&c| -(c as f64)).collect())
        .collect();
    let assignment = hungarian(&cost)?;
    let hits: usize = assignment
        .perm
        .iter()
        .enumerate()
        .map(|(s, &c)| confusion[s][c])
        .sum();
    Ok(LabelMapping {
        perm: assignment.perm,
        accuracy: hits as f64 / pred.len() as f64,
        confusion,
    })
}

impl LabelMapping {
    /// Plain-text grid with clusters as rows (re-ordered by their mapped
    /// class) and classes as columns, followed by the accuracy line.
    pub fn report(&self) -> String {
        let k = self.perm.len();
        let mut by_class = vec![0; k];
        for (s, &c) in self.perm.iter().enumerate() {
            by_class[c] = s;
        }
        let width = self
            .confusion
            .iter()
            .flatten()
            .map(|c| c.to_string().len())
            .max()
            .unwrap_or(1)
            .max(k.to_string().len() + 1)
            .max(5);
        let mut out = format!("{:>width$}", "");
        for c in 0..k {
            let _ = write!(out, " {:>width$}", format!("c{}", c + 1));
        }
        out.push('\n');
        for &s in &by_class {
            let _ = write!(out, "{:>width$}", format!("t{}", s + 1));
            for c in 0..k {
                let _ = write!(out, " {:>width$}", self.confusion[s][c]);
            }
            out.push('\n');
        }
        let _ = writeln!(out, "accuracy: {:.4}", self.accuracy);
        out
    }
}
