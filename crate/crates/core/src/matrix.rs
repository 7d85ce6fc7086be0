//! Sparse non-negative document-by-word matrices.

use crate::error::{Error, Result};

/// `m` documents by `n` code-words of non-negative weights, stored row-wise
/// with only the strictly positive entries kept.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentMatrix {
    n: usize,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

/// Borrowed view of one document row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DocRow<'a> {
    n: usize,
    cols: &'a [usize],
    vals: &'a [f64],
}

/// Owned sparse document, used for novel documents at inference time.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseDoc {
    n: usize,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl DocumentMatrix {
    /// Builds a matrix from per-row `(word, value)` entries. Entries may come
    /// in any order; zeros are dropped, duplicates and negative or
    /// non-finite values are rejected, and each row must keep at least one
    /// positive entry.
    pub fn from_rows<R>(n: usize, rows: R) -> Result<Self>
    where
        R: IntoIterator,
        R::Item: IntoIterator<Item = (usize, f64)>,
    {
        let mut offsets = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for (j, row) in rows.into_iter().enumerate() {
            let mut entries: Vec<(usize, f64)> = row.into_iter().collect();
            entries.sort_by_key(|e| e.0);
            for w in entries.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::InvalidInput(format!(
                        "duplicate entry for word {} in document {j}",
                        w[0].0
                    )));
                }
            }
            for (i, v) in entries {
                if i >= n {
                    return Err(Error::DimensionMismatch {
                        what: "word index bound",
                        expected: n,
                        found: i + 1,
                    });
                }
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "entry ({j}, {i}) = {v} is not a finite non-negative value"
                    )));
                }
                if v > 0.0 {
                    cols.push(i);
                    vals.push(v);
                }
            }
            if cols.len() == *offsets.last().unwrap() {
                return Err(Error::EmptyDocument { doc: j });
            }
            offsets.push(cols.len());
        }
        if offsets.len() == 1 {
            return Err(Error::EmptyCorpus);
        }
        Ok(Self {
            n,
            offsets,
            cols,
            vals,
        })
    }

    pub fn from_dense<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(bad) = rows.iter().find(|r| r.as_ref().len() != n) {
            return Err(Error::DimensionMismatch {
                what: "dense row length",
                expected: n,
                found: bad.as_ref().len(),
            });
        }
        Self::from_rows(
            n,
            rows.iter()
                .map(|r| r.as_ref().iter().copied().enumerate().collect::<Vec<_>>()),
        )
    }

    /// Number of documents.
    pub fn m(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Code-book size.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, j: usize) -> DocRow<'_> {
        let (a, b) = (self.offsets[j], self.offsets[j + 1]);
        DocRow {
            n: self.n,
            cols: &self.cols[a..b],
            vals: &self.vals[a..b],
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = DocRow<'_>> + '_ {
        (0..self.m()).map(move |j| self.row(j))
    }

    pub fn get(&self, j: usize, i: usize) -> f64 {
        self.row(j).get(i)
    }

    /// New matrix holding the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        Self::from_rows(self.n, rows.iter().map(|&j| self.row(j).iter()))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.to_dense()).collect()
    }

    /// Per-column mean and population variance over all `m` rows, zeros
    /// included.
    pub fn column_moments(&self) -> (Vec<f64>, Vec<f64>) {
        let m = self.m() as f64;
        let mut mean = vec![0.0; self.n];
        for (&i, &v) in self.cols.iter().zip(&self.vals) {
            mean[i] += v;
        }
        mean.iter_mut().for_each(|x| *x /= m);
        let mut ss = vec![0.0; self.n];
        let mut nz = vec![0usize; self.n];
        for (&i, &v) in self.cols.iter().zip(&self.vals) {
            ss[i] += (v - mean[i]).powi(2);
            nz[i] += 1;
        }
        let var = (0..self.n)
            .map(|i| (ss[i] + (self.m() - nz[i]) as f64 * mean[i] * mean[i]) / m)
            .collect();
        (mean, var)
    }

    /// True when every stored value is a whole number.
    pub fn is_integral(&self) -> bool {
        self.vals.iter().all(|v| v.fract() == 0.0)
    }
}

impl<'a> DocRow<'a> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of strictly positive entries.
    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn indices(&self) -> &'a [usize] {
        self.cols
    }

    pub fn values(&self) -> &'a [f64] {
        self.vals
    }

    pub fn get(&self, i: usize) -> f64 {
        match self.cols.binary_search(&i) {
            Ok(p) => self.vals[p],
            Err(_) => 0.0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + 'a {
        self.cols.iter().copied().zip(self.vals.iter().copied())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, v) in self.iter() {
            out[i] = v;
        }
        out
    }

    /// Indices of the `g` largest entries, ordered by value descending and
    /// then by index ascending, returned sorted by index. `g` is capped at
    /// `nnz`.
    pub fn top_indices(&self, g: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.cols.len()).collect();
        order.sort_by(|&a, &b| {
            self.vals[b]
                .total_cmp(&self.vals[a])
                .then(self.cols[a].cmp(&self.cols[b]))
        });
        let mut picked: Vec<usize> = order
            .into_iter()
            .take(g.min(self.cols.len()))
            .map(|p| self.cols[p])
            .collect();
        picked.sort_unstable();
        picked
    }

    pub fn squared_norm(&self) -> f64 {
        self.vals.iter().map(|v| v * v).sum()
    }
}

impl SparseDoc {
    /// Builds a document from `(word, value)` entries; see
    /// [`DocumentMatrix::from_rows`] for validation rules.
    pub fn new(n: usize, entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let dm = DocumentMatrix::from_rows(n, std::iter::once(entries))?;
        Ok(Self {
            n,
            cols: dm.cols,
            vals: dm.vals,
        })
    }

    pub fn from_dense(values: &[f64]) -> Result<Self> {
        Self::new(values.len(), values.iter().copied().enumerate())
    }

    pub fn as_row(&self) -> DocRow<'_> {
        DocRow {
            n: self.n,
            cols: &self.cols,
            vals: &self.vals,
        }
    }
}

impl<'a> From<&'a SparseDoc> for DocRow<'a> {
    fn from(d: &'a SparseDoc) -> Self {
        d.as_row()
    }
}
