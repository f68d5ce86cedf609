use crate::error::{Error, Result};

/// Binary classification examples in compressed sparse row layout.
///
/// Labels are `+1.0` or `-1.0`. Column indices are 0-based and strictly
/// increasing within each row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseDataset {
    n_features: usize,
    row_ptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
    labels: Vec<f64>,
}

impl SparseDataset {
    pub fn empty(n_features: usize) -> Self {
        SparseDataset { n_features, row_ptr: vec![0], indices: Vec::new(), values: Vec::new(), labels: Vec::new() }
    }

    /// Builds a dataset from raw CSR arrays, validating every invariant.
    pub fn from_csr(
        n_features: usize,
        row_ptr: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
        labels: Vec<f64>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if row_ptr.first() != Some(&0) {
            return bad("row_ptr must start at 0".into());
        }
        if row_ptr.len() != labels.len() + 1 {
            return bad(format!("{} labels for {} rows", labels.len(), row_ptr.len().saturating_sub(1)));
        }
        if indices.len() != values.len() || *row_ptr.last().unwrap() != indices.len() {
            return bad("row_ptr, indices and values disagree in length".into());
        }
        for (r, w) in row_ptr.windows(2).enumerate() {
            if w[1] < w[0] {
                return bad(format!("row_ptr decreases at row {r}"));
            }
            let row = &indices[w[0]..w[1]];
            if row.windows(2).any(|p| p[1] <= p[0]) {
                return bad(format!("indices not strictly increasing in row {r}"));
            }
            if let Some(&last) = row.last() {
                if last >= n_features {
                    return bad(format!("index {last} out of range in row {r}"));
                }
            }
        }
        if let Some(i) = labels.iter().position(|&y| y != 1.0 && y != -1.0) {
            return bad(format!("label {} at row {i} is not +1 or -1", labels[i]));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index: i, value: values[i] });
        }
        Ok(SparseDataset { n_features, row_ptr, indices, values, labels })
    }

    pub fn n_examples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.indices[a..b], &self.values[a..b])
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, &[usize], &[f64])> + '_ {
        (0..self.n_examples()).map(move |i| {
            let (idx, val) = self.row(i);
            (self.labels[i], idx, val)
        })
    }

    /// `⟨xᵢ, w⟩` for row `i`.
    #[inline]
    pub fn row_dot(&self, i: usize, w: &[f64]) -> f64 {
        let (idx, val) = self.row(i);
        idx.iter().zip(val).map(|(&j, &v)| v * w[j]).sum()
    }

    /// `Σᵢ ‖xᵢ‖²`.
    pub fn squared_frobenius(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}
