use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::SparseDataset;
use crate::error::{Error, Result};

/// Probability that a planted label is flipped.
pub const LABEL_FLIP_PROBABILITY: f64 = 0.05;

/// Generates a sparse logistic-regression problem with a planted weight vector.
///
/// Each row has `nnz_per_row` distinct uniformly chosen columns with
/// standard-normal values; its label is `sign(⟨x, w⟩)` flipped with
/// probability [`LABEL_FLIP_PROBABILITY`]. Output is a pure function of the
/// arguments.
pub fn generate_synthetic(
    n_examples: usize,
    n_features: usize,
    nnz_per_row: usize,
    seed: u64,
) -> Result<(SparseDataset, Vec<f64>)> {
    if n_features == 0 {
        return Err(Error::InvalidArgument("n_features must be positive".into()));
    }
    if nnz_per_row > n_features {
        return Err(Error::InvalidArgument(format!("nnz_per_row ({nnz_per_row}) exceeds n_features ({n_features})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let planted: Vec<f64> = (0..n_features).map(|_| rng.sample(StandardNormal)).collect();

    let mut row_ptr = Vec::with_capacity(n_examples + 1);
    row_ptr.push(0);
    let mut indices = Vec::with_capacity(n_examples * nnz_per_row);
    let mut values = Vec::with_capacity(n_examples * nnz_per_row);
    let mut labels = Vec::with_capacity(n_examples);
    let mut cols: Vec<usize> = Vec::with_capacity(nnz_per_row);

    for _ in 0..n_examples {
        cols.clear();
        cols.extend(index::sample(&mut rng, n_features, nnz_per_row).iter());
        cols.sort_unstable();
        let mut margin = 0.0;
        for &j in &cols {
            let v: f64 = rng.sample(StandardNormal);
            margin += v * planted[j];
            indices.push(j);
            values.push(v);
        }
        let mut label = if margin >= 0.0 { 1.0 } else { -1.0 };
        if rng.random_bool(LABEL_FLIP_PROBABILITY) {
            label = -label;
        }
        labels.push(label);
        row_ptr.push(indices.len());
    }

    let ds = SparseDataset::from_csr(n_features, row_ptr, indices, values, labels)?;
    Ok((ds, planted))
}
