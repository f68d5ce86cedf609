//! LIBSVM text format: `<label> <idx>:<val> ...` with 1-based feature indices.

use std::io::{BufRead, Write};

use super::SparseDataset;
use crate::error::{Error, Result};

/// Reads a LIBSVM stream.
///
/// Positive labels map to `+1`, zero and negative labels to `-1`. Text after
/// `#` is ignored, as are blank lines. `n_features` is the larger of the
/// highest index seen and `n_features_hint`.
pub fn read_libsvm<R: BufRead>(source: R, n_features_hint: Option<usize>) -> Result<SparseDataset> {
    let mut row_ptr = vec![0];
    let mut indices = Vec::new();
    let mut values = Vec::new();
    let mut labels = Vec::new();
    let mut max_index = 0usize;

    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let err = |message: String| Error::Parse { line: lineno, message };
        let content = match line.find('#') {
            Some(p) => &line[..p],
            None => &line[..],
        };
        let mut tokens = content.split_ascii_whitespace();
        let Some(label_tok) = tokens.next() else {
            continue;
        };
        let label: f64 = label_tok.parse().map_err(|_| err(format!("unparseable label {label_tok:?}")))?;
        if !label.is_finite() {
            return Err(err(format!("unparseable label {label_tok:?}")));
        }
        labels.push(if label > 0.0 { 1.0 } else { -1.0 });

        let row_start = indices.len();
        for tok in tokens {
            let (i, v) = tok.split_once(':').ok_or_else(|| err(format!("malformed pair {tok:?}")))?;
            let i: usize = i.parse().map_err(|_| err(format!("malformed index in {tok:?}")))?;
            let v: f64 = v.parse().map_err(|_| err(format!("malformed value in {tok:?}")))?;
            if i == 0 {
                return Err(err("feature indices are 1-based".into()));
            }
            if !v.is_finite() {
                return Err(err(format!("non-finite value in {tok:?}")));
            }
            let i = i - 1;
            if indices.len() > row_start && *indices.last().unwrap() >= i {
                return Err(err(format!("indices not increasing at {tok:?}")));
            }
            max_index = max_index.max(i + 1);
            indices.push(i);
            values.push(v);
        }
        row_ptr.push(indices.len());
    }

    let n_features = max_index.max(n_features_hint.unwrap_or(0));
    SparseDataset::from_csr(n_features, row_ptr, indices, values, labels)
}

/// Writes `ds` in LIBSVM format. Values use the shortest decimal that
/// round-trips, so reading the output back reproduces `ds` exactly (given the
/// feature count as hint).
pub fn write_libsvm<W: Write>(ds: &SparseDataset, mut sink: W) -> Result<()> {
    for (y, idx, val) in ds.rows() {
        sink.write_all(if y > 0.0 { b"+1" } else { b"-1" })?;
        for (&i, &v) in idx.iter().zip(val) {
            write!(sink, " {}:{}", i + 1, v)?;
        }
        sink.write_all(b"\n")?;
    }
    sink.flush()?;
    Ok(())
}
