//! Dataset ingestion, synthetic generation and CSV export.

pub mod csv;
mod dataset;
mod libsvm;
mod synthetic;

pub use csv::{write_mean_curve_csv, write_sweep_csv, write_trace_csv, CsvTrace};
pub use dataset::SparseDataset;
pub use libsvm::{read_libsvm, write_libsvm};
pub use synthetic::{generate_synthetic, LABEL_FLIP_PROBABILITY};
