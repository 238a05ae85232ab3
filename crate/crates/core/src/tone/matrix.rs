use std::io::Write;
use std::sync::OnceLock;

use rayon::prelude::*;

use super::{all_transcriptions, tone_distance, Transcription};
use crate::error::{Error, Result};

/// Symmetric, nonnegative, zero-diagonal dissimilarity matrix with row labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    values: Vec<f64>,
}

impl DistanceMatrix {
    /// Validates a row-major `n × n` matrix.
    pub fn new(labels: Vec<String>, values: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Empty("distance matrix"));
        }
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                what: "distance matrix entries",
                expected: n * n,
                found: values.len(),
            });
        }
        for i in 0..n {
            if values[i * n + i] != 0.0 {
                return Err(Error::Matrix(format!("diagonal entry {i} is {}", values[i * n + i])));
            }
            for j in (i + 1)..n {
                let (a, b) = (values[i * n + j], values[j * n + i]);
                if !a.is_finite() || !b.is_finite() || a < 0.0 || b < 0.0 {
                    return Err(Error::Matrix(format!("entry ({i}, {j}) is not a finite nonnegative value")));
                }
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::Matrix(format!("not symmetric at ({i}, {j}): {a} vs {b}")));
                }
            }
        }
        Ok(DistanceMatrix { labels, values })
    }

    /// Builds the matrix from a pairwise function evaluated on the upper triangle.
    pub fn from_fn<F>(labels: Vec<String>, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> f64 + Sync,
    {
        let n = labels.len();
        let upper: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| ((i + 1)..n).map(|j| f(i, j)).collect())
            .collect();
        let mut values = vec![0.0; n * n];
        for (i, row) in upper.into_iter().enumerate() {
            for (off, v) in row.into_iter().enumerate() {
                let j = i + 1 + off;
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        DistanceMatrix::new(labels, values)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.values[i * n..(i + 1) * n]
    }

    /// Same matrix with items reordered so that new item `k` is old item `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.len();
        if order.len() != n {
            return Err(Error::DimensionMismatch {
                what: "permutation length",
                expected: n,
                found: order.len(),
            });
        }
        let labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        let mut values = Vec::with_capacity(n * n);
        for &i in order {
            for &j in order {
                values.push(self.get(i, j));
            }
        }
        DistanceMatrix::new(labels, values)
    }

    /// CSV with a header row of labels and one labeled row per item, six decimals.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["label".to_string()];
        header.extend(self.labels.iter().cloned());
        w.write_record(&header)?;
        for (i, label) in self.labels.iter().enumerate() {
            let mut record = vec![label.clone()];
            record.extend(self.row(i).iter().map(|v| format!("{v:.6}")));
            w.write_record(&record)?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }
}

/// Pairwise tone distances, labels in input order.
pub fn build_distance_matrix(ls: &[Transcription]) -> Result<DistanceMatrix> {
    if ls.is_empty() {
        return Err(Error::Empty("transcription list"));
    }
    let labels = ls.iter().map(Transcription::to_string).collect();
    DistanceMatrix::from_fn(labels, |i, j| tone_distance(&ls[i], &ls[j]))
}

/// The precomputed 150 × 150 matrix over every transcription, in canonical order.
pub fn database() -> &'static DistanceMatrix {
    static DB: OnceLock<DistanceMatrix> = OnceLock::new();
    DB.get_or_init(|| build_distance_matrix(&all_transcriptions()).expect("150 valid transcriptions"))
}

/// Tone distance looked up in [`database`].
pub fn database_distance(l1: &Transcription, l2: &Transcription) -> f64 {
    database().get(l1.canonical_index(), l2.canonical_index())
}
