use alloc::vec;
use alloc::vec::Vec;

use super::binary::{BinaryCodeMatrix, BitVector};
use crate::error::{Error, Result};

/// Which Hamming-based similarity fills a comparison matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Metric {
    /// `1 - h / L`, or 0 when either code is all-zero. Range `[0, 1]`.
    Plain,
    /// `(1 - h / L) * ones(x) * ones(y)`. Favors pairs that both fire often.
    Weighted,
}

fn check_lengths(x: &BitVector, y: &BitVector) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { left: x.len(), right: y.len() });
    }
    Ok(())
}

fn agreement(x: &BitVector, y: &BitVector) -> f64 {
    1.0 - f64::from(x.hamming_distance(y)) / x.len() as f64
}

pub fn hamming_plain(x: &BitVector, y: &BitVector) -> Result<f64> {
    check_lengths(x, y)?;
    if x.count_ones() == 0 || y.count_ones() == 0 {
        return Ok(0.0);
    }
    Ok(agreement(x, y))
}

pub fn hamming_weighted(x: &BitVector, y: &BitVector) -> Result<f64> {
    check_lengths(x, y)?;
    let (a, b) = (x.count_ones(), y.count_ones());
    if a == 0 || b == 0 {
        return Ok(0.0);
    }
    // The integer product keeps the value exactly symmetric in x and y.
    Ok(agreement(x, y) * (u64::from(a) * u64::from(b)) as f64)
}

impl Metric {
    pub fn eval(self, x: &BitVector, y: &BitVector) -> Result<f64> {
        match self {
            Metric::Plain => hamming_plain(x, y),
            Metric::Weighted => hamming_weighted(x, y),
        }
    }
}

/// Dense symmetric `n x n` similarity matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonMatrix {
    n: usize,
    values: Vec<f64>,
    metric: Metric,
    bin_width: f64,
}

impl ComparisonMatrix {
    /// Wraps precomputed values; `values.len()` must be `n * n`.
    pub fn from_values(n: usize, values: Vec<f64>, metric: Metric, bin_width: f64) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::LengthMismatch { left: values.len(), right: n * n });
        }
        Ok(Self { n, values, metric, bin_width })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Applies `metric` to every pair of codes. Only the upper triangle is
/// evaluated; the lower one is mirrored.
pub fn comparison_matrix(codes: &BinaryCodeMatrix, metric: Metric) -> ComparisonMatrix {
    let n = codes.n();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            // Rows of one matrix always share a length.
            let h = metric.eval(codes.row(i), codes.row(j)).expect("equal code lengths");
            values[i * n + j] = h;
            values[j * n + i] = h;
        }
    }
    ComparisonMatrix { n, values, metric, bin_width: codes.bin_width() }
}
