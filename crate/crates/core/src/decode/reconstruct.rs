use alloc::format;
use alloc::vec::Vec;

use super::metric::ComparisonMatrix;
use crate::error::{invalid, Result};

/// Assigns every neuron to the seed it is most similar to, provided that
/// similarity reaches `theta`. Seeds always get their own index. Ties go to
/// the lowest seed index. The returned ids are seed indices.
pub fn reconstruct_from_seeds(matrix: &ComparisonMatrix, seeds: &[usize], theta: f64) -> Result<Vec<Option<usize>>> {
    let n = matrix.n();
    for (a, &s) in seeds.iter().enumerate() {
        if s >= n {
            return Err(invalid(format!("seed {s} out of range")));
        }
        if seeds[..a].contains(&s) {
            return Err(invalid(format!("seed {s} given twice")));
        }
    }
    Ok((0..n)
        .map(|i| {
            if let Some(k) = seeds.iter().position(|&s| s == i) {
                return Some(k);
            }
            let mut best: Option<(usize, f64)> = None;
            for (k, &s) in seeds.iter().enumerate() {
                let h = matrix.get(i, s);
                if best.map_or(true, |(_, b)| h > b) {
                    best = Some((k, h));
                }
            }
            best.filter(|&(_, h)| h >= theta).map(|(k, _)| k)
        })
        .collect())
}

/// Pair-counting agreement between a predicted clustering and the truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairScores {
    /// Fraction of predicted same-cluster pairs that share a true label.
    pub precision: f64,
    /// Fraction of true same-label pairs predicted in the same cluster.
    pub recall: f64,
}

/// Scores `predicted` against `truth` over the pairs drawn from `subset`.
/// Unassigned neurons are never in a predicted pair. A ratio with an empty
/// denominator is reported as 1.
pub fn pairwise_scores(predicted: &[Option<usize>], truth: &[usize], subset: &[usize]) -> PairScores {
    let (mut tp, mut pred_pairs, mut true_pairs) = (0u64, 0u64, 0u64);
    for (a, &i) in subset.iter().enumerate() {
        for &j in &subset[a + 1..] {
            let same_pred = matches!((predicted[i], predicted[j]), (Some(x), Some(y)) if x == y);
            let same_true = truth[i] == truth[j];
            pred_pairs += u64::from(same_pred);
            true_pairs += u64::from(same_true);
            tp += u64::from(same_pred && same_true);
        }
    }
    let ratio = |num: u64, den: u64| if den == 0 { 1.0 } else { num as f64 / den as f64 };
    PairScores { precision: ratio(tp, pred_pairs), recall: ratio(tp, true_pairs) }
}
