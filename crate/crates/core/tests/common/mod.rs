//! Brute-force reference implementations and random instance generators
//! shared by the integration suites.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spikecomm_core::decode::TimeWindow;
use spikecomm_core::SpikeData;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bits are plain `bool` slices here; nothing is packed.
pub fn hamming(x: &[bool], y: &[bool]) -> u32 {
    x.iter().zip(y).filter(|(a, b)| a != b).count() as u32
}

pub fn ones(x: &[bool]) -> u32 {
    x.iter().filter(|&&b| b).count() as u32
}

pub fn plain(x: &[bool], y: &[bool]) -> f64 {
    if ones(x) == 0 || ones(y) == 0 {
        return 0.0;
    }
    1.0 - f64::from(hamming(x, y)) / x.len() as f64
}

pub fn weighted(x: &[bool], y: &[bool]) -> f64 {
    if ones(x) == 0 || ones(y) == 0 {
        return 0.0;
    }
    (1.0 - f64::from(hamming(x, y)) / x.len() as f64) * f64::from(ones(x) * ones(y))
}

pub fn matrix(rows: &[Vec<bool>], f: fn(&[bool], &[bool]) -> f64) -> Vec<f64> {
    let n = rows.len();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(f(&rows[i], &rows[j]));
        }
    }
    out
}

/// Scans every bin and asks whether any spike falls inside it. Times and
/// widths must be exactly representable for the comparisons to be exact.
pub fn binarize(trains: &[Vec<f64>], duration: f64, bin_width: f64, origin: f64) -> Vec<Vec<bool>> {
    let mut len = 1;
    while origin + len as f64 * bin_width < duration {
        len += 1;
    }
    trains
        .iter()
        .map(|train| {
            (0..len)
                .map(|k| {
                    let lo = origin + k as f64 * bin_width;
                    let hi = lo + bin_width;
                    train.iter().any(|&t| t >= lo && (t < hi || (k == len - 1 && t <= duration)))
                })
                .collect()
        })
        .collect()
}

pub fn counts(trains: &[Vec<f64>], windows: &[TimeWindow]) -> Vec<Vec<u32>> {
    trains
        .iter()
        .map(|train| {
            windows.iter().map(|w| train.iter().filter(|&&t| w.start <= t && t < w.end).count() as u32).collect()
        })
        .collect()
}

/// `(mean, population std, count)` of `matrix[i][source]` per community,
/// excluding `i == source`.
pub fn community_means(matrix: &[f64], labels: &[usize], source: usize) -> Vec<(f64, f64, usize)> {
    let n = labels.len();
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    (0..k)
        .map(|c| {
            let vals: Vec<f64> =
                (0..n).filter(|&i| i != source && labels[i] == c).map(|i| matrix[i * n + source]).collect();
            if vals.is_empty() {
                return (f64::NAN, f64::NAN, 0);
            }
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / vals.len() as f64;
            (mean, var.sqrt(), vals.len())
        })
        .collect()
}

pub fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> Vec<bool> {
    let density: f64 = rng.gen_range(0.0..1.0);
    (0..len).map(|_| rng.gen_bool(density)).collect()
}

/// Spike trains on a quarter-millisecond grid, so every bin boundary
/// comparison is exact.
pub fn random_trains(rng: &mut ChaCha8Rng, n: usize, duration: f64) -> Vec<Vec<f64>> {
    let slots = (duration * 4.0) as u32;
    (0..n)
        .map(|_| {
            let k = rng.gen_range(0..12);
            let mut t: Vec<f64> = (0..k).map(|_| f64::from(rng.gen_range(0..=slots)) / 4.0).collect();
            t.sort_by(f64::total_cmp);
            t.dedup();
            t
        })
        .collect()
}

pub fn random_spikes(rng: &mut ChaCha8Rng, n: usize, duration: f64) -> SpikeData {
    SpikeData::new(random_trains(rng, n, duration), duration).expect("valid trains")
}

pub fn random_labels(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=n.min(4));
    let mut labels: Vec<usize> = (0..n).map(|i| if i < k { i } else { rng.gen_range(0..k) }).collect();
    labels.sort_unstable();
    labels
}
