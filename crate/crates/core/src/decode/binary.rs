use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::simulator::SpikeData;
use crate::Warning;

/// A fixed-length bit string packed into `u64` words. Bits past `len` are
/// always zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (k, &b) in bits.iter().enumerate() {
            if b {
                v.set(k);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, k: usize) {
        assert!(k < self.len, "bit {k} out of range for length {}", self.len);
        self.words[k / 64] |= 1 << (k % 64);
    }

    pub fn get(&self, k: usize) -> bool {
        k < self.len && self.words[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Number of differing positions. Lengths must match.
    pub fn hamming_distance(&self, other: &Self) -> u32 {
        debug_assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a ^ b).count_ones()).sum()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|k| self.get(k)).collect()
    }
}

/// One binary code per neuron; bit `k` is set iff the neuron spiked in
/// `[t_origin + k dt, t_origin + (k + 1) dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryCodeMatrix {
    rows: Vec<BitVector>,
    bin_width: f64,
    t_origin: f64,
    len: usize,
}

impl BinaryCodeMatrix {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Bits per code.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn t_origin(&self) -> f64 {
        self.t_origin
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    /// `SingleBin` when the codes cannot distinguish anything in time.
    pub fn warning(&self, duration: f64) -> Option<Warning> {
        (self.len == 1).then_some(Warning::SingleBin { bin_width: self.bin_width, duration })
    }
}

/// Bins each spike train with half-open bins of width `bin_width` starting
/// at `t_origin`. The code length is `ceil((duration - t_origin) / bin_width)`
/// (at least one bit). Spikes before the origin are dropped; a spike exactly
/// on the recording horizon lands in the last bin.
pub fn binarize(spikes: &SpikeData, bin_width: f64, t_origin: f64) -> Result<BinaryCodeMatrix> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(invalid(format!("bin width {bin_width} must be positive")));
    }
    if !t_origin.is_finite() {
        return Err(invalid("bin origin must be finite"));
    }
    let span = spikes.duration() - t_origin;
    let len = (libm::ceil(span / bin_width) as usize).max(1);
    let rows = spikes
        .trains()
        .iter()
        .map(|train| {
            let mut row = BitVector::zeros(len);
            for &t in train.iter().filter(|&&t| t >= t_origin) {
                let k = libm::floor((t - t_origin) / bin_width) as usize;
                row.set(k.min(len - 1));
            }
            row
        })
        .collect();
    Ok(BinaryCodeMatrix { rows, bin_width, t_origin, len })
}
