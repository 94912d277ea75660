use alloc::format;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::simulator::SpikeData;

/// Half-open time window `[start, end)` in ms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub start: f64,
    pub end: f64,
}

impl TimeWindow {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    fn overlaps(&self, other: &Self) -> bool {
        self.start < other.end && other.start < self.end
    }
}

/// Spike counts per neuron (outer index) and window (inner index).
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeCounts {
    pub windows: Vec<TimeWindow>,
    pub counts: Vec<Vec<u32>>,
}

pub fn window_spike_counts(spikes: &SpikeData, windows: &[TimeWindow]) -> Result<SpikeCounts> {
    for (a, w) in windows.iter().enumerate() {
        if !(w.start.is_finite() && w.end.is_finite() && w.start <= w.end) {
            return Err(invalid(format!("window {a} is malformed: {w:?}")));
        }
        if let Some(b) = windows[a + 1..].iter().position(|o| o.overlaps(w)) {
            return Err(invalid(format!("windows {a} and {} overlap", a + 1 + b)));
        }
    }
    let counts = spikes
        .trains()
        .iter()
        .map(|train| {
            windows
                .iter()
                .map(|w| {
                    let lo = train.partition_point(|&t| t < w.start);
                    let hi = train.partition_point(|&t| t < w.end);
                    (hi - lo) as u32
                })
                .collect()
        })
        .collect();
    Ok(SpikeCounts { windows: windows.to_vec(), counts })
}

/// Hopfield-style states: `+1` when a neuron fired at least `threshold`
/// spikes in a window, `-1` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct BipolarStateTable {
    pub windows: Vec<TimeWindow>,
    pub counts: Vec<Vec<u32>>,
    pub states: Vec<Vec<i8>>,
    pub threshold: f64,
}

impl BipolarStateTable {
    pub fn state(&self, neuron: usize, window: usize) -> i8 {
        self.states[neuron][window]
    }
}

pub fn bipolar_decode(counts: &SpikeCounts, f0: f64) -> Result<BipolarStateTable> {
    if !(f0.is_finite() && f0 > 0.0) {
        return Err(invalid(format!("firing threshold {f0} must be positive")));
    }
    let states = counts
        .counts
        .iter()
        .map(|row| row.iter().map(|&c| if f64::from(c) >= f0 { 1 } else { -1 }).collect())
        .collect();
    Ok(BipolarStateTable { windows: counts.windows.clone(), counts: counts.counts.clone(), states, threshold: f0 })
}
