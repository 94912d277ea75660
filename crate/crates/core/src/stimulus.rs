//! Smooth square drive pulses and the two driving protocols: community by
//! community, or every neuron once in a seeded random order.

use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::graph::LabeledGraph;

/// Distance from the pulse edges, in units of `1/beta`, beyond which the
/// waveform is exactly zero in `f64` (`tanh` saturates to 1 above ~19.1).
const SUPPORT_MARGIN: f64 = 20.0;

/// `a_max * (tanh(beta (t - t1)) + tanh(beta (t2 - t)))`: a plateau of
/// height `2 a_max` between `t1` and `t2` with tanh-shaped edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquarePulse {
    pub target: usize,
    pub t1: f64,
    pub t2: f64,
    pub a_max: f64,
    pub beta: f64,
}

impl SquarePulse {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.t1, self.t2, self.a_max, self.beta].iter().all(|x| x.is_finite());
        if !finite || self.t2 <= self.t1 || self.a_max <= 0.0 || self.beta <= 0.0 {
            return Err(invalid(format!("malformed pulse {self:?}")));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.t2 - self.t1
    }

    pub fn value(&self, t: f64) -> f64 {
        self.a_max * (libm::tanh(self.beta * (t - self.t1)) + libm::tanh(self.beta * (self.t2 - t)))
    }

    /// Interval outside of which `value` is exactly zero.
    pub fn support(&self) -> (f64, f64) {
        let margin = SUPPORT_MARGIN / self.beta;
        (self.t1 - margin, self.t2 + margin)
    }
}

/// Timing and shape shared by every pulse of a protocol. Times in ms.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct PulseTiming {
    /// Rise time of the first pulse; also used as the quiet tail after the
    /// last period.
    pub t_start: f64,
    pub width: f64,
    pub gap: f64,
    pub a_max: f64,
    pub beta: f64,
}

impl Default for PulseTiming {
    fn default() -> Self {
        Self { t_start: 1000.0, width: 200.0, gap: 800.0, a_max: 10.2, beta: 1.0 }
    }
}

impl PulseTiming {
    pub fn period(&self) -> f64 {
        self.width + self.gap
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.t_start, self.width, self.gap, self.a_max, self.beta].iter().all(|x| x.is_finite());
        if !finite {
            return Err(invalid("pulse timing must be finite"));
        }
        if self.t_start < 0.0 || self.width <= 0.0 || self.gap < 0.0 {
            return Err(invalid(format!("need t_start >= 0, width > 0 and gap >= 0, got {self:?}")));
        }
        if self.a_max <= 0.0 || self.beta <= 0.0 {
            return Err(invalid("a_max and beta must be positive"));
        }
        Ok(())
    }
}

/// A driving epoch: the span during which one community's neurons are
/// driven back to back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epoch {
    pub community: usize,
    pub start: f64,
    pub end: f64,
}

/// Time-ordered, pairwise disjoint pulses.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveSchedule {
    pulses: Vec<SquarePulse>,
    total_duration: f64,
    gap: f64,
}

impl DriveSchedule {
    /// Accepts arbitrary pulses as long as they are sorted and disjoint.
    /// `gap` becomes the smallest spacing between consecutive pulses.
    pub fn new(pulses: Vec<SquarePulse>, total_duration: f64) -> Result<Self> {
        for p in &pulses {
            p.validate()?;
        }
        let gap = pulses.windows(2).map(|w| w[1].t1 - w[0].t2).fold(f64::INFINITY, f64::min);
        if gap < 0.0 {
            return Err(invalid("pulses overlap or are out of order"));
        }
        let gap = if gap.is_finite() { gap } else { 0.0 };
        let end = pulses.last().map_or(0.0, |p| p.t2 + gap);
        if !(total_duration >= end) {
            return Err(invalid(format!(
                "total duration {total_duration} ms ends before the last pulse settles at {end} ms"
            )));
        }
        Ok(Self { pulses, total_duration, gap })
    }

    /// One pulse per entry of `order`, period `width + gap`, followed by a
    /// quiet tail of `t_start`.
    pub fn from_order(order: &[usize], timing: &PulseTiming) -> Result<Self> {
        timing.validate()?;
        let period = timing.period();
        let pulses = order
            .iter()
            .enumerate()
            .map(|(k, &target)| {
                let t1 = timing.t_start + k as f64 * period;
                SquarePulse { target, t1, t2: t1 + timing.width, a_max: timing.a_max, beta: timing.beta }
            })
            .collect();
        let total_duration = 2.0 * timing.t_start + order.len() as f64 * period;
        Ok(Self { pulses, total_duration, gap: timing.gap })
    }

    pub fn pulses(&self) -> &[SquarePulse] {
        &self.pulses
    }

    pub fn total_duration(&self) -> f64 {
        self.total_duration
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Largest neuron id targeted, if any.
    pub fn max_target(&self) -> Option<usize> {
        self.pulses.iter().map(|p| p.target).max()
    }

    /// Sum of all pulse waveforms addressed to `neuron` at time `t`.
    pub fn drive_at(&self, neuron: usize, t: f64) -> f64 {
        self.pulses.iter().filter(|p| p.target == neuron).map(|p| p.value(t)).sum()
    }

    /// Groups consecutive pulses whose targets share a community. Each
    /// epoch runs from its first rise to the next epoch's first rise (the
    /// last one ends at its final fall plus the gap).
    pub fn community_epochs(&self, labels: &[usize]) -> Vec<Epoch> {
        let mut epochs: Vec<Epoch> = Vec::new();
        for p in &self.pulses {
            let community = labels[p.target];
            match epochs.last_mut() {
                Some(e) if e.community == community => e.end = p.t2 + self.gap,
                Some(e) => {
                    e.end = p.t1;
                    epochs.push(Epoch { community, start: p.t1, end: p.t2 + self.gap });
                }
                None => epochs.push(Epoch { community, start: p.t1, end: p.t2 + self.gap }),
            }
        }
        epochs
    }
}

/// Drives the listed communities in order, each neuron once, members in
/// ascending id order.
pub fn community_ordered_schedule(
    g: &LabeledGraph,
    communities: &[usize],
    timing: &PulseTiming,
) -> Result<DriveSchedule> {
    let mut order = Vec::with_capacity(g.n());
    for &c in communities {
        if c >= g.num_communities() {
            return Err(invalid(format!("unknown community {c}; the graph has {}", g.num_communities())));
        }
        order.extend(g.community_members(c));
    }
    DriveSchedule::from_order(&order, timing)
}

/// Drives every neuron exactly once in a uniformly random order fixed by
/// `seed`.
pub fn random_permutation_schedule(g: &LabeledGraph, seed: u64, timing: &PulseTiming) -> Result<DriveSchedule> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    DriveSchedule::from_order(&order, timing)
}
