use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::binary::binarize;
use super::metric::{comparison_matrix, ComparisonMatrix, Metric};
use crate::error::{invalid, Error, Result};
use crate::simulator::SpikeData;
use crate::Warning;

/// Mean and population standard deviation of a set of similarities. Both
/// are NaN when `count` is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommunityMean {
    pub community: usize,
    pub mean: f64,
    pub std: f64,
    pub count: usize,
}

fn summarize(community: usize, values: &[f64]) -> CommunityMean {
    let count = values.len();
    if count == 0 {
        return CommunityMean { community, mean: f64::NAN, std: f64::NAN, count };
    }
    let mean = values.iter().sum::<f64>() / count as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count as f64;
    CommunityMean { community, mean, std: libm::sqrt(var), count }
}

fn community_count(labels: &[usize]) -> usize {
    labels.iter().max().map_or(0, |&m| m + 1)
}

/// Average similarity between `source` and the members of each community,
/// leaving out the source's own diagonal entry.
pub fn mean_similarity(matrix: &ComparisonMatrix, labels: &[usize], source: usize) -> Result<Vec<CommunityMean>> {
    if labels.len() != matrix.n() {
        return Err(Error::LengthMismatch { left: labels.len(), right: matrix.n() });
    }
    if source >= matrix.n() {
        return Err(invalid(format!("source {source} out of range")));
    }
    let k = community_count(labels);
    let mut groups = vec![Vec::new(); k];
    for (i, &c) in labels.iter().enumerate() {
        if i != source {
            groups[c].push(matrix.get(i, source));
        }
    }
    Ok(groups.iter().enumerate().map(|(c, g)| summarize(c, g)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepEntry {
    pub bin_width: f64,
    pub source_community: usize,
    pub target_community: usize,
    pub mean: f64,
    pub std: f64,
}

/// Community-level mean similarity curves over a range of bin widths
/// (plain metric).
#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilitySweep {
    pub bin_widths: Vec<f64>,
    pub source_communities: Vec<usize>,
    pub entries: Vec<SweepEntry>,
}

impl SeparabilitySweep {
    fn entry(&self, bin_width: f64, source: usize, target: usize) -> Option<&SweepEntry> {
        self.entries
            .iter()
            .find(|e| e.bin_width == bin_width && e.source_community == source && e.target_community == target)
    }

    /// Same-community mean minus the largest cross-community mean for
    /// sources in `source_community`.
    pub fn source_margin(&self, bin_width: f64, source_community: usize) -> Option<f64> {
        let same = self.entry(bin_width, source_community, source_community)?.mean;
        let cross = self
            .entries
            .iter()
            .filter(|e| {
                e.bin_width == bin_width
                    && e.source_community == source_community
                    && e.target_community != source_community
            })
            .map(|e| e.mean)
            .fold(f64::NEG_INFINITY, f64::max);
        Some(same - cross)
    }

    /// Worst `source_margin` over all source communities.
    pub fn margin(&self, bin_width: f64) -> Option<f64> {
        self.source_communities
            .iter()
            .map(|&c| self.source_margin(bin_width, c))
            .collect::<Option<Vec<_>>>()?
            .into_iter()
            .reduce(f64::min)
    }
}

/// Re-bins the spikes at each width, builds the plain comparison matrix and
/// averages the similarity between each source community's sources and
/// every target community (self-pairs excluded).
pub fn separability_sweep(
    spikes: &SpikeData,
    labels: &[usize],
    bin_widths: &[f64],
    sources: &[usize],
    t_origin: f64,
) -> Result<SeparabilitySweep> {
    let n = spikes.n();
    if labels.len() != n {
        return Err(Error::LengthMismatch { left: labels.len(), right: n });
    }
    if let Some(&bad) = sources.iter().find(|&&s| s >= n) {
        return Err(invalid(format!("source {bad} out of range")));
    }
    let k = community_count(labels);
    let mut source_communities: Vec<usize> = sources.iter().map(|&s| labels[s]).collect();
    source_communities.sort_unstable();
    source_communities.dedup();

    let mut entries = Vec::new();
    for &bin_width in bin_widths {
        let matrix = comparison_matrix(&binarize(spikes, bin_width, t_origin)?, Metric::Plain);
        for &sc in &source_communities {
            let mut groups = vec![Vec::new(); k];
            for &j in sources.iter().filter(|&&s| labels[s] == sc) {
                for (i, &c) in labels.iter().enumerate() {
                    if i != j {
                        groups[c].push(matrix.get(i, j));
                    }
                }
            }
            for (tc, g) in groups.iter().enumerate() {
                let s = summarize(tc, g);
                entries.push(SweepEntry {
                    bin_width,
                    source_community: sc,
                    target_community: tc,
                    mean: s.mean,
                    std: s.std,
                });
            }
        }
    }
    Ok(SeparabilitySweep { bin_widths: bin_widths.to_vec(), source_communities, entries })
}

/// Bin widths outside `(active_isi, pulse_width)` blur responses to
/// consecutive random pulses together or split single bursts.
pub fn sweep_warnings(bin_widths: &[f64], active_isi: f64, pulse_width: f64) -> Vec<Warning> {
    bin_widths
        .iter()
        .filter(|&&w| !(w > active_isi && w < pulse_width))
        .map(|&bin_width| Warning::BinWidthOutsideGuidance { bin_width, lower: active_isi, upper: pulse_width })
        .collect()
}
