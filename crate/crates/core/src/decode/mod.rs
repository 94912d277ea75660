//! Spike-train decoding: binary codes, Hamming comparison matrices, bipolar
//! (active / inactive) states, community-level similarity statistics and a
//! seeded nearest-seed classifier.

mod binary;
mod bipolar;
mod metric;
mod reconstruct;
mod similarity;

pub use binary::{binarize, BinaryCodeMatrix, BitVector};
pub use bipolar::{bipolar_decode, window_spike_counts, BipolarStateTable, SpikeCounts, TimeWindow};
pub use metric::{comparison_matrix, hamming_plain, hamming_weighted, ComparisonMatrix, Metric};
pub use reconstruct::{pairwise_scores, reconstruct_from_seeds, PairScores};
pub use similarity::{
    mean_similarity, separability_sweep, sweep_warnings, CommunityMean, SeparabilitySweep, SweepEntry,
};
