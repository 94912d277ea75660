//! Community detection in undirected graphs with networks of leaky
//! integrate-and-fire neurons.
//!
//! A graph is mapped onto a fully connected spiking network (edges become
//! excitatory synapses, non-edges inhibitory ones). Neurons are driven one at
//! a time by smooth square pulses, the network is integrated on a fixed clock,
//! and the resulting spike trains are decoded into Hamming-similarity
//! matrices, bipolar activity states and community assignments.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, configuration
//! and the command line live in the `spikecomm` companion crate.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod calibration;
pub mod decode;
mod error;
pub mod graph;
pub mod model;
pub mod simulator;
pub mod stimulus;
mod warning;

pub use error::{Error, Result};
pub use warning::Warning;

pub use calibration::{CalibrationReport, FiringThresholds};
pub use decode::{BinaryCodeMatrix, BipolarStateTable, BitVector, ComparisonMatrix, Metric};
pub use graph::{LabeledGraph, PartitionSpec};
pub use model::{NeuronParams, SpikingNetwork, SynapseConfig};
pub use simulator::{MembraneTrace, SimulationConfig, SpikeData};
pub use stimulus::{DriveSchedule, PulseTiming, SquarePulse};
