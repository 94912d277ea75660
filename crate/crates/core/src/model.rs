//! Neuron parameters and the graph-to-network mapping.
//!
//! Every vertex becomes a neuron. Every edge becomes a symmetric pair of
//! excitatory synapses, and every non-edge a symmetric pair of inhibitory
//! ones, so the resulting network is fully connected.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::graph::LabeledGraph;

/// Homogeneous leaky integrate-and-fire parameters. Times in ms, potentials
/// in V.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct NeuronParams {
    pub tau: f64,
    pub v_th: f64,
    pub v_reset: f64,
    /// Initial potential of every neuron.
    pub v_rest: f64,
    pub t_refract: f64,
    /// Scale applied to the drive waveform. Drives are given in volts, so
    /// this is 1 unless a current-like drive is wanted.
    pub r_membrane: f64,
}

impl Default for NeuronParams {
    fn default() -> Self {
        Self { tau: 25.0, v_th: 0.8, v_reset: 0.0, v_rest: 0.0, t_refract: 20.0, r_membrane: 1.0 }
    }
}

impl NeuronParams {
    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.tau, self.v_th, self.v_reset, self.v_rest, self.t_refract, self.r_membrane]
            .iter()
            .all(|x| x.is_finite());
        if !all_finite {
            return Err(invalid("neuron parameters must be finite"));
        }
        if self.tau <= 0.0 {
            return Err(invalid(format!("tau = {} must be positive", self.tau)));
        }
        if self.t_refract < 0.0 {
            return Err(invalid(format!("t_refract = {} must be non-negative", self.t_refract)));
        }
        if self.v_reset >= self.v_th {
            return Err(invalid(format!("v_reset = {} must lie below v_th = {}", self.v_reset, self.v_th)));
        }
        if self.v_rest > self.v_th {
            return Err(invalid(format!("v_rest = {} exceeds v_th = {}", self.v_rest, self.v_th)));
        }
        if self.r_membrane <= 0.0 {
            return Err(invalid("r_membrane must be positive"));
        }
        Ok(())
    }
}

/// Synaptic weights (V) for edges and non-edges.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct SynapseConfig {
    pub w_excitatory: f64,
    pub w_inhibitory: f64,
}

impl Default for SynapseConfig {
    fn default() -> Self {
        Self::symmetric(0.75)
    }
}

impl SynapseConfig {
    /// Equal-magnitude weights `+w` / `-w`.
    pub fn symmetric(w: f64) -> Self {
        Self { w_excitatory: w, w_inhibitory: -w }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w_excitatory.is_finite() && self.w_inhibitory.is_finite()) {
            return Err(invalid("synaptic weights must be finite"));
        }
        if !(self.w_excitatory > 0.0 && self.w_inhibitory < 0.0) {
            return Err(invalid(format!(
                "need w_excitatory > 0 > w_inhibitory, got {} and {}",
                self.w_excitatory, self.w_inhibitory
            )));
        }
        Ok(())
    }
}

/// A fully connected network with a dense, symmetric weight matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikingNetwork {
    n: usize,
    params: NeuronParams,
    weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkSummary {
    pub n: usize,
    pub positive: usize,
    pub negative: usize,
}

impl SpikingNetwork {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &NeuronParams {
        &self.params
    }

    /// Weight of the synapse from `pre` onto `post`.
    pub fn weight(&self, pre: usize, post: usize) -> f64 {
        self.weights[pre * self.n + post]
    }

    /// Outgoing weights of `pre`, indexed by postsynaptic neuron.
    pub fn outgoing(&self, pre: usize) -> &[f64] {
        &self.weights[pre * self.n..(pre + 1) * self.n]
    }

    pub fn summary(&self) -> NetworkSummary {
        let positive = self.weights.iter().filter(|&&w| w > 0.0).count();
        let negative = self.weights.iter().filter(|&&w| w < 0.0).count();
        NetworkSummary { n: self.n, positive, negative }
    }

    /// Edge set encoded by the positive entries of the upper triangle.
    pub fn excitatory_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.weight(i, j) > 0.0 {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }
}

pub fn map_graph_to_network(g: &LabeledGraph, params: NeuronParams, syn: SynapseConfig) -> Result<SpikingNetwork> {
    params.validate()?;
    syn.validate()?;
    let n = g.n();
    let mut weights = vec![syn.w_inhibitory; n * n];
    for i in 0..n {
        weights[i * n + i] = 0.0;
    }
    for &(u, v) in g.edges() {
        weights[u * n + v] = syn.w_excitatory;
        weights[v * n + u] = syn.w_excitatory;
    }
    Ok(SpikingNetwork { n, params, weights })
}

pub fn network_summary(net: &SpikingNetwork) -> NetworkSummary {
    net.summary()
}
