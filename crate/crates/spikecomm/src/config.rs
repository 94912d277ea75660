//! Run configuration. Every field defaults to the reference experiment:
//! a 128-vertex, 4-community benchmark graph, tau = 25 ms, v_th = 0.8 V,
//! |w| = 0.75 V, t_refract = 20 ms, 200 ms pulses 800 ms apart.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use spikecomm_core::calibration::amax_for_target_isi;
use spikecomm_core::{Metric, NeuronParams, PartitionSpec, PulseTiming, SimulationConfig, SynapseConfig};

use crate::error::{Error, Result};

pub const CONFIG_FILE: &str = "run_config.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed. The graph uses `seed`, the random schedule `seed + 1`.
    pub seed: u64,
    pub graph: GraphConfig,
    pub neuron: NeuronParams,
    pub synapse: SynapseConfig,
    pub schedule: ScheduleConfig,
    pub simulation: SimulationConfig,
    /// Neurons whose membrane potential is written to `membrane.csv`.
    pub record: Vec<usize>,
    pub decode: DecodeConfig,
    pub output: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            graph: GraphConfig::default(),
            neuron: NeuronParams::default(),
            synapse: SynapseConfig::default(),
            schedule: ScheduleConfig::default(),
            simulation: SimulationConfig::default(),
            record: Vec::new(),
            decode: DecodeConfig::default(),
            output: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphConfig {
    pub n: usize,
    pub communities: usize,
    pub z_out: f64,
    pub avg_degree: f64,
    /// Existing graph: a directory with `edges.csv` and `labels.csv`, or a
    /// JSON bundle. Generated from the parameters above when absent.
    pub input: Option<PathBuf>,
}

impl Default for GraphConfig {
    fn default() -> Self {
        let spec = PartitionSpec::default();
        Self {
            n: spec.n,
            communities: spec.num_communities,
            z_out: spec.z_out,
            avg_degree: spec.avg_degree,
            input: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    CommunityOrdered,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    pub kind: ScheduleKind,
    /// Communities driven, in order (community-ordered only).
    pub drive: Vec<usize>,
    pub t_start: f64,
    pub width: f64,
    pub gap: f64,
    pub beta: f64,
    /// Pulse half-amplitude. Derived from `target_isi` when absent.
    pub a_max: Option<f64>,
    pub target_isi: f64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        let t = PulseTiming::default();
        Self {
            kind: ScheduleKind::CommunityOrdered,
            drive: vec![0, 1, 3],
            t_start: t.t_start,
            width: t.width,
            gap: t.gap,
            beta: t.beta,
            a_max: None,
            target_isi: 21.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecodeConfig {
    pub metric: Metric,
    pub bin_width: f64,
    pub t_origin: f64,
    pub bipolar: bool,
    /// Bipolar threshold. Defaults to the calibrated `f_min`.
    pub f0: Option<f64>,
    /// Bipolar windows as `[start, end)` pairs; driving epochs when absent.
    pub windows: Option<Vec<[f64; 2]>>,
    pub neighbor_fraction: f64,
    pub sweep: Vec<f64>,
    /// Sweep sources; the lowest id of each community when empty.
    pub sources: Vec<usize>,
    /// Seeds for nearest-seed reconstruction on the plain metric; none
    /// disables it.
    pub seeds: Vec<usize>,
    pub theta: f64,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        Self {
            metric: Metric::Weighted,
            bin_width: 8000.0,
            t_origin: 0.0,
            bipolar: false,
            f0: None,
            windows: None,
            neighbor_fraction: 0.5,
            sweep: Vec::new(),
            sources: Vec::new(),
            seeds: Vec::new(),
            theta: 0.0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read(path)?;
        serde_json::from_str(&text).map_err(|e| Error::InFile { path: path.into(), source: Box::new(e.into()) })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn graph_seed(&self) -> u64 {
        self.seed
    }

    pub fn schedule_seed(&self) -> u64 {
        self.seed.wrapping_add(1)
    }

    pub fn partition_spec(&self) -> PartitionSpec {
        PartitionSpec {
            n: self.graph.n,
            num_communities: self.graph.communities,
            z_out: self.graph.z_out,
            avg_degree: self.graph.avg_degree,
            seed: self.graph_seed(),
        }
    }

    pub fn community_order(&self) -> usize {
        self.partition_spec().community_order()
    }

    pub fn a_max(&self) -> Result<f64> {
        match self.schedule.a_max {
            Some(a) => Ok(a),
            None => Ok(amax_for_target_isi(&self.neuron, self.schedule.target_isi)?),
        }
    }

    pub fn pulse_timing(&self) -> Result<PulseTiming> {
        Ok(PulseTiming {
            t_start: self.schedule.t_start,
            width: self.schedule.width,
            gap: self.schedule.gap,
            a_max: self.a_max()?,
            beta: self.schedule.beta,
        })
    }
}

pub(crate) fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_json() {
        let cfg = RunConfig::default();
        let back: RunConfig = serde_json::from_str(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn partial_files_fill_in_defaults() {
        let cfg: RunConfig = serde_json::from_str(r#"{"seed": 9, "schedule": {"kind": "random"}}"#).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.schedule.kind, ScheduleKind::Random);
        assert_eq!(cfg.schedule.width, 200.0);
        assert_eq!(cfg.neuron, NeuronParams::default());
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn derived_values() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.schedule_seed(), 1);
        assert_eq!(cfg.community_order(), 32);
        let a = cfg.a_max().unwrap();
        assert!((a - 10.2).abs() < 0.01);
    }
}
