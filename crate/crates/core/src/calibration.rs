//! Closed-form relations between the neuron parameters and the firing
//! behaviour under a constant plateau drive.
//!
//! With drive plateau `D = 2 a_max r_membrane`, a neuron reset to `v_0`
//! reaches `v_th` after
//!
//! ```text
//! delta = tau * ln((D - v_0) / (D - v_th))
//! ```
//!
//! so an actively driven neuron fires every `t_refract + delta`. A neighbour
//! at rest that receives two excitatory spikes `isi` apart fires iff
//! `w (exp(-isi / tau) + 1) > v_th`.

use alloc::format;

use crate::error::{invalid, Error, Result};
use crate::model::{NeuronParams, SynapseConfig};
use crate::Warning;

fn plateau(params: &NeuronParams, a_max: f64) -> f64 {
    2.0 * a_max * params.r_membrane
}

/// Time (ms) for a reset neuron to charge up to threshold on the plateau.
pub fn charging_time(params: &NeuronParams, a_max: f64) -> Result<f64> {
    if !(params.tau > 0.0) {
        return Err(invalid("tau must be positive"));
    }
    let d = plateau(params, a_max);
    if !(d > params.v_th) {
        return Err(Error::DriveTooWeak { plateau: d, v_th: params.v_th });
    }
    Ok(params.tau * libm::log((d - params.v_reset) / (d - params.v_th)))
}

/// Interval between spikes of an actively driven neuron.
pub fn active_isi(params: &NeuronParams, a_max: f64) -> Result<f64> {
    Ok(params.t_refract + charging_time(params, a_max)?)
}

/// Pulse half-amplitude giving an active inter-spike interval of `target_isi`.
pub fn amax_for_target_isi(params: &NeuronParams, target_isi: f64) -> Result<f64> {
    let delta = target_isi - params.t_refract;
    if !(delta > 0.0) {
        return Err(Error::Infeasible { target: target_isi, t_refract: params.t_refract });
    }
    if !(params.tau > 0.0 && params.r_membrane > 0.0) {
        return Err(invalid("tau and r_membrane must be positive"));
    }
    // (D - v_0) / (D - v_th) = e  =>  D = (e v_th - v_0) / (e - 1)
    let e = libm::exp(delta / params.tau);
    let d = (e * params.v_th - params.v_reset) / (libm::expm1(delta / params.tau));
    Ok(d / (2.0 * params.r_membrane))
}

/// Whether two excitatory spikes `isi` apart push a resting neuron over
/// threshold.
pub fn response_feasible(params: &NeuronParams, syn: &SynapseConfig, isi: f64) -> bool {
    let w = syn.w_excitatory;
    w * (libm::exp(-isi / params.tau) + 1.0) > params.v_th
}

/// `w_excitatory / v_th`.
pub fn alpha(params: &NeuronParams, syn: &SynapseConfig) -> f64 {
    syn.w_excitatory / params.v_th
}

/// Bipolar decoding bounds on the number of spikes a neuron fires while its
/// community is being driven.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FiringThresholds {
    /// Heuristic lower bound: own burst plus responses to a fraction of the
    /// average neighbourhood.
    pub f_min: f64,
    /// Upper bound for a fully connected community of the given order.
    pub f_max: f64,
}

impl FiringThresholds {
    pub fn crossed(&self) -> bool {
        self.f_min > self.f_max
    }

    pub fn warning(&self) -> Option<Warning> {
        self.crossed().then_some(Warning::ThresholdsCrossed { f_min: self.f_min, f_max: self.f_max })
    }
}

/// `f_max = r1 + (order - 1) r2`, `f_min = r1 + (avg_degree / 2 + 1) r2`.
pub fn bipolar_thresholds(r1: u32, r2: u32, community_order: usize, avg_degree: f64) -> FiringThresholds {
    bipolar_thresholds_with_fraction(r1, r2, community_order, avg_degree, 0.5)
}

/// As [`bipolar_thresholds`], with the in-community fraction of neighbours
/// as a parameter.
pub fn bipolar_thresholds_with_fraction(
    r1: u32,
    r2: u32,
    community_order: usize,
    avg_degree: f64,
    neighbor_fraction: f64,
) -> FiringThresholds {
    let (r1, r2) = (f64::from(r1), f64::from(r2));
    let f_max = r1 + community_order.saturating_sub(1) as f64 * r2;
    let f_min = r1 + (neighbor_fraction * avg_degree + 1.0) * r2;
    FiringThresholds { f_min, f_max }
}

/// Inputs of [`calibrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationInputs {
    pub params: NeuronParams,
    pub synapses: SynapseConfig,
    pub a_max: f64,
    pub pulse_width: f64,
    pub community_order: usize,
    pub avg_degree: f64,
    pub neighbor_fraction: f64,
}

/// Everything the closed forms predict for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CalibrationReport {
    pub a_max: f64,
    pub charging_time: f64,
    pub active_isi: f64,
    /// `None` when a neighbour never responds.
    pub response_isi: Option<f64>,
    pub alpha: f64,
    pub response_feasible: bool,
    pub r1: u32,
    pub r2: u32,
    pub f_min: f64,
    pub f_max: f64,
}

/// Spikes fired during one pulse of width `pulse_width`: the first after
/// `charging_time`, then one every `active_isi`.
pub fn active_spike_count(charging_time: f64, active_isi: f64, pulse_width: f64) -> u32 {
    if pulse_width < charging_time {
        0
    } else {
        libm::floor((pulse_width - charging_time) / active_isi) as u32 + 1
    }
}

/// Response of a resting neighbour to a burst of `r1` spikes `active_isi`
/// apart: every arrival fires it when one spike suffices, every other
/// arrival when two are needed, none otherwise. Returns `(r2, response_isi)`.
pub fn response_pattern(params: &NeuronParams, syn: &SynapseConfig, r1: u32, active_isi: f64) -> (u32, Option<f64>) {
    if syn.w_excitatory >= params.v_th && active_isi > params.t_refract {
        (r1, Some(active_isi))
    } else if response_feasible(params, syn, active_isi) {
        (r1 / 2, Some(2.0 * active_isi))
    } else {
        (0, None)
    }
}

pub fn calibrate(inputs: &CalibrationInputs) -> Result<CalibrationReport> {
    let CalibrationInputs { params, synapses, a_max, pulse_width, .. } = *inputs;
    if !(pulse_width > 0.0) {
        return Err(invalid(format!("pulse width {pulse_width} must be positive")));
    }
    let delta = charging_time(&params, a_max)?;
    let isi = params.t_refract + delta;
    let r1 = active_spike_count(delta, isi, pulse_width);
    let (r2, response_isi) = response_pattern(&params, &synapses, r1, isi);
    let thresholds =
        bipolar_thresholds_with_fraction(r1, r2, inputs.community_order, inputs.avg_degree, inputs.neighbor_fraction);
    Ok(CalibrationReport {
        a_max,
        charging_time: delta,
        active_isi: isi,
        response_isi,
        alpha: alpha(&params, &synapses),
        response_feasible: response_feasible(&params, &synapses, isi),
        r1,
        r2,
        f_min: thresholds.f_min,
        f_max: thresholds.f_max,
    })
}
